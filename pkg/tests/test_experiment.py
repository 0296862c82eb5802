import csv
import json
from math import comb

import pytest

from qlinear.cli import main, read_config
from qlinear.experiment import ExperimentSpec, aggregate, fmt, parse_stop, run_experiment


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_fmt():
    assert fmt(True) == "1" and fmt(False) == "0"
    assert fmt(None) == "" and fmt(float("nan")) == ""
    assert fmt(3.0) == "3" and fmt(7) == "7"
    assert float(fmt(0.1)) == 0.1 and fmt(1 / 3) == "0.33333333333333331"


def test_parse_stop():
    assert parse_stop("m0") == ("m0", None)
    assert parse_stop("steps:12") == ("steps", 12)
    for bad in ("steps:-1", "forever", "steps:x"):
        with pytest.raises(ValueError):
            parse_stop(bad)


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec(mode="run", n=[5], q=[6])
    with pytest.raises(ValueError):
        ExperimentSpec(mode="run", n=[10], q=[3], runs=0)
    with pytest.raises(ValueError):
        ExperimentSpec(mode="launch", n=[10], q=[3])


def test_q2_maximal_run(tmp_path):
    assert main(["run", "--n", "30", "--q", "2", "--stop", "maximal", "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "summary_n30_q2_s0.json").read_text())
    assert summary["edges"] == comb(30, 2) == 435
    assert summary["covered_fraction"] == 1.0 and summary["maximal"]


def test_maximal_mode_prop2_range(tmp_path):
    assert main(["maximal", "--n", "8", "--q", "4", "--runs", "100", "--jobs", "1", "--out", str(tmp_path)]) == 0
    edges = {json.loads(p.read_text())["edges"] for p in tmp_path.glob("summary_*.json")}
    assert len(list(tmp_path.glob("summary_*.json"))) == 100
    assert edges <= {2, 3}


def test_curves(tmp_path):
    assert main(["curves", "--n", "100", "--q", "3", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "curves_n100_q3.csv")
    assert rows[0] == ["t", "p", "h", "eps_H", "y_0", "y_1", "y_2", "eps_0", "eps_1", "eps_2"]
    # t = 0 plus one row per step up to m0 = 134
    assert len(rows) - 1 == 135
    assert float(rows[1][2]) == pytest.approx(comb(100, 3))
    assert rows[1][2] == rows[1][4] and rows[1][3] == rows[1][7]


def test_trace_columns_and_rows(tmp_path):
    spec = ExperimentSpec(mode="run", n=[40], q=[3], stop="steps:50", stride=7, out=str(tmp_path),
                          tracked_per_size=3)
    assert run_experiment(spec) == 0
    rows = read_csv(tmp_path / "trace_n40_q3_s0.csv")
    head = rows[0]
    assert head[:7] == ["step", "t", "p", "H_exact_or_est", "H_is_exact", "h_pred", "eps_H"]
    assert head[7:11] == ["J_empty_Y", "J_empty_Y_est", "J_empty_frozen", "J_empty_band_good"]
    assert len(head) == 7 + 4 * 7
    assert len(rows) - 1 == -(-50 // 7) + 1
    assert rows[1][0] == "0" and rows[-1][0] == "50"


def test_sweep_aggregate(tmp_path):
    out = tmp_path / "s"
    assert main(["sweep", "--n", "30", "40", "--q", "3", "--runs", "2", "--stop", "maximal",
                 "--jobs", "1", "--out", str(out)]) == 0
    agg = json.loads((out / "aggregate.json").read_text())
    assert list(agg) == ["n=30,q=3", "n=40,q=3"]
    assert agg["n=30,q=3"]["runs"] == 2
    assert 0 < agg["n=30,q=3"]["min_fraction"] <= agg["n=30,q=3"]["max_fraction"] <= 1


def test_aggregate_single_and_mixed():
    one = aggregate([{"n": 10, "q": 3, "covered_fraction": 0.8, "edges": 12, "band_good_m0": True}])
    assert one["n=10,q=3"]["mean_fraction"] == 0.8 and one["n=10,q=3"]["sd_fraction"] == 0
    mixed = aggregate([
        {"n": 10, "q": 3, "covered_fraction": 0.8, "edges": 12, "band_good_m0": True},
        {"n": 10, "q": 4, "covered_fraction": 0.5, "edges": 4, "band_good_m0": None},
    ])
    assert set(mixed) == {"n=10,q=3", "n=10,q=4"}
    with pytest.raises(ValueError):
        aggregate([])


def test_bounds_mode(tmp_path):
    assert main(["bounds", "--n", "10", "--q", "3", "4", "--runs", "4", "--jobs", "1", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "bounds.json").read_text())
    assert report["passed"] and len(report["runs"]) == 8


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "exp.conf"
    cfg.write_text("# sweep settings\nn = 20\nn = 24\nq = 3\nruns = 2\nstop = maximal\njobs = 1\n"
                   f"out = {tmp_path / 'a'}\n")
    conf = read_config(str(cfg))
    assert conf["n"] == [20, 24] and conf["runs"] == 2 and conf["stop"] == "maximal"
    assert main(["sweep", "--config", str(cfg), "--runs", "1", "--out", str(tmp_path / "b")]) == 0
    assert len(list((tmp_path / "b").glob("summary_*.json"))) == 2
    assert not (tmp_path / "a").exists()


def test_usage_errors(tmp_path, capsys):
    assert main(["run", "--n", "3", "--q", "5", "--out", str(tmp_path)]) == 2
    assert main(["run", "--n", "10", "--q", "3", "--stop", "later", "--out", str(tmp_path)]) == 2
    bad = tmp_path / "bad.conf"
    bad.write_text("colour = blue\n")
    assert main(["run", "--config", str(bad)]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["dance"])
    assert exc.value.code == 2


def test_verify_subset(tmp_path, monkeypatch):
    from qlinear import experiment

    monkeypatch.setattr(experiment, "run_suites", lambda seed=0: {"identities": {"passed": True}})
    assert main(["verify", "--out", str(tmp_path)]) == 0
    monkeypatch.setattr(experiment, "run_suites", lambda seed=0: {"identities": {"passed": False}})
    assert main(["verify", "--out", str(tmp_path)]) == 1
