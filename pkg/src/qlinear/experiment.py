"""Seeded experiments: run specs, trace/summary files and aggregation.

Run ``k`` of a spec uses seed ``base_seed + k``, so serial and parallel
sweeps produce identical files.  Floats are written with 17 significant
digits; wall time appears only in summaries, never in traces.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .codegree import CodegreeTracker
from .hypergraph import LinearHypergraph
from .oracle import proposition_bounds
from .process import ProcessConfig, ProcessTrace, run
from .trajectory import TrajectoryParams, eps_value, make_params, y_value
from .verify import run_suites

MODES = ("run", "maximal", "sweep", "verify", "bounds", "curves")


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return ""
    if x.is_integer() and abs(x) < 2**53:
        return str(int(x))
    return format(x, ".17g")


@dataclass
class ExperimentSpec:
    mode: str
    n: list[int]
    q: list[int]
    seed: int = 0
    runs: int = 1
    stop: str = "m0"
    stride: int | None = None
    samples: int = 4000
    jobs: int | None = None
    out: str = "out"
    enum_budget: int = 200_000
    rejection_cap: int | None = None
    tracked_per_size: int = 25
    track: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode != "verify":
            if not self.n or not self.q:
                raise ValueError("at least one n and one q are required")
            for n, q in self.pairs():
                if not 2 <= q <= n:
                    raise ValueError(f"need 2 <= q <= n, got n={n}, q={q}")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        parse_stop(self.stop)

    def pairs(self) -> list[tuple[int, int]]:
        return [(n, q) for n in self.n for q in self.q]


def parse_stop(stop: str) -> tuple[str, int | None]:
    if stop in ("m0", "maximal"):
        return stop, None
    if stop.startswith("steps:"):
        k = int(stop.split(":", 1)[1])
        if k < 0:
            raise ValueError("steps must be >= 0")
        return "steps", k
    raise ValueError(f"bad stop {stop!r}; use m0, maximal or steps:K")


def _params(n: int, q: int) -> TrajectoryParams | None:
    try:
        return make_params(n, q)
    except ValueError:
        return None


def resolve_steps(stop: str, n: int, q: int) -> int | None:
    kind, k = parse_stop(stop)
    if kind == "maximal":
        return None
    if kind == "m0":
        params = _params(n, q)
        if params is None:
            raise ValueError(f"m0 is undefined for n={n}, q={q}")
        return params.m0
    return k


@dataclass
class RunSummary:
    n: int
    q: int
    seed: int
    edges: int
    covered_fraction: float
    steps: int
    stop: str
    maximal: bool
    band_good_m0: bool | None
    max_rel_dev_H: float | None
    m0: int | None
    wall_time: float
    status: str = "ok"
    error: str | None = None
    edge_list: list = field(default_factory=list)


def trace_rows(trace: ProcessTrace, params: TrajectoryParams | None, tracker: CodegreeTracker | None):
    n, q = trace.config.n, trace.config.q
    header = ["step", "t", "p", "H_exact_or_est", "H_is_exact", "h_pred", "eps_H"]
    labels = [ts.label for ts in tracker.tracked] if tracker else []
    for lab in labels:
        header += [f"J_{lab}_Y", f"J_{lab}_Y_est", f"J_{lab}_frozen", f"J_{lab}_band_good"]
    rows = [header]
    for cp in trace.checkpoints:
        t = cp.step / (n * (n - 1))
        p = 1 - q * (q - 1) * t
        h = eps = None
        if params is not None and p > 0:
            h, eps = y_value(params, 0, t), eps_value(params, 0, t)
        row = [cp.step, t, p, cp.available, cp.available_exact, h, eps]
        for r in cp.residuals:
            good = None if params is None or math.isnan(r.y) else r.good
            row += [r.value, r.estimated, r.frozen, good]
        rows.append([fmt(v) for v in row])
    return rows


def trace_csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def run_one(n: int, q: int, seed: int, spec: ExperimentSpec) -> tuple[RunSummary, str]:
    """One seeded run; returns its summary and trace CSV text."""
    params = _params(n, q)
    steps = None if spec.mode in ("maximal", "bounds") else resolve_steps(spec.stop, n, q)
    cfg = ProcessConfig(n, q, seed=seed, steps=steps, rejection_cap=spec.rejection_cap,
                        checkpoint_stride=spec.stride, samples=spec.samples,
                        enum_budget=spec.enum_budget)
    tracker = None
    if spec.track and params is not None:
        tracker = CodegreeTracker.for_run(n, q, seed, params, per_size=spec.tracked_per_size,
                                          budget=spec.enum_budget)
    start = time.perf_counter()
    state, trace = run(cfg, tracker)
    wall = time.perf_counter() - start
    last = trace.checkpoints[-1]
    maximal = last.available_exact and last.available == 0
    band = max_dev = None
    if params is not None:
        band, max_dev = True, 0.0
        for cp in trace.checkpoints:
            if cp.step > params.m0:
                break
            t = cp.step / (n * (n - 1))
            h, eps = y_value(params, 0, t), eps_value(params, 0, t)
            max_dev = max(max_dev, abs(cp.available - h) / h)
            band = band and abs(cp.available - h) <= eps
        if tracker is not None:
            band = band and tracker.good
    summary = RunSummary(
        n=n, q=q, seed=seed, edges=state.step,
        covered_fraction=state.step * q * (q - 1) / (n * (n - 1)),
        steps=state.step, stop="maximal" if steps is None else spec.stop,
        maximal=maximal, band_good_m0=band, max_rel_dev_H=max_dev,
        m0=params.m0 if params else None, wall_time=wall,
        edge_list=[list(e) for e in state.hypergraph.edges])
    return summary, trace_csv(trace_rows(trace, params, tracker))


def _task(args):
    n, q, seed, spec = args
    try:
        return run_one(n, q, seed, spec)
    except Exception as exc:  # recorded, the sweep carries on
        return RunSummary(n=n, q=q, seed=seed, edges=0, covered_fraction=0.0, steps=0,
                          stop=spec.stop, maximal=False, band_good_m0=None, max_rel_dev_H=None,
                          m0=None, wall_time=0.0, status="error", error=repr(exc)), None


def _map(fn, tasks, jobs):
    jobs = jobs or os.cpu_count() or 1
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def aggregate(summaries) -> dict:
    """Per-(n, q) statistics of the covered-pair fraction and the band rate."""
    if not summaries:
        raise ValueError("need at least one summary")
    groups: dict[tuple[int, int], list] = {}
    for s in summaries:
        s = s if isinstance(s, dict) else asdict(s)
        groups.setdefault((s["n"], s["q"]), []).append(s)
    out = {}
    for (n, q) in sorted(groups):
        rows = groups[(n, q)]
        ok = [r for r in rows if r.get("status", "ok") == "ok"]
        fr = [r["covered_fraction"] for r in ok]
        bands = [r["band_good_m0"] for r in ok if r.get("band_good_m0") is not None]
        out[f"n={n},q={q}"] = {
            "n": n, "q": q, "runs": len(rows), "failed": len(rows) - len(ok),
            "mean_fraction": statistics.fmean(fr) if fr else None,
            "sd_fraction": statistics.pstdev(fr) if fr else None,
            "min_fraction": min(fr) if fr else None,
            "max_fraction": max(fr) if fr else None,
            "mean_edges": statistics.fmean(r["edges"] for r in ok) if ok else None,
            "band_rate": sum(bands) / len(bands) if bands else None,
        }
    return out


def curves_rows(params: TrajectoryParams, stride: int = 1):
    n, q = params.n, params.q
    header = ["t", "p", "h", "eps_H"] + [f"y_{j}" for j in range(q)] + [f"eps_{j}" for j in range(q)]
    rows = [header]
    steps = list(range(0, params.m0 + 1, stride))
    if steps[-1] != params.m0:
        steps.append(params.m0)
    for i in steps:
        t = i / (n * (n - 1))
        ys = [y_value(params, j, t) for j in range(q)]
        es = [eps_value(params, j, t) for j in range(q)]
        rows.append([fmt(v) for v in [t, params.p(params.t_of_step(i)), ys[0], es[0], *ys, *es]])
    return rows


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def run_experiment(spec: ExperimentSpec) -> int:
    """Execute ``spec`` and write its artifacts; returns a process exit code."""
    out = Path(spec.out)
    out.mkdir(parents=True, exist_ok=True)

    if spec.mode == "verify":
        results = run_suites(seed=spec.seed)
        _write_json(out / "verify.json", results)
        return 0 if all(r["passed"] for r in results.values()) else 1

    if spec.mode == "curves":
        for n, q in spec.pairs():
            params = _params(n, q)
            if params is None:
                raise ValueError(f"curves need 3 <= q <= n and n > e, got n={n}, q={q}")
            (out / f"curves_n{n}_q{q}.csv").write_text(trace_csv(curves_rows(params, spec.stride or 1)))
        return 0

    tasks = [(n, q, spec.seed + k, spec) for n, q in spec.pairs() for k in range(spec.runs)]
    results = _map(_task, tasks, spec.jobs)
    summaries = [s for s, _ in results]

    if spec.mode == "bounds":
        reports, failed = [], False
        for s in summaries:
            if s.status != "ok":
                failed = True
                reports.append({"n": s.n, "q": s.q, "seed": s.seed, "error": s.error})
                continue
            h = LinearHypergraph(s.n, s.q, s.edge_list)
            rep = proposition_bounds(s.n, s.q, h, maximal=s.maximal)
            failed |= not (rep.passed and rep.maximal)
            reports.append({"seed": s.seed, "passed": rep.passed, **asdict(rep)})
        _write_json(out / "bounds.json", {"passed": not failed, "runs": reports})
        return 1 if failed else 0

    for (s, text) in results:
        stem = f"n{s.n}_q{s.q}_s{s.seed}"
        if text is not None:
            (out / f"trace_{stem}.csv").write_text(text)
        _write_json(out / f"summary_{stem}.json", asdict(s))
    if spec.mode == "sweep":
        _write_json(out / "aggregate.json", aggregate(summaries))
    return 0 if all(s.status == "ok" for s in summaries) else 1
