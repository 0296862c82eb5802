# %% [markdown]
# # Seeded sweeps
#
# ``run_experiment`` is what the ``qlinear`` command drives.  It writes one
# trace CSV and summary JSON per run, and an aggregate for sweeps.  Run k
# of a sweep uses seed base + k, so serial and parallel sweeps agree byte
# for byte.

# %%
import json
import tempfile
from pathlib import Path

from qlinear.experiment import ExperimentSpec, run_experiment

out = Path(tempfile.mkdtemp())
spec = ExperimentSpec(mode="sweep", n=[50, 100], q=[3], runs=4, stop="maximal", jobs=1, out=str(out))
run_experiment(spec)
for key, row in json.loads((out / "aggregate.json").read_text()).items():
    print(key, round(row["mean_fraction"], 4), round(row["sd_fraction"], 4))
print(sorted(p.name for p in out.iterdir())[:4])
