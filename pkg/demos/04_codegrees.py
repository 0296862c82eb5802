# %% [markdown]
# # Codegrees along a run
#
# Y_J counts the ways to complete J to an available edge.  A tracker
# follows J = {} plus a random family of small sets, freezes sets that can
# no longer be completed and checks each value against y_j +- eps_j.

# %%
import numpy as np

from qlinear import CodegreeTracker, LinearHypergraph, ProcessConfig, exact_codegree, make_params, run, sampled_codegree

h = LinearHypergraph(6, 3, [(1, 2, 3)])
print("Y_{4} =", exact_codegree(h, (4,)), " Y_{1,2} =", exact_codegree(h, (1, 2)))
print("sampled Y_{4}:", sampled_codegree(h, (4,), 5000, np.random.default_rng(0)))

# %%
n, q = 200, 3
params = make_params(n, q)
tracker = CodegreeTracker.for_run(n, q, seed=0, params=params, per_size=5)
state, trace = run(ProcessConfig(n, q, seed=0, steps=params.m0), tracker)
print("checkpoints:", len(trace.checkpoints), " G held through m0:", tracker.good)
print("max relative deviation of |H| from h:", round(tracker.max_rel_dev_H, 4))
last = trace.checkpoints[-1]
for r in last.residuals[:4]:
    print(r.J, r.value, round(r.y, 1), round(r.eps, 1), r.good)
