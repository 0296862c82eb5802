# %% [markdown]
# # Running the q-linear process
#
# Each step adds a uniformly random available q-set.  Runs are reproducible
# from a seed, and checkpoints record |H(i)| (exact where the clique count
# is cheap, otherwise a Monte Carlo estimate).

# %%
import numpy as np

from qlinear import ProcessConfig, ProcessState, run, sample_available

state, trace = run(ProcessConfig(n=60, q=3, seed=7, checkpoint_stride=50))
print("edges at maximality:", state.step)
print("covered fraction:", state.step * 6 / (60 * 59))
for cp in trace.checkpoints[:5]:
    print(cp.step, cp.available, "exact" if cp.available_exact else "estimated")

# %% [markdown]
# The sampler is exactly uniform on H(i).  After one edge on six vertices
# there are ten available triples; each should come up about equally often.

# %%
s = ProcessState(6, 3, seed=1)
s.add((0, 1, 2))
draws = [sample_available(s) for _ in range(20_000)]
labels, counts = np.unique(np.array(draws), axis=0, return_counts=True)
for lab, c in zip(labels, counts):
    print(tuple(int(v) for v in lab), c)

# %% [markdown]
# Same seed, same run; a different seed gives a different run.

# %%
a, _ = run(ProcessConfig(30, 3, seed=3))
b, _ = run(ProcessConfig(30, 3, seed=3))
c, _ = run(ProcessConfig(30, 3, seed=4))
print(a.hypergraph.edges == b.hypergraph.edges, a.hypergraph.edges == c.hypergraph.edges)
