# %% [markdown]
# # Exact oracles
#
# The expected one-step change of |Y_J| has a signed inclusion-exclusion
# form.  On small states it is compared, as an exact rational, with brute
# force over every possible next edge.

# %%
from qlinear import LinearHypergraph, build_packing_instance, expected_delta_bruteforce, expected_delta_formula, identities
from qlinear.verify import all_subsets_below, random_reachable_state

h = LinearHypergraph(6, 3, [(1, 2, 3)])
print(expected_delta_formula(h, (4,)), expected_delta_bruteforce(h, (4,)))

h = random_reachable_state(8, 3, seed=1)
print(h)
print(all(expected_delta_formula(h, J) == expected_delta_bruteforce(h, J) for J in all_subsets_below(8, 3)))

# %%
print([identities("A", 0, l) for l in range(2, 8)])
print([identities("C", 3, l) for l in range(1, 8)])

# %% [markdown]
# The same process is a greedy packing on the pairs of [n]: each q-set
# becomes the set of its C(q, 2) pairs.

# %%
inst = build_packing_instance(5, 3)
print("nu =", inst.nu, " k =", inst.k, " edges =", len(inst.edges))
