# %% [markdown]
# # Linear hypergraphs and their free-pair graph
#
# A q-uniform hypergraph is linear when two edges share at most one vertex.
# The state lives in a pair-coverage table: adding an edge covers its
# C(q, 2) pairs, and a q-set can still be added iff none of its pairs is
# covered.

# %%
from itertools import combinations

from qlinear import LinearHypergraph, UnavailableEdgeError

h = LinearHypergraph(6, 3)
h.add_edge((1, 2, 3))
print("available {1,2,4}?", h.is_available((1, 2, 4)))
print("available {1,4,5}?", h.is_available((1, 4, 5)))
print("covered pairs:", h.coverage.covered_count)
print("|H| =", h.count_available())

# %%
# Adding an edge that reuses a covered pair is refused outright.
try:
    h.add_edge((1, 2, 6))
except UnavailableEdgeError as exc:
    print("refused:", exc)

# %% [markdown]
# Maximality is a clique question: no q-set can be added exactly when the
# graph of uncovered pairs has no q-clique.

# %%
blocks = LinearHypergraph(8, 4, [(1, 2, 3, 4), (5, 6, 7, 8)])
g = blocks.free_pair_graph()
print("free pairs:", g.edge_count, "of", 28)
print("maximal:", blocks.is_maximal())
print("4-sets still addable:", sum(blocks.is_available(c) for c in combinations(range(1, 9), 4)))
