"""Linear q-uniform hypergraphs and the pair-coverage state behind them.

Public methods of :class:`LinearHypergraph` take and return 1-based vertex
labels.  :class:`PairCoverage` and :class:`FreePairGraph` are the low-level
0-based structures the sampler works on directly.
"""
from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .cliques import (
    count_cliques,
    enumerate_cliques,
    find_clique,
    to_bitsets,
    triangle_count,
    triangles,
)

DEFAULT_ENUM_BUDGET = 200_000


class UnavailableEdgeError(ValueError):
    """Tried to add an edge that shares a covered pair with the hypergraph."""


def pair_index(u: int, v: int, n: int) -> int:
    """Position of the 0-based pair ``{u, v}`` in canonical triangular order."""
    if u > v:
        u, v = v, u
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def pair_index_array(rows: np.ndarray, n: int) -> np.ndarray:
    """Pair indices for every internal pair of each row (rows sorted ascending).

    Returns an array of shape ``(len(rows), C(q, 2))``.
    """
    q = rows.shape[1]
    cols = []
    for a, b in combinations(range(q), 2):
        u = rows[:, a]
        v = rows[:, b]
        cols.append(u * (2 * n - u - 1) // 2 + (v - u - 1))
    if not cols:
        return np.empty((rows.shape[0], 0), dtype=np.int64)
    return np.stack(cols, axis=1)


class PairCoverage:
    """Covered/uncovered flag for each unordered pair of ``range(n)``.

    Stored as a flat boolean array in canonical triangular order, so a pair
    lookup is O(1).  A dense symmetric matrix of the free pairs is kept in
    step for the graph queries.
    """

    def __init__(self, n: int):
        self.n = n
        self.covered = np.zeros(n * (n - 1) // 2, dtype=bool)
        self.covered_count = 0
        self._free = ~np.eye(n, dtype=bool)

    def is_covered(self, u: int, v: int) -> bool:
        return bool(self.covered[pair_index(u, v, self.n)])

    def cover(self, vertices: Sequence[int]) -> None:
        pairs = list(combinations(sorted(vertices), 2))
        idx = [pair_index(u, v, self.n) for u, v in pairs]
        for (u, v), k in zip(pairs, idx):
            if self.covered[k]:
                raise UnavailableEdgeError(f"pair {{{u}, {v}}} already covered")
        for (u, v), k in zip(pairs, idx):
            self.covered[k] = True
            self._free[u, v] = self._free[v, u] = False
        self.covered_count += comb(len(vertices), 2)

    def any_covered(self, vertices: Sequence[int]) -> bool:
        n = self.n
        vs = sorted(vertices)
        cov = self.covered
        for i, u in enumerate(vs):
            base = u * (2 * n - u - 1) // 2 - u - 1
            for v in vs[i + 1:]:
                if cov[base + v]:
                    return True
        return False

    def free_matrix(self) -> np.ndarray:
        """Dense symmetric adjacency of the uncovered pairs (diagonal False)."""
        return self._free.copy()

    def copy(self) -> "PairCoverage":
        other = PairCoverage.__new__(PairCoverage)
        other.n = self.n
        other.covered = self.covered.copy()
        other.covered_count = self.covered_count
        other._free = self._free.copy()
        return other


class FreePairGraph:
    """Graph on ``range(n)`` whose edges are the uncovered pairs.

    A hypergraph is maximal exactly when this graph has no q-clique.
    """

    def __init__(self, coverage: PairCoverage):
        self.n = coverage.n
        self.adjacency = coverage.free_matrix()
        self._bits: list[int] | None = None

    @property
    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    @property
    def bitsets(self) -> list[int]:
        if self._bits is None:
            self._bits = to_bitsets(self.adjacency)
        return self._bits

    def count_cliques(self, size: int, budget: int | None = DEFAULT_ENUM_BUDGET) -> int:
        if size == 1:
            return self.n
        if size == 2:
            return self.edge_count
        if size == 3:
            return triangle_count(self.adjacency)
        return count_cliques(self.bitsets, size, budget=budget)

    def cliques(self, size: int, budget: int | None = None) -> np.ndarray:
        """Every ``size``-clique as a row of sorted 0-based vertices."""
        if size == 2:
            iu, ju = np.nonzero(np.triu(self.adjacency, 1))
            return np.stack([iu, ju], axis=1).astype(np.int64)
        if size == 3:
            return triangles(self.adjacency)
        found = enumerate_cliques(self.bitsets, size, budget=budget)
        return np.array(found, dtype=np.int64).reshape(len(found), size)

    def find_clique(self, size: int, budget: int | None = DEFAULT_ENUM_BUDGET):
        return find_clique(self.bitsets, size, budget=budget)


class LinearHypergraph:
    """Ordered edge list of a q-uniform linear hypergraph on ``[n]``.

    Edges are kept with their pair coverage so that availability is an
    O(q^2) lookup.  Vertex labels at this interface are 1-based.
    """

    def __init__(self, n: int, q: int, edges: Iterable[Iterable[int]] = ()):
        if not (isinstance(n, (int, np.integer)) and isinstance(q, (int, np.integer))):
            raise TypeError("n and q must be integers")
        if not 2 <= q <= n:
            raise ValueError(f"need 2 <= q <= n, got n={n}, q={q}")
        self.n = int(n)
        self.q = int(q)
        self.coverage = PairCoverage(self.n)
        self._edges: list[tuple[int, ...]] = []
        for e in edges:
            self.add_edge(e)

    def __len__(self) -> int:
        return len(self._edges)

    def __repr__(self) -> str:
        return f"LinearHypergraph(n={self.n}, q={self.q}, edges={self.edges})"

    @property
    def edges(self) -> list[tuple[int, ...]]:
        return [tuple(v + 1 for v in e) for e in self._edges]

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def _check_edge(self, e: Iterable[int]) -> tuple[int, ...]:
        vs = tuple(sorted(int(v) for v in e))
        if len(vs) != self.q or len(set(vs)) != self.q:
            raise ValueError(f"edge must have {self.q} distinct vertices, got {tuple(e)}")
        if vs[0] < 1 or vs[-1] > self.n:
            raise ValueError(f"vertex labels must lie in 1..{self.n}, got {vs}")
        return tuple(v - 1 for v in vs)

    def is_available(self, e: Iterable[int]) -> bool:
        """True iff adding ``e`` keeps the hypergraph linear."""
        return not self.coverage.any_covered(self._check_edge(e))

    def add_edge(self, e: Iterable[int]) -> None:
        e0 = self._check_edge(e)
        if self.coverage.any_covered(e0):
            raise UnavailableEdgeError(f"{tuple(v + 1 for v in e0)} meets an existing edge in two vertices")
        self._add0(e0)

    def _add0(self, e0: tuple[int, ...]) -> None:
        # caller guarantees availability
        self.coverage.cover(e0)
        self._edges.append(e0)

    def free_pair_graph(self) -> FreePairGraph:
        return FreePairGraph(self.coverage)

    def count_available(self, budget: int | None = DEFAULT_ENUM_BUDGET) -> int:
        """Exact |H(i)|: the number of q-sets that can still be added.

        Raises :class:`BudgetExceeded` when the clique count would exceed
        ``budget`` search nodes (q = 2, 3 are always exact).
        """
        return self.free_pair_graph().count_cliques(self.q, budget=budget)

    def available_edges(self, budget: int | None = None) -> list[tuple[int, ...]]:
        rows = self.free_pair_graph().cliques(self.q, budget=budget)
        return [tuple(int(v) + 1 for v in r) for r in rows]

    def is_maximal(self, budget: int | None = DEFAULT_ENUM_BUDGET) -> bool:
        """True iff no q-set can be added, i.e. the free-pair graph is K_q-free."""
        g = self.free_pair_graph()
        if self.q == 2:
            return g.edge_count == 0
        return g.find_clique(self.q, budget=budget) is None

    def copy(self) -> "LinearHypergraph":
        other = LinearHypergraph.__new__(LinearHypergraph)
        other.n, other.q = self.n, self.q
        other.coverage = self.coverage.copy()
        other._edges = list(self._edges)
        return other
