"""Exact clique search on small graphs.

Graphs are given as a list of Python-int bitsets, ``adj[v]`` holding the
neighbours of ``v``.  Every search visits candidate vertices in increasing
order, so enumeration comes out in lexicographic order.  A node budget bounds
the work; exceeding it raises :class:`BudgetExceeded` rather than silently
returning a partial answer.

For triangles there are dense numpy routines, which is what the q = 3 hot
path uses.
"""
from __future__ import annotations

import numpy as np


class BudgetExceeded(RuntimeError):
    """An exact search would need more nodes than its budget allows."""


class _Budget:
    __slots__ = ("left", "limit")

    def __init__(self, limit: int | None):
        self.limit = limit
        self.left = limit

    def tick(self) -> None:
        if self.left is None:
            return
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded(f"clique search exceeded {self.limit} nodes")


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_bitsets(adjacency: np.ndarray) -> list[int]:
    """Convert a dense boolean adjacency matrix to per-vertex bitsets."""
    n = adjacency.shape[0]
    weights = [1 << v for v in range(n)]
    out = []
    for row in adjacency:
        out.append(sum(weights[v] for v in np.flatnonzero(row)))
    return out


def count_cliques(adj: list[int], size: int, candidates: int | None = None,
                  budget: int | None = None) -> int:
    """Number of ``size``-cliques inside ``candidates`` (default: all vertices)."""
    if candidates is None:
        candidates = (1 << len(adj)) - 1
    if size == 0:
        return 1
    return _count(adj, candidates, size, _Budget(budget))


def _count(adj, cand, r, budget):
    budget.tick()
    if r == 1:
        return cand.bit_count()
    total = 0
    while cand:
        if cand.bit_count() < r:
            break
        low = cand & -cand
        cand ^= low
        v = low.bit_length() - 1
        nxt = cand & adj[v]
        if r == 2:
            total += nxt.bit_count()
        elif nxt.bit_count() >= r - 1:
            total += _count(adj, nxt, r - 1, budget)
    return total


def find_clique(adj: list[int], size: int, candidates: int | None = None,
                budget: int | None = None) -> tuple[int, ...] | None:
    """Lexicographically first ``size``-clique, or None if there is none."""
    if candidates is None:
        candidates = (1 << len(adj)) - 1
    if size == 0:
        return ()
    return _find(adj, candidates, size, _Budget(budget))


def _find(adj, cand, r, budget):
    budget.tick()
    while cand:
        if cand.bit_count() < r:
            return None
        low = cand & -cand
        cand ^= low
        v = low.bit_length() - 1
        if r == 1:
            return (v,)
        rest = _find(adj, cand & adj[v], r - 1, budget)
        if rest is not None:
            return (v,) + rest
    return None


def enumerate_cliques(adj: list[int], size: int, candidates: int | None = None,
                      budget: int | None = None) -> list[tuple[int, ...]]:
    """All ``size``-cliques as sorted tuples, in lexicographic order."""
    if candidates is None:
        candidates = (1 << len(adj)) - 1
    out: list[tuple[int, ...]] = []
    if size == 0:
        return [()]
    _enum(adj, candidates, size, (), out, _Budget(budget))
    return out


def _enum(adj, cand, r, prefix, out, budget):
    budget.tick()
    while cand:
        if cand.bit_count() < r:
            return
        low = cand & -cand
        cand ^= low
        v = low.bit_length() - 1
        if r == 1:
            out.append(prefix + (v,))
        else:
            _enum(adj, cand & adj[v], r - 1, prefix + (v,), out, budget)


def triangle_count(adjacency: np.ndarray) -> int:
    """Exact number of triangles of a symmetric 0/1 matrix with empty diagonal."""
    a = adjacency.astype(np.float32)
    # entries of a @ a are integers <= n, exact in float32; sum in float64
    return int(round(float(((a @ a) * a).sum(dtype=np.float64)) / 6.0))


def triangles(adjacency: np.ndarray) -> np.ndarray:
    """All triangles as rows ``u < v < w``, lexicographically sorted."""
    n = adjacency.shape[0]
    upper = np.triu(adjacency, 1)
    blocks = []
    for u in range(n - 2):
        nb = np.flatnonzero(upper[u])
        if nb.size < 2:
            continue
        sub = upper[np.ix_(nb, nb)]
        iv, iw = np.nonzero(sub)
        if iv.size:
            blk = np.empty((iv.size, 3), dtype=np.int64)
            blk[:, 0] = u
            blk[:, 1] = nb[iv]
            blk[:, 2] = nb[iw]
            blocks.append(blk)
    if not blocks:
        return np.empty((0, 3), dtype=np.int64)
    return np.concatenate(blocks)
