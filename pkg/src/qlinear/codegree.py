"""Codegrees |Y_J(i)| along a run, with freezing and band residuals.

``Y_J`` counts the (q-|J|)-sets K disjoint from J such that J + K is still
available.  In free-pair-graph terms that is the number of (q-j)-cliques in
the common free neighbourhood of J, provided J's own pairs are all free.

Freezing: a set is frozen at the first checkpoint where no available edge
contains it.  Its recorded value (0) never changes afterwards, and it no
longer takes part in the good event G_i.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .cliques import BudgetExceeded, count_cliques, find_clique, triangle_count
from .hypergraph import DEFAULT_ENUM_BUDGET, FreePairGraph, LinearHypergraph, pair_index_array
from .process import ProcessState, draw_subsets
from .trajectory import TrajectoryParams, eps_value, y_value

FREEZE_CONFIRM_SAMPLES = 10_000


def _zero_based(h: LinearHypergraph, J: Sequence[int]) -> list[int]:
    J0 = sorted(int(v) - 1 for v in J)
    if len(set(J0)) != len(J0) or (J0 and (J0[0] < 0 or J0[-1] >= h.n)):
        raise ValueError(f"invalid vertex set {tuple(J)} for n={h.n}")
    if len(J0) >= h.q:
        raise ValueError(f"|J| must be < q={h.q}")
    return J0


def _common_free(g: FreePairGraph, J0: list[int]) -> np.ndarray | None:
    """Boolean mask of common free neighbours of J, or None if J has a covered pair."""
    adj = g.adjacency
    for u, v in combinations(J0, 2):
        if not adj[u, v]:
            return None
    mask = np.ones(g.n, dtype=bool)
    for v in J0:
        mask &= adj[v]
    mask[J0] = False
    return mask


def exact_codegree(h: LinearHypergraph, J: Sequence[int], budget: int | None = DEFAULT_ENUM_BUDGET,
                   graph: FreePairGraph | None = None) -> int:
    """Exact |Y_J| for a 1-based set J."""
    J0 = _zero_based(h, J)
    g = graph or h.free_pair_graph()
    mask = _common_free(g, J0)
    if mask is None:
        return 0
    r = h.q - len(J0)
    if r == 1:
        return int(mask.sum())
    idx = np.flatnonzero(mask)
    if r == 2:
        return int(g.adjacency[np.ix_(idx, idx)].sum()) // 2
    if r == 3:
        return triangle_count(g.adjacency[np.ix_(idx, idx)])
    cand = sum(1 << int(v) for v in idx)
    return count_cliques(g.bitsets, r, candidates=cand, budget=budget)


def has_extension(h: LinearHypergraph, J: Sequence[int], budget: int | None = DEFAULT_ENUM_BUDGET,
                  graph: FreePairGraph | None = None) -> bool:
    """Whether some available edge contains J (J in P_j)."""
    J0 = _zero_based(h, J)
    g = graph or h.free_pair_graph()
    mask = _common_free(g, J0)
    if mask is None:
        return False
    r = h.q - len(J0)
    cand = sum(1 << int(v) for v in np.flatnonzero(mask))
    return find_clique(g.bitsets, r, candidates=cand, budget=budget) is not None


def sampled_codegree(h: LinearHypergraph, J: Sequence[int], samples: int,
                     rng: np.random.Generator) -> tuple[float, float]:
    """Monte Carlo |Y_J| with binomial standard error."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    J0 = _zero_based(h, J)
    n, q = h.n, h.q
    r = q - len(J0)
    others = np.setdiff1d(np.arange(n), J0)
    total = math.comb(n - len(J0), r)
    K = others[draw_subsets(rng, len(others), r, samples)]
    rows = np.sort(np.concatenate([np.broadcast_to(np.array(J0, dtype=np.int64), (samples, len(J0))), K], axis=1), axis=1)
    ok = ~h.coverage.covered[pair_index_array(rows, n)].any(axis=1)
    frac = float(ok.mean())
    return total * frac, total * math.sqrt(frac * (1 - frac) / samples)


@dataclass
class TrackedSet:
    J: tuple[int, ...]
    frozen: bool = False
    frozen_value: float | None = None
    history: list = field(default_factory=list)  # (step, value, estimated)

    @property
    def j(self) -> int:
        return len(self.J)

    @property
    def label(self) -> str:
        return "_".join(map(str, self.J)) if self.J else "empty"


@dataclass(frozen=True)
class BandResidual:
    step: int
    J: tuple[int, ...]
    value: float
    estimated: bool
    frozen: bool
    y: float
    eps: float

    @property
    def plus_residual(self) -> float:
        return self.value - (self.y + self.eps)

    @property
    def minus_residual(self) -> float:
        return self.value - (self.y - self.eps)

    @property
    def good(self) -> bool:
        return self.plus_residual <= 0 <= self.minus_residual


def default_family(n: int, q: int, rng: np.random.Generator, per_size: int = 25) -> list[TrackedSet]:
    """J = {} plus up to ``per_size`` random sets for each size in {1, 2}
    (every size up to q-1 when q <= 4)."""
    sizes = range(1, q) if q <= 4 else (1, 2)
    family = [TrackedSet(())]
    for j in sizes:
        if j >= q:
            continue
        total = math.comb(n, j)
        if total <= per_size:
            chosen = [tuple(c) for c in combinations(range(n), j)]
        else:
            seen: set[tuple[int, ...]] = set()
            chosen = []
            while len(chosen) < per_size:
                c = tuple(int(v) for v in draw_subsets(rng, n, j, 1)[0])
                if c not in seen:
                    seen.add(c)
                    chosen.append(c)
        family.extend(TrackedSet(tuple(v + 1 for v in c)) for c in chosen)
    return family


def _band(params: TrajectoryParams | None, j: int, step: int) -> tuple[float, float]:
    if params is None:
        return math.nan, math.nan
    t = Fraction(step, params.n * (params.n - 1))
    if params.p(t) <= 0:
        return math.nan, math.nan
    return y_value(params, j, t), eps_value(params, j, t)


def update_tracked(state: ProcessState, tracked: list[TrackedSet], params: TrajectoryParams | None,
                   samples: int = FREEZE_CONFIRM_SAMPLES, budget: int | None = DEFAULT_ENUM_BUDGET,
                   h_value: tuple[float, bool] | None = None) -> list[BandResidual]:
    """Refresh every unfrozen tracked set and return one residual per set."""
    h = state.hypergraph
    g = h.free_pair_graph()
    out = []
    for ts in tracked:
        if not ts.frozen:
            if not ts.J and h_value is not None:
                value, estimated = h_value[0], not h_value[1]
            else:
                try:
                    value, estimated = exact_codegree(h, ts.J, budget, graph=g), False
                except BudgetExceeded:
                    value, _ = sampled_codegree(h, ts.J, samples, state.track_rng)
                    estimated = True
            if value == 0:
                if estimated and samples >= FREEZE_CONFIRM_SAMPLES:
                    try:
                        frozen = not has_extension(h, ts.J, budget, graph=g)
                    except BudgetExceeded:
                        frozen = False
                else:
                    frozen = not estimated
                if frozen:
                    ts.frozen, ts.frozen_value = True, 0
            ts.history.append((state.step, value, estimated))
        else:
            value, estimated = ts.frozen_value, False
        y, eps = _band(params, ts.j, state.step)
        out.append(BandResidual(state.step, ts.J, value, estimated, ts.frozen, y, eps))
    return out


class CodegreeTracker:
    """Owns a tracked family for one run and latches the good event G_i.

    ``good`` stays True until some unfrozen residual at a step <= m0 falls
    outside its band; after that it never recovers.
    """

    def __init__(self, params: TrajectoryParams | None, tracked: list[TrackedSet],
                 samples: int = FREEZE_CONFIRM_SAMPLES, budget: int | None = DEFAULT_ENUM_BUDGET):
        self.params = params
        self.tracked = tracked
        self.samples = samples
        self.budget = budget
        self.good = True
        self.first_bad_step: int | None = None
        self.max_rel_dev_H = 0.0

    @classmethod
    def for_run(cls, n: int, q: int, seed: int, params: TrajectoryParams | None,
                per_size: int = 25, **kw) -> "CodegreeTracker":
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), 7])))
        return cls(params, default_family(n, q, rng, per_size), **kw)

    def update(self, state: ProcessState, h_value: float | None = None,
               h_exact: bool = True) -> list[BandResidual]:
        hv = None if h_value is None else (h_value, h_exact)
        res = update_tracked(state, self.tracked, self.params, self.samples, self.budget, hv)
        if self.params is not None and state.step <= self.params.m0:
            for r in res:
                if not r.J and not r.frozen and r.y > 0:
                    self.max_rel_dev_H = max(self.max_rel_dev_H, abs(r.value - r.y) / r.y)
                if self.good and not r.frozen and not r.good:
                    self.good = False
                    self.first_bad_step = state.step
        return res
