"""The q-linear process: add uniformly random available q-sets one at a time.

Randomness comes from numpy's Philox, a counter-based 64-bit generator, so a
seed reproduces the same edge sequence on every platform.  One seed is split
into independent streams for the process itself, for Monte Carlo
measurement, and for picking tracked sets; measuring a run never perturbs the
edges it draws.

Sampling is rejection from uniform q-subsets.  Conditioned on acceptance a
rejection draw is exactly uniform on the available set H(i).  The sampler
keeps its own running estimate of |H(i)| from how many draws each
acceptance took.  Once that estimate drops to ``list_threshold``, or after
``rejection_cap`` consecutive rejections, it enumerates H(i) exactly and from
then on draws from that explicit list.  Both decisions depend only on the
process stream, so checkpoints and measurements never change the edges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cliques import BudgetExceeded
from .hypergraph import DEFAULT_ENUM_BUDGET, LinearHypergraph, pair_index_array

MAX_BATCH = 8192
LAZY_TRIES = 8
LIST_THRESHOLD = 10_000
EMA_WEIGHT = 1 / 16


def make_streams(seed: int) -> tuple[np.random.Generator, ...]:
    """Process, measurement and tracker generators for one seed."""
    children = np.random.SeedSequence(int(seed)).spawn(3)
    return tuple(np.random.Generator(np.random.Philox(c)) for c in children)


def draw_subsets(rng: np.random.Generator, n: int, k: int, size: int) -> np.ndarray:
    """``size`` independent uniform k-subsets of range(n), rows sorted.

    Floyd's algorithm, run column by column across the batch.
    """
    out = np.empty((size, k), dtype=np.int64)
    for c, j in enumerate(range(n - k, n)):
        t = rng.integers(0, j + 1, size=size)
        if c:
            dup = (out[:, :c] == t[:, None]).any(axis=1)
            t = np.where(dup, j, t)
        out[:, c] = t
    out.sort(axis=1)
    return out


def default_rejection_cap(n: int, q: int, h_estimate: int) -> int:
    return max(1000, 64 * math.ceil(math.comb(n, q) / max(1, h_estimate)))


def default_stride(n: int, q: int) -> int:
    """About 200 checkpoints up to m0 (or up to the trivial edge bound)."""
    from .trajectory import make_params

    try:
        horizon = make_params(n, q).m0
    except ValueError:
        horizon = n * (n - 1) // (q * (q - 1))
    return max(1, horizon // 200)


@dataclass(frozen=True)
class ProcessConfig:
    """One run of the process.

    ``steps=None`` runs to maximality.  ``rejection_cap`` and
    ``checkpoint_stride`` default to the rules in :func:`default_rejection_cap`
    and :func:`default_stride`.  ``samples`` is the Monte Carlo sample count
    used when an exact count would exceed ``enum_budget`` search nodes.  When
    the sampler's own |H(i)| estimate reaches ``list_threshold`` it switches
    to the explicit available list.
    """

    n: int
    q: int
    seed: int = 0
    steps: int | None = None
    rejection_cap: int | None = None
    checkpoint_stride: int | None = None
    samples: int = 4000
    enum_budget: int = DEFAULT_ENUM_BUDGET
    list_threshold: int = LIST_THRESHOLD

    def __post_init__(self):
        if not 2 <= self.q <= self.n:
            raise ValueError(f"need 2 <= q <= n, got n={self.n}, q={self.q}")
        if self.rejection_cap is not None and self.rejection_cap < 1:
            raise ValueError("rejection_cap must be >= 1")
        if self.checkpoint_stride is not None and self.checkpoint_stride < 1:
            raise ValueError("checkpoint_stride must be >= 1")
        if self.steps is not None and self.steps < 0:
            raise ValueError("steps must be >= 0")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")

    @property
    def stride(self) -> int:
        return self.checkpoint_stride or default_stride(self.n, self.q)


class ProcessState:
    """Hypergraph plus RNG streams; ``t_i = i / (n(n-1))`` is kept exact."""

    def __init__(self, n: int, q: int, seed: int = 0, list_threshold: int = LIST_THRESHOLD):
        self.hypergraph = LinearHypergraph(n, q)
        self.seed = seed
        self.list_threshold = list_threshold
        self.rng, self.measure_rng, self.track_rng = make_streams(seed)
        # superset of H(i) as 0-based rows once enumerated; None while rejection sampling
        self.available: np.ndarray | None = None
        # sampler-owned |H(i)| estimate: C(n,q) over a moving average of draws per acceptance
        self.h_hint = math.comb(n, q)
        self._mean_draws = 1.0
        self._last_draws = 1
        self._buf = np.empty((0, q), dtype=np.int64)
        self._pos = 0

    @classmethod
    def from_config(cls, config: ProcessConfig) -> "ProcessState":
        return cls(config.n, config.q, config.seed, config.list_threshold)

    @property
    def n(self) -> int:
        return self.hypergraph.n

    @property
    def q(self) -> int:
        return self.hypergraph.q

    @property
    def step(self) -> int:
        return self.hypergraph.num_edges

    @property
    def t(self) -> Fraction:
        return Fraction(self.step, self.n * (self.n - 1))

    @property
    def last_edge(self) -> tuple[int, ...] | None:
        edges = self.hypergraph._edges
        return tuple(v + 1 for v in edges[-1]) if edges else None

    def candidates(self, k: int) -> np.ndarray:
        """Peek at the next ``k`` draws of the i.i.d. uniform q-subset stream.

        The stream is generated in fixed-size chunks, so the edge sequence
        depends only on the seed and never on how it is consumed.
        """
        while len(self._buf) - self._pos < k:
            chunk = draw_subsets(self.rng, self.n, self.q, MAX_BATCH)
            self._buf = np.concatenate([self._buf[self._pos:], chunk])
            self._pos = 0
        return self._buf[self._pos:self._pos + k]

    def _consume(self, k: int) -> None:
        self._pos += k

    def accept_mask(self, rows: np.ndarray) -> np.ndarray:
        idx = pair_index_array(rows, self.n)
        return ~self.hypergraph.coverage.covered[idx].any(axis=1)

    def enumerate_available(self) -> np.ndarray:
        self.available = self.hypergraph.free_pair_graph().cliques(self.q)
        self.h_hint = len(self.available)
        return self.available

    def compact(self) -> np.ndarray:
        """Drop rows of the explicit list that are no longer available."""
        if len(self.available):
            self.available = self.available[self.accept_mask(self.available)]
        self.h_hint = len(self.available)
        return self.available

    def add(self, e0: np.ndarray | tuple[int, ...]) -> None:
        """Add an available 0-based edge."""
        self.hypergraph._add0(tuple(int(v) for v in e0))


def _sample0(state: ProcessState, rejection_cap: int | None = None) -> np.ndarray | None:
    n, q, rng = state.n, state.q, state.rng
    if state.available is None and state.h_hint <= state.list_threshold:
        state.enumerate_available()
    if state.available is None:
        cap = rejection_cap or default_rejection_cap(n, q, state.h_hint)
        rejected = 0
        window = min(MAX_BATCH, max(8, 2 * state._last_draws))
        while rejected < cap:
            rows = state.candidates(min(window, cap - rejected))
            ok = state.accept_mask(rows)
            if ok.any():
                hit = int(np.argmax(ok))
                state._consume(hit + 1)
                d = rejected + hit + 1
                state._last_draws = d
                state._mean_draws += (d - state._mean_draws) * EMA_WEIGHT
                state.h_hint = math.comb(n, q) / state._mean_draws
                return rows[hit]
            state._consume(len(rows))
            rejected += len(rows)
            window = min(MAX_BATCH, 2 * window)
        state.enumerate_available()
    # the list is a superset of H(i); a uniform list draw that is still
    # available is uniform on H(i)
    avail = state.available
    cov = state.hypergraph.coverage
    while len(avail):
        for _ in range(LAZY_TRIES):
            row = avail[rng.integers(len(avail))]
            if not cov.any_covered(row):
                return row
        avail = state.compact()
    return None


def sample_available(state: ProcessState, rejection_cap: int | None = None) -> tuple[int, ...] | None:
    """A uniform element of H(i) as a 1-based tuple, or None when H(i) is empty."""
    e = _sample0(state, rejection_cap)
    return None if e is None else tuple(int(v) + 1 for v in e)


def sample_many(state: ProcessState, k: int) -> np.ndarray:
    """``k`` i.i.d. uniform draws from H(i) as 1-based rows, adding no edges.

    Uses the same rejection kernel as :func:`sample_available` (and the
    process stream, so later edges differ from an undisturbed run).
    """
    n, q, rng = state.n, state.q, state.rng
    if state.available is not None:
        avail = state.compact()
        if len(avail) == 0:
            raise ValueError("no available edges")
        return avail[rng.integers(len(avail), size=k)] + 1
    got = []
    have = 0
    batch = max(1024, 2 * k)
    while have < k:
        rows = draw_subsets(rng, n, q, batch)
        rows = rows[state.accept_mask(rows)]
        got.append(rows)
        have += len(rows)
        if have == 0 and batch >= 1 << 22:
            raise ValueError("no draws accepted; the state looks maximal")
        batch = min(batch * 2, 1 << 22)
    return np.concatenate(got)[:k] + 1


def step(state: ProcessState, rejection_cap: int | None = None) -> tuple[int, ...] | None:
    """Draw and add one edge; None when the state is already maximal."""
    e = _sample0(state, rejection_cap)
    if e is None:
        return None
    state.add(e)
    return tuple(int(v) + 1 for v in e)


def estimate_available(state: ProcessState, samples: int,
                       rng: np.random.Generator | None = None) -> tuple[float, float]:
    """Monte Carlo |H(i)| with its binomial standard error."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = rng or state.measure_rng
    total = math.comb(state.n, state.q)
    rows = draw_subsets(rng, state.n, state.q, samples)
    frac = float(state.accept_mask(rows).mean())
    return total * frac, total * math.sqrt(frac * (1 - frac) / samples)


@dataclass
class Checkpoint:
    step: int
    covered_count: int
    available: float
    available_exact: bool
    available_se: float = 0.0
    residuals: list = field(default_factory=list)


@dataclass
class ProcessTrace:
    config: ProcessConfig
    stride: int
    checkpoints: list[Checkpoint] = field(default_factory=list)


def measure_available(state: ProcessState, config: ProcessConfig) -> tuple[float, bool, float]:
    """(|H(i)|, exact?, standard error) at the current state; never touches
    the sampler's list, hint or stream."""
    if state.available is not None:
        avail = state.available
        return (int(state.accept_mask(avail).sum()) if len(avail) else 0), True, 0.0
    try:
        count = state.hypergraph.count_available(budget=config.enum_budget)
    except BudgetExceeded:
        value, se = estimate_available(state, config.samples)
        return value, False, se
    return count, True, 0.0


def run(config: ProcessConfig, tracker=None) -> tuple[ProcessState, ProcessTrace]:
    """Run the process to ``config.steps`` edges or to maximality.

    ``tracker`` (a :class:`~qlinear.codegree.CodegreeTracker`) is updated at
    every checkpoint; checkpoints fall at step 0, every ``stride`` steps and
    at the final step.
    """
    state = ProcessState.from_config(config)
    trace = ProcessTrace(config=config, stride=config.stride)

    def record():
        value, exact, se = measure_available(state, config)
        residuals = tracker.update(state, value, exact) if tracker is not None else []
        trace.checkpoints.append(Checkpoint(state.step, state.hypergraph.coverage.covered_count,
                                            value, exact, se, residuals))

    record()
    stride = trace.stride
    while config.steps is None or state.step < config.steps:
        if step(state, config.rejection_cap) is None:
            break
        if state.step % stride == 0:
            record()
    if trace.checkpoints[-1].step != state.step:
        record()
    return state, trace
