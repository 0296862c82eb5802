"""Brute-force ground truth for small instances.

Everything here works from the edge list alone (vertex sets as int bitmasks,
availability by ``|e & e_k| <= 1``), never from the pair-coverage structure
or the clique search, so it stays independent of the paths it checks.  All
arithmetic is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .cliques import BudgetExceeded
from .hypergraph import DEFAULT_ENUM_BUDGET, LinearHypergraph


def _mask(vs: Iterable[int]) -> int:
    """Bitmask of 1-based labels."""
    m = 0
    for v in vs:
        m |= 1 << (int(v) - 1)
    return m


def _submasks(m: int):
    s = m
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & m


def available_masks(h: LinearHypergraph, budget: int = DEFAULT_ENUM_BUDGET) -> list[int]:
    """H(i) by enumerating every q-subset of [n]."""
    if math.comb(h.n, h.q) > budget:
        raise BudgetExceeded(f"C({h.n},{h.q}) exceeds enumeration budget {budget}")
    edges = [_mask(e) for e in h.edges]
    out = []
    for c in combinations(range(1, h.n + 1), h.q):
        m = _mask(c)
        if all((m & e).bit_count() <= 1 for e in edges):
            out.append(m)
    return out


class _Codegrees:
    """Live |Y_A| = number of available edges containing A.

    For |A| = q this is the availability indicator of A, which is the
    extension the one-step formula needs when S + T exhausts J + K.
    """

    def __init__(self, avail: list[int]):
        self.avail = avail
        self._cache: dict[int, int] = {}

    def __call__(self, A: int) -> int:
        got = self._cache.get(A)
        if got is None:
            got = sum(1 for e in self.avail if e & A == A)
            self._cache[A] = got
        return got


@dataclass(frozen=True)
class DeltaReport:
    J: tuple[int, ...]
    formula_value: Fraction
    bruteforce_value: Fraction

    @property
    def match(self) -> bool:
        return self.formula_value == self.bruteforce_value


def _check_J(h: LinearHypergraph, J: Sequence[int]) -> int:
    J = tuple(J)
    if len(set(J)) != len(J) or any(not 1 <= v <= h.n for v in J):
        raise ValueError(f"invalid vertex set {J}")
    if len(J) >= h.q:
        raise ValueError(f"|J| must be < q={h.q}")
    return _mask(J)


def expected_delta_formula(h: LinearHypergraph, J: Sequence[int], avail: list[int] | None = None,
                           budget: int = DEFAULT_ENUM_BUDGET) -> Fraction:
    """E[Delta |Y_J|] by the signed inclusion-exclusion over S in J, T in K."""
    Jm = _check_J(h, J)
    avail = available_masks(h, budget) if avail is None else avail
    if not avail:
        raise ValueError("|H(i)| = 0: the expectation is undefined")
    Y = _Codegrees(avail)
    total = 0
    for A in avail:
        if A & Jm != Jm:
            continue
        K = A & ~Jm
        for S in _submasks(Jm):
            s = S.bit_count()
            for T in _submasks(K):
                if T == 0:
                    continue
                m = s + T.bit_count()
                if m < 2:
                    continue
                total += (-1) ** m * (m - 1) * Y(S | T)
    return Fraction(-total, len(avail))


def expected_delta_bruteforce(h: LinearHypergraph, J: Sequence[int], avail: list[int] | None = None,
                              budget: int = DEFAULT_ENUM_BUDGET) -> Fraction:
    """E[Delta |Y_J|] by trying every available next edge and recounting.

    An edge meeting J in two or more vertices freezes J, so it contributes 0.
    """
    Jm = _check_J(h, J)
    avail = available_masks(h, budget) if avail is None else avail
    if not avail:
        raise ValueError("|H(i)| = 0: the expectation is undefined")
    before = [a for a in avail if a & Jm == Jm]
    total = 0
    for e in avail:
        if (e & Jm).bit_count() >= 2:
            continue
        after = sum(1 for a in before if (a & e).bit_count() <= 1)
        total += after - len(before)
    return Fraction(total, len(avail))


def edge_multiplicity(k: int, l: int) -> int:
    """How many times an edge meeting J in k and K in l vertices is counted
    by the inner sum of the one-step formula.

    The double sum over (m1, m2) is split by linearity in m1 + m2 - 1, so
    each call costs O(k + l) exact integer operations.
    """
    sign_l = [math.comb(l, m2) * (-1) ** m2 for m2 in range(1, l + 1)]
    a = sum(sign_l)
    b = sum(m2 * c for m2, c in enumerate(sign_l, start=1))
    total = 0
    for m1 in range(k + 1):
        # the excluded term (m1, m2) = (0, 1) has weight m1 + m2 - 1 = 0
        total += math.comb(k, m1) * (-1) ** m1 * ((m1 - 1) * a + b)
    return total


def _edge_multiplicity_direct(k: int, l: int) -> int:
    total = 0
    for m1 in range(k + 1):
        for m2 in range(1, l + 1):
            if m1 + m2 >= 2:
                total += math.comb(k, m1) * math.comb(l, m2) * (-1) ** (m1 + m2) * (m1 + m2 - 1)
    return total


def expected_delta_grouped(h: LinearHypergraph, J: Sequence[int], avail: list[int] | None = None,
                           budget: int = DEFAULT_ENUM_BUDGET) -> Fraction:
    """Same expectation, counting each (K, e) pair by its (|e&J|, |e&K|) class."""
    Jm = _check_J(h, J)
    avail = available_masks(h, budget) if avail is None else avail
    if not avail:
        raise ValueError("|H(i)| = 0: the expectation is undefined")
    mult = lru_cache(maxsize=None)(edge_multiplicity)
    total = 0
    for A in avail:
        if A & Jm != Jm:
            continue
        K = A & ~Jm
        for e in avail:
            total += mult((e & Jm).bit_count(), (e & K).bit_count())
    return Fraction(-total, len(avail))


def delta_report(h: LinearHypergraph, J: Sequence[int], avail: list[int] | None = None) -> DeltaReport:
    avail = available_masks(h) if avail is None else avail
    return DeltaReport(tuple(J), expected_delta_formula(h, J, avail),
                       expected_delta_bruteforce(h, J, avail))


def identities(kind: str, k: int, l: int) -> int:
    """Finite sums behind the one-step formula.

    A: sum_{m=2..l} C(l,m) (-1)^m (m-1)                      (equals 1)
    B: A + sum_{m=1..l} C(l,m) (-1)^(m+1) m                  (equals 1)
    C: sum over 0<=m1<=k, 1<=m2<=l, m1+m2>=2 of
       C(k,m1) C(l,m2) (-1)^(m1+m2) (m1+m2-1), for k >= 2    (equals 0)
    ``k`` is ignored for A and B.
    """
    if not (isinstance(k, int) and isinstance(l, int)) or k < 0 or not 1 <= l <= 64:
        raise ValueError(f"need k >= 0 and 1 <= l <= 64, got k={k}, l={l}")
    a = sum(math.comb(l, m) * (-1) ** m * (m - 1) for m in range(2, l + 1))
    if kind == "A":
        return a
    if kind == "B":
        return a + sum(math.comb(l, m) * (-1) ** (m + 1) * m for m in range(1, l + 1))
    if kind == "C":
        if not 2 <= k <= 64:
            raise ValueError(f"kind C needs 2 <= k <= 64, got {k}")
        return edge_multiplicity(k, l)
    raise ValueError(f"unknown identity kind {kind!r}")


def one_step_change(h: LinearHypergraph, J: Sequence[int], e: Sequence[int]) -> int:
    """|Y_J(i+1)| - |Y_J(i)| if ``e`` were added next (0 when e freezes J)."""
    Jm = _check_J(h, J)
    if not h.is_available(e):
        raise ValueError(f"{tuple(e)} is not available")
    em = _mask(e)
    if (em & Jm).bit_count() >= 2:
        return 0
    before = [a for a in available_masks(h) if a & Jm == Jm]
    return sum(1 for a in before if (a & em).bit_count() <= 1) - len(before)


def one_step_bound(n: int, q: int, j: int) -> int:
    return (q - 1) * math.comb(n - j, q - j - 1)


def absolute_bound_check(h: LinearHypergraph, J: Sequence[int], e: Sequence[int]) -> bool:
    return abs(one_step_change(h, J, e)) <= one_step_bound(h.n, h.q, len(tuple(J)))


@dataclass(frozen=True)
class PropositionReport:
    """Checks of the two maximality propositions; None means not applicable."""

    n: int
    q: int
    edges: int
    maximal: bool
    lower_bound: int
    prop1_ok: bool | None
    large_q: bool
    below_q_ok: bool | None
    above_trivial_ok: bool | None
    at_most_2n_over_q_ok: bool | None

    @property
    def passed(self) -> bool:
        checks = (self.prop1_ok, self.below_q_ok, self.above_trivial_ok, self.at_most_2n_over_q_ok)
        return all(c is not False for c in checks)


def proposition_bounds(n: int, q: int, final: LinearHypergraph, maximal: bool) -> PropositionReport:
    m = final.num_edges
    num, den = n * (n - q + 1), q * (q - 1) ** 2
    lower = -(-num // den)
    large_q = q * q >= 2 * n
    return PropositionReport(
        n=n, q=q, edges=m, maximal=maximal, lower_bound=lower,
        prop1_ok=(m >= lower) if maximal else None,
        large_q=large_q,
        below_q_ok=(m < q) if large_q else None,
        above_trivial_ok=(m * q > n - q) if (large_q and maximal) else None,
        at_most_2n_over_q_ok=(m * q <= 2 * n) if (large_q and maximal) else None,
    )


@dataclass(frozen=True)
class PackingInstance:
    """Greedy-packing view: vertices are the pairs of [n], one edge per q-set."""

    n: int
    q: int
    nu: int
    k: int
    qsets: tuple[tuple[int, ...], ...]
    edges: tuple[frozenset, ...]


def _pairs(qset: Sequence[int]) -> frozenset:
    return frozenset(combinations(sorted(qset), 2))


def build_packing_instance(n: int, q: int, max_n: int = 10) -> PackingInstance:
    if n > max_n:
        raise BudgetExceeded(f"n={n} exceeds materialization limit {max_n}")
    if not 2 <= q <= n:
        raise ValueError(f"need 2 <= q <= n, got n={n}, q={q}")
    qsets = tuple(combinations(range(1, n + 1), q))
    return PackingInstance(n=n, q=q, nu=math.comb(n, 2), k=math.comb(q, 2),
                           qsets=qsets, edges=tuple(_pairs(s) for s in qsets))


def packing_equivalence(h: LinearHypergraph, max_n: int = 10) -> bool:
    """Replay the edge sequence of ``h`` in both models and compare, step by
    step, the linear-availability set with the packing-availability set
    under the map q-set -> its pairs."""
    inst = build_packing_instance(h.n, h.q, max_n)
    if len(set(inst.edges)) != len(inst.edges):
        return False
    index = {s: i for i, s in enumerate(inst.qsets)}
    deleted: set = set()
    placed: list[int] = []
    seq = h.edges
    for i in range(len(seq) + 1):
        linear = {index[s] for s in inst.qsets
                  if all((_mask(s) & e).bit_count() <= 1 for e in placed)}
        packing = {idx for idx, E in enumerate(inst.edges) if E.isdisjoint(deleted)}
        if linear != packing:
            return False
        if i == len(seq):
            break
        chosen = index[tuple(seq[i])]
        if chosen not in linear:
            return False
        deleted |= inst.edges[chosen]
        placed.append(_mask(seq[i]))
    return True
