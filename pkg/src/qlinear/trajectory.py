"""Deterministic trajectories of the q-linear process, evaluated in log space.

With ``Q = C(q, 2)`` and ``p(t) = 1 - q(q-1) t``::

    y_j(t)   = C(n-j, q-j) * p**(Q - C(j,2))
    h(t)     = y_0(t)
    eps_j(t) = C(n-j, q-j) * n**(-1 + 3*beta*Q) * q**f * p**(-C(j,2) - 2Q)

with ``f = (ln ln n)**2`` and ``beta = 1/(6 q^2)``.  All logarithms are
natural.  Every curve is a binomial prefactor times a power of ``p``, so
values and derivatives are carried as logs and only exponentiated on
request.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import NamedTuple

EXACT_BINOM_LIMIT = 10**15


class TrajectoryDomainError(ValueError):
    pass


def log_binom(n: int, k: int) -> float:
    """Natural log of C(n, k); exact integer route while the value is small."""
    if k < 0 or k > n:
        return -math.inf
    k = min(k, n - k)
    # C(n, k) <= n**k / k!, cheap screen before computing the exact integer
    if k * math.log(max(n, 1)) - math.lgamma(k + 1) < math.log(EXACT_BINOM_LIMIT):
        return math.log(math.comb(n, k))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


class SignedLog(NamedTuple):
    """A real number as ``sign * exp(log_abs)``."""

    sign: int
    log_abs: float

    @property
    def value(self) -> float:
        return self.sign * math.exp(self.log_abs) if self.sign else 0.0


@dataclass(frozen=True)
class TrajectoryParams:
    n: int
    q: int
    f: float
    beta: Fraction
    m0: int

    @property
    def Q(self) -> int:
        return self.q * (self.q - 1) // 2

    @property
    def t_max(self) -> Fraction:
        """Right end of the trajectory domain, ``m0 / (n(n-1))``."""
        return Fraction(self.m0, self.n * (self.n - 1))

    @property
    def log_scale(self) -> float:
        """log of ``n**(-1 + 3 beta Q) * q**f``, the envelope's fixed factor."""
        return (-1 + 3 * float(self.beta) * self.Q) * math.log(self.n) + self.f * math.log(self.q)

    def t_of_step(self, i: int) -> Fraction:
        return Fraction(i, self.n * (self.n - 1))

    def p(self, t) -> float:
        """p(t) = 1 - q(q-1) t for any real t (no domain check)."""
        return float(1 - self.q * (self.q - 1) * Fraction(t))

    def y_exponent(self, j: int) -> int:
        return self.Q - j * (j - 1) // 2

    def eps_exponent(self, j: int) -> int:
        """b_j such that eps_j is proportional to p**(-b_j)."""
        return j * (j - 1) // 2 + 2 * self.Q

    def log_prefactor(self, j: int) -> float:
        return log_binom(self.n - j, self.q - j)


def make_params(n: int, q: int) -> TrajectoryParams:
    if not 3 <= q <= n:
        raise ValueError(f"trajectory needs 3 <= q <= n, got n={n}, q={q}")
    if n <= math.e:
        raise TrajectoryDomainError("ln ln n is undefined for n <= e")
    f = math.log(math.log(n)) ** 2
    beta = Fraction(1, 6 * q * q)
    with localcontext() as ctx:
        ctx.prec = 60
        shrink = 1 - Decimal(n) ** (-Decimal(beta.numerator) / Decimal(beta.denominator))
        m0 = int((Decimal(n * (n - 1)) / Decimal(q * (q - 1)) * shrink).to_integral_value(rounding="ROUND_FLOOR"))
    return TrajectoryParams(n=n, q=q, f=f, beta=beta, m0=m0)


@dataclass(frozen=True)
class CurvePoint:
    t: Fraction
    p: float
    log_y: tuple[float, ...]
    log_eps: tuple[float, ...]
    dy: tuple[SignedLog, ...]
    deps: tuple[SignedLog, ...]

    @property
    def log_h(self) -> float:
        return self.log_y[0]

    @property
    def log_eps_H(self) -> float:
        return self.log_eps[0]

    def y(self, j: int) -> float:
        return math.exp(self.log_y[j])

    def eps(self, j: int) -> float:
        return math.exp(self.log_eps[j])

    @property
    def h(self) -> float:
        return math.exp(self.log_y[0])

    @property
    def eps_H(self) -> float:
        return math.exp(self.log_eps[0])


def _check_t(params: TrajectoryParams, t) -> Fraction:
    t = Fraction(t)
    if t < 0 or t > params.t_max:
        raise TrajectoryDomainError(f"t={float(t)} outside [0, {float(params.t_max)}]")
    return t


def eval_curves(params: TrajectoryParams, t) -> CurvePoint:
    """All curves and first derivatives at ``t`` (Fraction for exact p)."""
    t = _check_t(params, t)
    q = params.q
    p = float(1 - q * (q - 1) * t)
    lp = math.log(p)
    lqq = math.log(q * (q - 1))
    log_y, log_eps, dy, deps = [], [], [], []
    for j in range(q):
        lb = params.log_prefactor(j)
        a = params.y_exponent(j)
        b = params.eps_exponent(j)
        log_y.append(lb + a * lp)
        le = lb + params.log_scale - b * lp
        log_eps.append(le)
        # y_j' = -C * a * q(q-1) * p**(a-1);  eps_j' = +scale * b * q(q-1) * p**(-b-1)
        dy.append(SignedLog(-1 if a else 0, lb + math.log(a) + lqq + (a - 1) * lp if a else -math.inf))
        deps.append(SignedLog(1, le + math.log(b) + lqq - lp))
    return CurvePoint(t=t, p=p, log_y=tuple(log_y), log_eps=tuple(log_eps),
                      dy=tuple(dy), deps=tuple(deps))


def y_value(params: TrajectoryParams, j: int, t) -> float:
    """Plain float y_j(t) without the domain check (for finite differences)."""
    p = params.p(t)
    return math.exp(params.log_prefactor(j)) * p ** params.y_exponent(j)


def eps_value(params: TrajectoryParams, j: int, t) -> float:
    p = params.p(t)
    return math.exp(params.log_prefactor(j) + params.log_scale) * p ** (-params.eps_exponent(j))


def log_second_derivatives(params: TrajectoryParams, j: int, t) -> tuple[float, float]:
    """log|y_j''(t)| and log|eps_j''(t)|."""
    p = params.p(t)
    lp = math.log(p)
    lqq = math.log(params.q * (params.q - 1))
    lb = params.log_prefactor(j)
    a = params.y_exponent(j)
    b = params.eps_exponent(j)
    if a >= 2:
        ly = lb + math.log(a * (a - 1)) + 2 * lqq + (a - 2) * lp
    else:
        ly = -math.inf
    le = lb + params.log_scale + math.log(b * (b + 1)) + 2 * lqq - (b + 2) * lp
    return ly, le


@dataclass(frozen=True)
class DriftReport:
    """The five supermartingale-drift relations at one (t, j).

    ``a_residual`` is the relative gap in the exact identity between the
    quadratic drift term and ``|y_j'| / (n(n-1))``.  ``b_ratio`` is the
    numeric ratio of the second relation and ``b_closed`` its exact value
    ``C(q,2) / (C(j,2) + 2 C(q,2))``.  The remaining fields are ratios that
    should vanish as n grows; they are keyed by m for 3 <= m <= q-1.
    """

    t: Fraction
    j: int
    a_residual: float
    b_ratio: float
    b_closed: Fraction
    c_ratios: dict = field(default_factory=dict)
    d_ratios: dict = field(default_factory=dict)
    e_ratio_y: float = 0.0
    e_ratio_eps: float = 0.0

    # the printed identity equates a positive quantity to y_j'/(n(n-1)), which
    # is negative; it is checked against |y_j'| and the sign reported here
    y_prime_sign: int = -1


def lemma6_report(params: TrajectoryParams, t, j: int) -> DriftReport:
    if not 0 <= j <= params.q - 1:
        raise ValueError(f"j must lie in 0..{params.q - 1}")
    pt = eval_curves(params, t)
    n, q, Q = params.n, params.q, params.Q
    lnn1 = math.log(n * (n - 1))
    log_y, log_eps = pt.log_y, pt.log_eps
    lh = pt.log_h

    # (a) (Q - C(j,2)) y_j y_2 / h  vs  |y_j'| / (n(n-1))
    a = params.y_exponent(j)
    lhs = math.log(a) + log_y[j] + log_y[2] - lh
    rhs = pt.dy[j].log_abs - lnn1
    a_residual = abs(math.expm1(lhs - rhs))

    # (b) Q y_j eps_2 / h  over  eps_j' / (n(n-1))
    leps_rate = pt.deps[j].log_abs - lnn1
    b_ratio = math.exp(math.log(Q) + log_y[j] + log_eps[2] - lh - leps_rate)
    b_closed = Fraction(Q, params.eps_exponent(j))

    c, d = {}, {}
    for m in range(3, q):
        lterm = math.log(q) + math.log(math.comb(q, m)) + log_y[j] - lh
        c[m] = math.exp(lterm + log_y[m] - leps_rate)
        d[m] = math.exp(lterm + log_eps[m] - leps_rate)

    # sup over the domain of a power of p sits at an endpoint
    ends = (Fraction(0), params.t_max)
    sup_y = max(log_second_derivatives(params, j, s)[0] for s in ends)
    sup_e = max(log_second_derivatives(params, j, s)[1] for s in ends)
    l2 = math.log(2) + 2 * lnn1
    e_y = math.exp(sup_y - l2 - leps_rate)
    e_e = math.exp(sup_e - l2 - leps_rate)
    return DriftReport(t=pt.t, j=j, a_residual=a_residual, b_ratio=b_ratio,
                        b_closed=b_closed, c_ratios=c, d_ratios=d,
                        e_ratio_y=e_y, e_ratio_eps=e_e)


@dataclass(frozen=True)
class FreedmanBudget:
    """Freedman-inequality inputs for the band variable of a size-j set.

    ``C`` bounds a single step, ``V`` is the constant-free variance
    expression and ``z`` the initial band width eps_j(0).
    """

    j: int
    C: int
    log_V: float
    log_z: float
    log_exponent: float
    log_z2_over_CV: float
    log_q_f_minus_4: float

    @property
    def V(self) -> float:
        return math.exp(self.log_V)

    @property
    def z(self) -> float:
        return math.exp(self.log_z)

    @property
    def exponent(self) -> float:
        return math.exp(self.log_exponent)

    @property
    def z2_over_CV(self) -> float:
        return math.exp(self.log_z2_over_CV)

    @property
    def normalized_ratio(self) -> float:
        """z^2/(C V) divided by q**(f-4)."""
        return math.exp(self.log_z2_over_CV - self.log_q_f_minus_4)


def freedman_budget(params: TrajectoryParams, j: int) -> FreedmanBudget:
    n, q, Q = params.n, params.q, params.Q
    if not 0 <= j <= q - 1:
        raise ValueError(f"j must lie in 0..{q - 1}")
    C = (q - 1) * math.comb(n - j, q - j - 1)
    lb = params.log_prefactor(j)
    ln = math.log(n)
    lq = math.log(q)
    beta = float(params.beta)
    log_V = lb + (params.f + 2) * lq + (-1 + 6 * beta * Q) * ln
    log_z = lb + (-1 + 3 * beta * Q) * ln + params.f * lq
    log_C = math.log(C)
    log_vz = max(log_V, log_z) + math.log1p(math.exp(-abs(log_V - log_z)))
    log_exponent = 2 * log_z - math.log(2) - log_C - log_vz
    return FreedmanBudget(j=j, C=C, log_V=log_V, log_z=log_z,
                          log_exponent=log_exponent,
                          log_z2_over_CV=2 * log_z - log_C - log_V,
                          log_q_f_minus_4=(params.f - 4) * lq)
