import math
from fractions import Fraction

import numpy as np
import pytest

from qlinear.trajectory import (
    TrajectoryDomainError,
    eval_curves,
    eps_value,
    freedman_budget,
    lemma6_report,
    log_binom,
    make_params,
    y_value,
)


def test_m0_and_constants():
    p = make_params(100, 3)
    assert p.beta == Fraction(1, 54)
    assert p.m0 == 134
    # (ln ln 16)^2 evaluated at 30 digits
    assert make_params(16, 3).f == pytest.approx(1.0399541864662196, rel=1e-14)
    for q in (3, 4, 7):
        assert make_params(50, q).beta * 6 * q * q == 1


@pytest.mark.parametrize("n,q", [(16, 3), (100, 3), (1000, 4), (10**5, 5), (37, 6)])
def test_m0_brackets(n, q):
    p = make_params(n, q)
    shrink = 1 - n ** (-float(p.beta))
    assert q * (q - 1) * p.m0 <= n * (n - 1) * shrink < q * (q - 1) * (p.m0 + 1)
    pm = p.p(p.t_max)
    floor_p = n ** (-float(p.beta))
    assert pm >= floor_p - 1e-12
    assert pm - floor_p <= q * (q - 1) / (n * (n - 1)) + 1e-12


def test_domain_errors():
    with pytest.raises(ValueError):
        make_params(2, 3)
    with pytest.raises(ValueError):
        make_params(10, 2)
    p = make_params(100, 3)
    with pytest.raises(TrajectoryDomainError):
        eval_curves(p, -Fraction(1, 10**6))
    with pytest.raises(TrajectoryDomainError):
        eval_curves(p, p.t_max + Fraction(1, 10**9))
    assert p.p(Fraction(1, 6)) == 0


def test_log_binom():
    assert log_binom(10, 3) == pytest.approx(math.log(120), rel=1e-15)
    big = log_binom(10**6, 40)
    ref = math.lgamma(10**6 + 1) - math.lgamma(41) - math.lgamma(10**6 - 39)
    assert big == pytest.approx(ref, rel=1e-12)
    assert log_binom(5, 7) == -math.inf


def test_start_values():
    p = make_params(100, 4)
    pt = eval_curves(p, 0)
    assert pt.p == 1
    assert pt.h == pytest.approx(math.comb(100, 4), rel=1e-12)
    for j in range(4):
        assert pt.y(j) == pytest.approx(math.comb(100 - j, 4 - j), rel=1e-12)
    assert pt.log_h == pt.log_y[0] and pt.log_eps_H == pt.log_eps[0]


def test_eps_over_y_ratio():
    rng = np.random.default_rng(0)
    for _ in range(200):
        q = int(rng.integers(3, 7))
        n = int(rng.integers(max(q, 16), 10**6))
        p = make_params(n, q)
        t = p.t_max * Fraction(int(rng.integers(0, 1001)), 1000)
        j = int(rng.integers(0, q))
        pt = eval_curves(p, t)
        Q = p.Q
        want = q ** p.f * n ** (-1 + 3 * float(p.beta) * Q) * pt.p ** (-3 * Q)
        assert math.exp(pt.log_eps[j] - pt.log_y[j]) == pytest.approx(want, rel=1e-9)


@pytest.mark.parametrize("n,q", [(100, 3), (1000, 4), (5000, 5)])
def test_derivatives_match_finite_differences(n, q):
    p = make_params(n, q)
    delta = 1e-8 / (q * (q - 1))
    for frac in (0.0, 0.3, 0.9):
        t = float(p.t_max) * frac
        pt = eval_curves(p, Fraction(t))
        for j in range(q):
            fd_y = (y_value(p, j, t + delta) - y_value(p, j, t)) / delta
            fd_e = (eps_value(p, j, t + delta) - eps_value(p, j, t)) / delta
            assert fd_y == pytest.approx(pt.dy[j].value, rel=1e-6)
            assert fd_e == pytest.approx(pt.deps[j].value, rel=1e-6)


def test_monotone_directions():
    p = make_params(1000, 4)
    ts = [p.t_max * Fraction(k, 10) for k in range(11)]
    for j in range(4):
        ys = [eval_curves(p, t).y(j) for t in ts]
        es = [eval_curves(p, t).eps(j) for t in ts]
        assert all(a > b for a, b in zip(ys, ys[1:]))
        assert all(a < b for a, b in zip(es, es[1:]))
        assert all(y > 0 and e > 0 for y, e in zip(ys, es))


def test_drift_exact_parts():
    p = make_params(1000, 5)
    for j in range(5):
        rep = lemma6_report(p, p.t_max / 2, j)
        assert rep.a_residual < 1e-9
        assert rep.y_prime_sign == -1
        assert rep.b_closed == Fraction(10, j * (j - 1) // 2 + 20)
        assert rep.b_ratio == pytest.approx(float(rep.b_closed), rel=1e-9)
        assert (rep.b_closed == Fraction(1, 2)) == (j in (0, 1))
        assert set(rep.c_ratios) == {3, 4}


def test_drift_c_trend_q5():
    vals = [lemma6_report(make_params(n, 5), 0, 0).c_ratios[3] for n in (10**3, 10**4, 10**5)]
    assert vals[0] > vals[1] > vals[2]


def test_freedman_budget():
    for n in (10**3, 10**4):
        for q in (3, 4):
            p = make_params(n, q)
            for j in (0, 1):
                b = freedman_budget(p, j)
                assert 1e-2 <= b.normalized_ratio <= 1e2
                assert b.z <= b.V
    p = make_params(1000, 4)
    assert freedman_budget(p, 3).C == 3
    b0 = freedman_budget(p, 0)
    assert b0.z == pytest.approx(eval_curves(p, 0).eps_H, rel=1e-12)
    assert b0.exponent == pytest.approx(b0.z ** 2 / (2 * b0.C * (b0.V + b0.z)), rel=1e-9)
    with pytest.raises(ValueError):
        freedman_budget(p, 4)
