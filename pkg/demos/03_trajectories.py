# %% [markdown]
# # Deterministic trajectories
#
# With p(t) = 1 - q(q-1)t the predicted codegree of a j-set is
# y_j = C(n-j, q-j) p^(C(q,2) - C(j,2)), and h = y_0 predicts |H(i)|.
# Everything is evaluated in log space.

# %%
from fractions import Fraction

from qlinear import eval_curves, freedman_budget, lemma6_report, make_params

params = make_params(100, 3)
print("beta =", params.beta, " f =", round(params.f, 4), " m0 =", params.m0)
for k in (0, 2, 4):
    pt = eval_curves(params, params.t_max * Fraction(k, 4))
    print(f"t={float(pt.t):.5f} p={pt.p:.4f} h={pt.h:.1f} eps_H={pt.eps_H:.1f}")

# %% [markdown]
# The drift relations: (a) is an identity, (b) a fixed ratio at most 1/2,
# and the remaining ratios shrink as n grows.

# %%
rep = lemma6_report(params, params.t_max / 2, 1)
print("(a) residual", rep.a_residual, " (b)", rep.b_ratio, "=", rep.b_closed)
for n in (10**3, 10**4, 10**5):
    r = lemma6_report(make_params(n, 5), 0, 0)
    print(n, "c3 =", f"{r.c_ratios[3]:.3e}", " e_y =", f"{r.e_ratio_y:.3e}")

# %%
for n in (10**3, 10**4):
    b = freedman_budget(make_params(n, 3), 0)
    print(n, "z^2/(CV) / q^(f-4) =", round(b.normalized_ratio, 4))
