"""Oracle suites: each returns a dict with ``passed`` plus what it checked."""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np

from .hypergraph import LinearHypergraph
from .oracle import (
    absolute_bound_check,
    available_masks,
    expected_delta_bruteforce,
    expected_delta_formula,
    identities,
    packing_equivalence,
    proposition_bounds,
)
from .process import ProcessConfig, run
from .trajectory import lemma6_report, make_params

NO_CHECKPOINTS = 10**9


def random_reachable_state(n: int, q: int, seed: int, nonmaximal: bool = True) -> LinearHypergraph:
    """A state of the process after a uniformly random number of steps."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, n, q]))
    horizon = n * (n - 1) // (q * (q - 1))
    k = int(rng.integers(0, horizon + 1))
    state, _ = run(ProcessConfig(n, q, seed=seed, steps=k, checkpoint_stride=NO_CHECKPOINTS))
    h = state.hypergraph
    while nonmaximal and h.num_edges and not available_masks(h):
        # back off one edge at a time until something is available
        h = LinearHypergraph(n, q, h.edges[:-1])
    return h


def all_subsets_below(n: int, q: int):
    for j in range(q):
        yield from combinations(range(1, n + 1), j)


def suite_identities(max_l: int = 64, max_k: int = 64) -> dict:
    bad = []
    for l in range(2, max_l + 1):
        if identities("A", 0, l) != 1:
            bad.append(("A", 0, l))
        if identities("B", 1, l) != 1:
            bad.append(("B", 1, l))
        for k in range(2, max_k + 1):
            if identities("C", k, l) != 0:
                bad.append(("C", k, l))
    return {"passed": not bad, "failures": bad[:20]}


def suite_one_step_formula(states: int = 100, seed: int = 0, ns=(5, 6, 7, 8), qs=(3, 4)) -> dict:
    """Exact equality of the inclusion-exclusion formula and the brute force."""
    rng = np.random.default_rng(seed)
    checked, bad = 0, []
    for s in range(states):
        n = int(rng.choice(ns))
        q = int(rng.choice(qs))
        h = random_reachable_state(n, q, seed * 100_003 + s)
        avail = available_masks(h)
        if not avail:
            continue
        for J in all_subsets_below(n, q):
            f = expected_delta_formula(h, J, avail)
            b = expected_delta_bruteforce(h, J, avail)
            checked += 1
            if f != b:
                bad.append({"n": n, "q": q, "edges": h.edges, "J": J,
                            "formula": str(f), "bruteforce": str(b)})
    return {"passed": not bad and checked > 0, "checked": checked, "failures": bad[:10]}


def suite_absolute_bound(states: int = 20, seed: int = 0, ns=(5, 6, 7, 8), qs=(3, 4)) -> dict:
    rng = np.random.default_rng(seed)
    checked, bad = 0, []
    for s in range(states):
        n = int(rng.choice(ns))
        q = int(rng.choice(qs))
        h = random_reachable_state(n, q, seed * 7919 + s)
        for e in h.available_edges():
            for J in all_subsets_below(n, q):
                checked += 1
                if not absolute_bound_check(h, J, e):
                    bad.append({"edges": h.edges, "J": J, "e": e})
    return {"passed": not bad, "checked": checked, "failures": bad[:10]}


def suite_packing(runs: int = 20, seed: int = 0, ns=(5, 6, 7, 8), q: int = 3) -> dict:
    bad = []
    for r in range(runs):
        n = ns[r % len(ns)]
        state, _ = run(ProcessConfig(n, q, seed=seed + r, checkpoint_stride=NO_CHECKPOINTS))
        if not packing_equivalence(state.hypergraph):
            bad.append({"n": n, "seed": seed + r})
    return {"passed": not bad, "runs": runs, "failures": bad}


def suite_drift(ns=(100, 1000, 10_000), qs=(3, 4, 5), points: int = 20) -> dict:
    """Exact relations (a) and (b) on a grid of (n, q, j, t)."""
    worst_a, bad = 0.0, []
    for n in ns:
        for q in qs:
            params = make_params(n, q)
            for k in range(points):
                t = params.t_max * Fraction(k, points - 1)
                for j in range(q):
                    rep = lemma6_report(params, t, j)
                    worst_a = max(worst_a, rep.a_residual)
                    ok_b = rep.b_closed <= Fraction(1, 2) and math.isclose(rep.b_ratio, float(rep.b_closed), rel_tol=1e-9)
                    if rep.a_residual > 1e-9 or not ok_b:
                        bad.append({"n": n, "q": q, "j": j, "t": float(t)})
    return {"passed": not bad, "worst_a_residual": worst_a, "failures": bad[:10]}


def suite_propositions(runs: int = 20, seed: int = 0, max_n: int = 12) -> dict:
    bad, checked = [], 0
    for n in range(3, max_n + 1):
        for q in range(3, n + 1):
            for r in range(runs):
                state, _ = run(ProcessConfig(n, q, seed=seed + r, checkpoint_stride=NO_CHECKPOINTS))
                rep = proposition_bounds(n, q, state.hypergraph, maximal=state.hypergraph.is_maximal(budget=None))
                checked += 1
                if not rep.maximal or not rep.passed:
                    bad.append({"n": n, "q": q, "seed": seed + r, "edges": rep.edges})
    return {"passed": not bad, "runs": checked, "failures": bad[:10]}


SUITES = {
    "identities": suite_identities,
    "one_step_formula": suite_one_step_formula,
    "absolute_bound": suite_absolute_bound,
    "packing": suite_packing,
    "drift_relations": suite_drift,
    "propositions": suite_propositions,
}


def run_suites(names=None, seed: int = 0) -> dict:
    out = {}
    for name in names or SUITES:
        fn = SUITES[name]
        try:
            out[name] = fn(seed=seed) if "seed" in fn.__code__.co_varnames else fn()
        except Exception as exc:  # a crashing suite is a failing suite
            out[name] = {"passed": False, "error": repr(exc)}
    return out
