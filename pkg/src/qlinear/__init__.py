"""Simulation lab for the random greedy q-linear hypergraph process."""
from .cliques import BudgetExceeded
from .codegree import (
    BandResidual,
    CodegreeTracker,
    TrackedSet,
    exact_codegree,
    sampled_codegree,
    update_tracked,
)
from .hypergraph import FreePairGraph, LinearHypergraph, PairCoverage, UnavailableEdgeError
from .oracle import (
    absolute_bound_check,
    build_packing_instance,
    expected_delta_bruteforce,
    expected_delta_formula,
    identities,
    packing_equivalence,
    proposition_bounds,
)
from .process import (
    ProcessConfig,
    ProcessState,
    ProcessTrace,
    estimate_available,
    run,
    sample_available,
)
from .trajectory import (
    CurvePoint,
    FreedmanBudget,
    TrajectoryParams,
    eval_curves,
    freedman_budget,
    lemma6_report,
    make_params,
)

__version__ = "0.1.0"

__all__ = [
    "BandResidual",
    "BudgetExceeded",
    "CodegreeTracker",
    "CurvePoint",
    "FreePairGraph",
    "FreedmanBudget",
    "LinearHypergraph",
    "PairCoverage",
    "ProcessConfig",
    "ProcessState",
    "ProcessTrace",
    "TrackedSet",
    "TrajectoryParams",
    "UnavailableEdgeError",
    "absolute_bound_check",
    "build_packing_instance",
    "estimate_available",
    "eval_curves",
    "exact_codegree",
    "expected_delta_bruteforce",
    "expected_delta_formula",
    "freedman_budget",
    "identities",
    "lemma6_report",
    "make_params",
    "packing_equivalence",
    "proposition_bounds",
    "run",
    "sample_available",
    "sampled_codegree",
    "update_tracked",
]
