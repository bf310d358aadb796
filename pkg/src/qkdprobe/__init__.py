"""Entangling-probe attack toolkit for four-state quantum key distribution.

Evaluates the closed-form attack observables, constructs and verifies the
optimum probe parameters for arbitrary signal-basis angle, and carries the
key-distillation chain (defense frontier, privacy amplification, secrecy
capacity) plus a seeded protocol simulator.
"""

from .distill import (
    CapacityPoint,
    DistillationConfig,
    FrontierResult,
    PaCheckResult,
    asymptotic_capacity,
    capacity_curve,
    compression_level,
    defense_frontier,
    inverse_erf,
    pa_empirical_check,
    pa_shannon_bound,
    renyi_information,
    xi,
)
from .errors import QkdProbeError
from .optimum import (
    Branch,
    BranchedOptimum,
    FamilyTag,
    OptimumFamily,
    PossibilityReport,
    PossibilityStatus,
    SignPair,
    corner_error_rate,
    corner_overlap,
    csc_branch_overlap,
    enumerate_possibilities,
    optimal_overlap,
    optimal_parameter_families,
    possibility_d_feasibility,
    sample_params,
    sec_branch_overlap,
    stationarity_residuals,
)
from .probe import (
    AttackEvaluation,
    DetectionProbabilities,
    ProbeCoefficients,
    ProbeParams,
    SignalGeometry,
    coefficients,
    detection_probabilities,
    error_rate,
    evaluate,
    interchange_geometry,
    mu_from_constraint,
    overlap,
    q_value,
    renyi_info,
)
from .search import SearchConfig, SearchReport, constrained_scan, penalty_scan, refine
from .simulate import (
    FamilyAttack,
    QLeakModel,
    SimulationConfig,
    SimulationReport,
    run,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AttackEvaluation",
    "Branch",
    "BranchedOptimum",
    "CapacityPoint",
    "DetectionProbabilities",
    "DistillationConfig",
    "FamilyAttack",
    "FamilyTag",
    "FrontierResult",
    "OptimumFamily",
    "PaCheckResult",
    "PossibilityReport",
    "PossibilityStatus",
    "ProbeCoefficients",
    "ProbeParams",
    "QLeakModel",
    "QkdProbeError",
    "SearchConfig",
    "SearchReport",
    "SignPair",
    "SignalGeometry",
    "SimulationConfig",
    "SimulationReport",
    "asymptotic_capacity",
    "capacity_curve",
    "coefficients",
    "compression_level",
    "constrained_scan",
    "corner_error_rate",
    "corner_overlap",
    "csc_branch_overlap",
    "defense_frontier",
    "detection_probabilities",
    "enumerate_possibilities",
    "error_rate",
    "evaluate",
    "interchange_geometry",
    "inverse_erf",
    "mu_from_constraint",
    "optimal_overlap",
    "optimal_parameter_families",
    "overlap",
    "pa_empirical_check",
    "pa_shannon_bound",
    "penalty_scan",
    "possibility_d_feasibility",
    "q_value",
    "refine",
    "renyi_info",
    "renyi_information",
    "run",
    "sample_params",
    "sec_branch_overlap",
    "stationarity_residuals",
    "sweep",
    "xi",
    "__version__",
]
