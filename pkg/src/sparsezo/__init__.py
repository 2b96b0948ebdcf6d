"""Sparse zeroth-order convex optimization: Lasso gradient estimates,
component selection, and l1 mirror descent, with a benchmark harness."""

from .config import ExperimentConfig, config_from_dict, load_config
from .errors import (
    BudgetExhausted,
    InnerSolveFailed,
    InvalidConfig,
    NonFinite,
    SchemaMismatch,
    SparsezoError,
)
from .lasso import (
    GradientEstimate,
    LassoFit,
    ProbeBatch,
    build_probe_batch,
    estimate_gradient,
    solve_lasso,
    twice_debias_estimate,
)
from .mirror import md_update, run_md
from .objectives import (
    CertifiedBounds,
    NoisyOracle,
    Objective,
    ObjectiveSpec,
    Optimum,
    make_objective,
)
from .params import OptimizerParams, md_params, md_twice_params, selection_params
from .plotting import emit_plot
from .runner import derive_seed, grid_search, run_experiment, run_trial
from .selection import successive_select
from .sphere_gd import SphereGDParams, default_gd_params, run_sphere_gd
from .trace import RegretTrace, RegretTracker, TraceRow

__version__ = "0.1.0"

__all__ = [
    "BudgetExhausted",
    "CertifiedBounds",
    "ExperimentConfig",
    "GradientEstimate",
    "InnerSolveFailed",
    "InvalidConfig",
    "LassoFit",
    "NoisyOracle",
    "NonFinite",
    "Objective",
    "ObjectiveSpec",
    "OptimizerParams",
    "Optimum",
    "ProbeBatch",
    "RegretTrace",
    "RegretTracker",
    "SchemaMismatch",
    "SparsezoError",
    "SphereGDParams",
    "TraceRow",
    "build_probe_batch",
    "config_from_dict",
    "default_gd_params",
    "derive_seed",
    "emit_plot",
    "estimate_gradient",
    "grid_search",
    "load_config",
    "make_objective",
    "md_params",
    "md_twice_params",
    "md_update",
    "run_experiment",
    "run_md",
    "run_sphere_gd",
    "run_trial",
    "selection_params",
    "solve_lasso",
    "successive_select",
    "twice_debias_estimate",
    "__version__",
]
