"""Numerical laboratory for extinction in gradient-absorbing fast diffusion.

The flow under study is radial fast diffusion with a power absorption of
the gradient.  The library derives the exponent laws of the problem,
builds the closed-form comparison profiles those laws admit, integrates
the regularized equation on radial grids, and measures the extinction
phenomenology against the certified profiles: rates, support collapse,
localization, positivity floors, and the flatness diagnostics.

Modules
-------
exponents   parameter validation, regime classification, derived constants
gridop      radial grids, discrete operator, regularization, step control
closedform  comparison profiles with sampled sign certificates
solver      time integration to extinction, divergence, or the horizon
analysis    rate fits, domination checks, envelopes, flux diagnostics
acceptance  the numbered verification battery behind ``vhjlab verify``
cli         experiment configs, run directories, the command line
"""

from .exponents import (
    DerivedConstants,
    ExponentOutOfRange,
    NonIntegerDimension,
    ProblemParams,
    Regime,
    RegimeMismatch,
    classify_regime,
    derive_constants,
    validate_params,
)
from .gridop import (
    Field,
    GridMismatch,
    RadialGrid,
    Regularization,
    default_eps,
    default_gamma_lift,
    discrete_rhs,
    stable_dt,
)
from .closedform import (
    Barrier,
    DecayTooSlow,
    NotApplicable,
    SelfSimSuper,
    ShrinkSuper,
    TailSub,
    certify_sign,
    find_A0,
    make_shrink_super,
    make_tail_sub,
    operator_terms,
    selfsim_certificates,
    tail_sub_min_a,
)
from .solver import (
    Bump,
    Custom,
    DataShapeError,
    FastDecay,
    FatTail,
    Outcome,
    RunResult,
    SolverConfig,
    run,
)
from .analysis import (
    DominationReport,
    EmptySupport,
    FitResult,
    InsufficientPoints,
    JDiagnostic,
    check_domination,
    default_domination_tol,
    fit_exponent,
    flatness_floor,
    flux_balance,
    gradient_quotient,
    j_diagnostic,
    localization_radius,
    support_radius,
)
from .acceptance import SUITES, Battery, CriterionResult, run_suite

__version__ = "0.1.0"

__all__ = [
    "Barrier",
    "Battery",
    "Bump",
    "CriterionResult",
    "Custom",
    "DataShapeError",
    "DecayTooSlow",
    "DerivedConstants",
    "DominationReport",
    "EmptySupport",
    "ExponentOutOfRange",
    "FastDecay",
    "FatTail",
    "Field",
    "FitResult",
    "GridMismatch",
    "InsufficientPoints",
    "JDiagnostic",
    "NonIntegerDimension",
    "NotApplicable",
    "Outcome",
    "ProblemParams",
    "RadialGrid",
    "Regime",
    "RegimeMismatch",
    "Regularization",
    "RunResult",
    "SUITES",
    "SelfSimSuper",
    "ShrinkSuper",
    "SolverConfig",
    "TailSub",
    "certify_sign",
    "check_domination",
    "classify_regime",
    "default_domination_tol",
    "default_eps",
    "default_gamma_lift",
    "derive_constants",
    "discrete_rhs",
    "find_A0",
    "fit_exponent",
    "flatness_floor",
    "flux_balance",
    "gradient_quotient",
    "j_diagnostic",
    "localization_radius",
    "make_shrink_super",
    "make_tail_sub",
    "operator_terms",
    "run",
    "run_suite",
    "selfsim_certificates",
    "stable_dt",
    "support_radius",
    "tail_sub_min_a",
    "validate_params",
    "__version__",
]
