"""Function reconstruction from a few Taylor coefficients via flow approximants.

The library builds closed-form, globally one-to-one approximants out of two
to four Taylor coefficients, applies them through a variational coupling
substitution to two benchmark problems (a quartic-weighted Gaussian integral
and the quartic anharmonic oscillator ground energy), and verifies them
against independently built numerical oracles.
"""

from .approximants import (
    AccuracyRow,
    ApproximantKind,
    FittedApproximant,
    check_group_property,
    check_infinitesimal_operator,
    delta_percent,
    delta_table,
    evaluate,
    fit,
    generic_rg_value,
)
from .errors import (
    ConvergenceFailure,
    DomainError,
    InsufficientOrder,
    NegativeCoupling,
    NonzeroInnerConstant,
    NoRootInBracket,
    NumericalError,
    RgResumError,
    ZeroLinearCoefficient,
)
from .models import (
    OSCILLATOR_STRONG_COEFF,
    PARTITION_STRONG_COEFF,
    OscillatorOracleConfig,
    PartitionOracleConfig,
    error_profile,
    oscillator_exact,
    oscillator_weak_series,
    paper_delta_suite,
    partition_exact,
    partition_weak_series,
    strong_asym,
)
from .numerics import (
    RootBracket,
    SymmetricMatrix,
    adaptive_quadrature,
    central_difference,
    find_root,
    symmetric_eigen_smallest,
)
from .pms import (
    PmsModel,
    PmsRelation,
    StrongCouplingAsym,
    derived_bracket_series,
    fit_p,
    improved_rg_value,
    invert_relation,
    modified_series_value,
    pipeline_equivalence_residual,
    relation_g_of_x,
    strong_limit_coeff,
)
from .series import (
    DEFAULT_ORDER,
    TruncatedSeries,
    beta_series,
    compose,
    differentiate,
    multiply,
    normalized,
    reversion,
)

__version__ = "0.1.0"
