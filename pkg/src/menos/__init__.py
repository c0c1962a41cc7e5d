"""Fisher information and measurement-noise susceptibility of quantum measurements."""
from .errors import (
    DegenerateModel,
    DimensionMismatch,
    InvalidArgument,
    InvalidBasis,
    InvalidInput,
    InvalidPovm,
    MenosError,
    NoFeasiblePoint,
    NotPositiveSemidefinite,
    NumericalInconsistency,
    SupportViolation,
    UndefinedSusceptibility,
)
from .fisher import (
    MenosReport,
    OutcomeStats,
    a_operator,
    cfi,
    chi_bruteforce,
    chi_menos,
    chi_pair,
    crb,
    g_functional,
    outcome_stats,
    stats_from_analytic,
)
from .linalg import EigenDecomposition, as_hermitian, eig_hermitian, psd_sqrt, qfi, sld, trace_norm
from .models import (
    AnalyticOutcomeModel,
    ModelAtPoint,
    finite_diff_model,
    hg_mode_stats,
    interferometer_cfi,
    interferometer_model,
    interferometer_povm,
    interferometer_stats,
    pure_canonicalize,
    superres_constants,
    superres_model,
)
from .povm import (
    Povm,
    ValidationReport,
    coarse_grain,
    equator_povm,
    mix,
    projective_from_states,
    random_equator_povm,
    random_povm,
    random_stochastic_map,
    validate,
)
from .saturation import (
    ChiQResult,
    SaturationReport,
    check_saturation,
    is_equator_povm,
    minimize_chi_q_superres,
    superres_family_povm,
)

__version__ = "0.1.0"
