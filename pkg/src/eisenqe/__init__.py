"""Non-holomorphic Eisenstein series for PSL(2,Z), scattering states at zeta zeros and quantum measures."""
__version__ = "0.1.0"

from .domain import (
    HalfPlanePoint,
    JordanRegion,
    MoebiusElement,
    fundamental_domain,
    mu_measure,
    parse_region,
    reduce_to_fundamental,
)
from .eisenstein import (
    TruncationPolicy,
    WeightFunction,
    eisenstein_fourier,
    eisenstein_lattice,
    fourier_coefficients,
    incomplete_eisenstein,
    phi,
    scattering_state,
)
from .errors import (
    AccuracyError,
    EisenQEError,
    NumericDomainError,
    PoleError,
    ScatteringPoleError,
    ZeroTableError,
)
from .measures import (
    SigmaSchedule,
    limit_target,
    luo_sarnak_ratio,
    nu_measure,
    parseval_check,
    phi_log_derivative,
    quantum_measure,
    sweep,
)
from .numerics import LogComplex, QuadratureSpec, SpectralPoint
from .zeros import ZeroTable, bundled_zeros, load_zeros, scattering_poles

__all__ = [name for name in dir() if not name.startswith("_")]
