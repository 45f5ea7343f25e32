"""Modified Bessel function K_nu(u) for complex order and real u > 0."""
from __future__ import annotations

import math

import numpy as np

from .. import _kernels
from ..errors import NumericDomainError, OscillationBudgetError
from .logcomplex import LogComplex

# largest |Im nu| accepted; the contour node count grows linearly with it
MAX_IMAG_ORDER = 1500.0


def bessel_k_log(nu, u, max_imag_order: float = MAX_IMAG_ORDER) -> np.ndarray:
    """Complex logarithms of K_nu(u_j) for an array of u_j > 0."""
    nu = complex(nu)
    u = np.asarray(u, dtype=float)
    if np.any(~(u > 0)):
        raise NumericDomainError("K-Bessel argument must be positive")
    if abs(nu.imag) > max_imag_order:
        raise OscillationBudgetError(
            f"|Im nu| = {abs(nu.imag):g} exceeds the oscillation budget {max_imag_order:g}"
        )
    return _kernels.k_bessel_log(nu.real, nu.imag, u)


def bessel_k_scaled(nu, u: float, max_imag_order: float = MAX_IMAG_ORDER) -> LogComplex:
    """K_nu(u) as a LogComplex.

    The modulus of K_nu(u) is about exp(-pi |Im nu| / 2) for u < |Im nu|, far
    below the double range for |Im nu| > 450, so the value is only ever held
    as (log-modulus, phase).
    """
    u = float(u)
    if not u > 0:
        raise NumericDomainError(f"K-Bessel argument must be positive, got {u}")
    return LogComplex.from_log(bessel_k_log(nu, np.array([u]), max_imag_order)[0])


def bessel_k(nu, u: float) -> complex:
    """K_nu(u) as a plain complex (underflows for large |Im nu|)."""
    return bessel_k_scaled(nu, u).to_complex()


def bessel_moment_closed_form(s, mu, nu) -> complex:
    """2^(s-3) / Gamma(s) * prod over signs of Gamma((s +- mu +- nu) / 2)."""
    from .special import log_gamma_complex

    s, mu, nu = complex(s), complex(mu), complex(nu)
    total = (s - 3.0) * math.log(2.0) - log_gamma_complex(s)
    for a in (mu, -mu):
        for b in (nu, -nu):
            total += log_gamma_complex(0.5 * (s + a + b))
    return complex(np.exp(total))


def bessel_moment_quadrature(s, mu, nu, spec=None) -> tuple[complex, float]:
    """int_0^inf y^s K_mu(y) K_nu(y) dy / y by quadrature in log y.

    Needs Re s > |Re mu| + |Re nu|.  The integrand is summed as computed;
    when |Im mu| and |Im nu| differ by D the result is smaller than the
    integrand by about exp(-pi D / 2), which bounds the attainable
    relative accuracy.
    """
    from .quadrature import QuadratureSpec, integrate_1d

    s, mu, nu = complex(s), complex(mu), complex(nu)
    margin = s.real - abs(mu.real) - abs(nu.real)
    if not margin > 0:
        raise NumericDomainError("moment integral diverges: need Re s > |Re mu| + |Re nu|")
    spec = spec or QuadratureSpec(rel_tol=1e-11, abs_tol=1e-300)
    # below y_lo the integrand is < 1e-18 of its size near y = 1
    log_lo = -18.0 * math.log(10.0) / margin
    log_hi = math.log(60.0 + abs(mu.imag) + abs(nu.imag))

    def f(logs):
        y = np.exp(logs)
        lk = bessel_k_log(mu, y) + bessel_k_log(nu, y)
        return np.exp(s * logs + lk)

    return integrate_1d(f, (log_lo, log_hi), spec, smooth_ends=False)
