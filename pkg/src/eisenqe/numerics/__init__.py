"""Numerical building blocks: log-space complex numbers, special functions, Bessel K and quadrature."""
from .bessel import bessel_k, bessel_k_log, bessel_k_scaled, bessel_moment_closed_form, bessel_moment_quadrature
from .logcomplex import LogComplex, exp_log
from .quadrature import QuadratureSpec, RowPiece, integrate_1d, integrate_2d
from .special import log_gamma, log_xi_complex, sigma_power, sigma_table, xi, zeta, zeta_with_bound
from .types import SpectralPoint, as_complex

__all__ = [
    "LogComplex", "exp_log", "SpectralPoint", "as_complex",
    "log_gamma", "zeta", "zeta_with_bound", "xi", "log_xi_complex", "sigma_power", "sigma_table",
    "bessel_k", "bessel_k_log", "bessel_k_scaled", "bessel_moment_closed_form", "bessel_moment_quadrature",
    "QuadratureSpec", "RowPiece", "integrate_1d", "integrate_2d",
]
