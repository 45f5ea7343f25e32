"""Non-holomorphic Eisenstein series E(z, s) for PSL(2, Z).

Fourier expansion at the cusp (the working evaluator)::

    E(z, s) = y^s + phi(s) y^(1-s)
              + (2 sqrt(y) / xi(2s)) sum_{n>=1} n^(s-1/2) sigma_{1-2s}(n)
                K_{s-1/2}(2 pi n y) * 2 cos(2 pi n x)

with phi(s) = xi(2 - 2s) / xi(2s).  At height t both xi(2s) and the
K-Bessel factors are of size exp(-pi t / 2); every coefficient is therefore
assembled as a complex logarithm and exponentiated only at the end.

The lattice-sum evaluator is an independent oracle valid for Re s > 1.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .domain import HalfPlanePoint, as_point, reduce_to_fundamental
from .errors import (
    AccuracyError,
    NumericDomainError,
    PoleError,
    ScatteringPoleError,
    TruncationError,
)
from .numerics.bessel import bessel_k_log, bessel_k_scaled
from .numerics.logcomplex import LogComplex, exp_log
from .numerics.special import log_gamma_complex, log_xi_complex, sigma_table, zeta
from .numerics.types import as_complex

_LOG2 = math.log(2.0)
# |zeta(2s)| below this is treated as sitting on a scattering pole
SCATTERING_POLE_TOL = 1e-12
LATTICE_MIN_SIGMA = 1.05


@dataclass(frozen=True)
class TruncationPolicy:
    """Number of Fourier modes kept: a base count from the height, then
    extended until the omitted terms fall below 10^-digits of the series scale."""

    digits: float = 10.0
    n_cap: int = 20000

    def __post_init__(self):
        if not self.digits > 0:
            raise ValueError("digits must be positive")
        if self.n_cap < 1:
            raise ValueError("n_cap must be >= 1")

    def base_terms(self, t: float, y: float) -> int:
        """ceil((|t| + 2.3 digits + 10) / (2 pi y))."""
        return max(1, int(math.ceil((abs(t) + 2.3 * self.digits + 10.0) / (2.0 * math.pi * y))))

    def threshold(self) -> float:
        return 10.0 ** (-self.digits)


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class FourierCoefficient:
    """Coefficient a_n(y, s) of exp(2 pi i n x); a_{-n} = a_n."""

    n: int
    value: LogComplex


@dataclass(frozen=True)
class FourierRow:
    """Coefficients at one height: E(x + iy) = a0 + 2 sum a_n cos(2 pi n x)."""

    y: float
    s: complex
    a0: complex
    coeffs: np.ndarray
    err_est: float

    @property
    def n_terms(self) -> int:
        return int(self.coeffs.size)

    def evaluate(self, xs) -> np.ndarray:
        return _kernels.cosine_sum(self.a0, self.coeffs, np.asarray(xs, dtype=float))

    def coefficient(self, n: int) -> FourierCoefficient:
        n = abs(int(n))
        if n == 0:
            return FourierCoefficient(0, LogComplex.from_complex(self.a0))
        if n > self.n_terms:
            return FourierCoefficient(n, LogComplex(-math.inf))
        return FourierCoefficient(n, LogComplex.from_complex(self.coeffs[n - 1]))


@dataclass(frozen=True)
class EisensteinValue:
    value: complex
    err_est: float
    n_terms: int
    z_reduced: HalfPlanePoint


# --------------------------------------------------------------------------
# scattering matrix


def _check_s(s: complex):
    if s == 0 or s == 1:
        raise PoleError(f"E(z, s) and phi(s) have a pole at s = {s.real:g}")


def _log_xi_2s(s: complex) -> complex:
    """log xi(2s), raising when 2s sits on a zeta zero."""
    w = 2.0 * s
    zw = zeta(1.0 - w if w.real < 0.5 else w)
    if abs(zw) < SCATTERING_POLE_TOL:
        raise ScatteringPoleError(s, f"xi(2s) vanishes at s = {s} (|zeta(2s)| = {abs(zw):.2e})")
    return log_xi_complex(w)


def log_phi(s) -> complex:
    """Complex logarithm of phi(s) = xi(2 - 2s) / xi(2s)."""
    s = as_complex(s)
    _check_s(s)
    if s == 0.5:
        return complex(0.0, math.pi)
    return log_xi_complex(2.0 - 2.0 * s) - _log_xi_2s(s)


def phi(s) -> LogComplex:
    """The scattering matrix phi(s) = xi(2 - 2s) / xi(2s) as a LogComplex."""
    return LogComplex.from_log(log_phi(s))


# --------------------------------------------------------------------------
# Fourier expansion


def _log_coefficients(y: float, s: complex, n_lo: int, n_hi: int, log_pref: complex) -> np.ndarray:
    n = np.arange(n_lo, n_hi + 1, dtype=float)
    sig = sigma_table(n_hi, 1.0 - 2.0 * s)[n_lo - 1 : n_hi]
    with np.errstate(divide="ignore"):
        log_sig = np.log(sig)
    log_k = bessel_k_log(s - 0.5, 2.0 * math.pi * n * y)
    return log_pref + (s - 0.5) * np.log(n) + log_sig + log_k


@lru_cache(maxsize=4096)
def _fourier_row_cached(y: float, s: complex, digits: float, n_cap: int) -> FourierRow:
    policy = TruncationPolicy(digits, n_cap)
    if s == 0.5:
        return FourierRow(y, s, 0j, np.zeros(0, dtype=complex), 0.0)
    log_y = math.log(y)
    a0 = LogComplex.from_log(s * log_y) + LogComplex.from_log(log_phi(s) + (1.0 - s) * log_y)
    log_pref = _LOG2 + 0.5 * log_y - _log_xi_2s(s)

    n_hi = policy.base_terms(s.imag, y)
    if n_hi > n_cap:
        raise TruncationError(f"truncation needs {n_hi} modes at y = {y:g}, above n_cap = {n_cap}")
    logs = _log_coefficients(y, s, 1, n_hi, log_pref)
    chunk = max(4, n_hi // 8)
    while True:
        mags = np.exp(logs.real)
        scale = abs(a0.to_complex()) + 2.0 * mags.sum()
        tail = mags[-min(chunk, mags.size):].max()
        if tail <= policy.threshold() * scale or mags.size >= n_cap:
            break
        n_new = min(n_cap, mags.size + chunk)
        logs = np.concatenate([logs, _log_coefficients(y, s, mags.size + 1, n_new, log_pref)])
    if mags.size >= n_cap and tail > policy.threshold() * scale:
        raise TruncationError(f"Fourier series not converged within n_cap = {n_cap} at y = {y:g}")
    coeffs = exp_log(logs[:-1]) if logs.size > 1 else np.zeros(0, dtype=complex)
    # first omitted term, doubled for the cosine pair and again for the tail
    err = 4.0 * float(np.exp(logs[-1].real))
    coeffs.setflags(write=False)
    return FourierRow(y, s, a0.to_complex(), coeffs, err)


def fourier_row(y: float, s, policy: TruncationPolicy = DEFAULT_POLICY) -> FourierRow:
    """All Fourier coefficients needed at height y under the policy."""
    y = float(y)
    if not y > 0:
        raise NumericDomainError(f"y must be positive, got {y}")
    s = as_complex(s)
    _check_s(s)
    return _fourier_row_cached(y, s, float(policy.digits), int(policy.n_cap))


def fourier_coefficients(y: float, s, policy: TruncationPolicy = DEFAULT_POLICY) -> list[FourierCoefficient]:
    row = fourier_row(y, s, policy)
    return [row.coefficient(n) for n in range(row.n_terms + 1)]


def eisenstein_row(xs, y: float, s, policy: TruncationPolicy = DEFAULT_POLICY) -> np.ndarray:
    """E(x + iy, s) for many x at one height (no reduction)."""
    return fourier_row(y, s, policy).evaluate(xs)


def eisenstein_fourier_detail(z, s, policy: TruncationPolicy = DEFAULT_POLICY) -> EisensteinValue:
    z_red, _ = reduce_to_fundamental(as_point(z))
    row = fourier_row(z_red.y, s, policy)
    value = complex(row.evaluate(np.array([z_red.x]))[0])
    return EisensteinValue(value, row.err_est, row.n_terms, z_red)


def eisenstein_fourier(z, s, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """E(z, s) from the truncated Fourier expansion at the reduced point."""
    return eisenstein_fourier_detail(z, s, policy).value


def residue_at_one(z, steps=(0.04, 0.02, 0.01, 0.005), policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Residue of E(z, s) at s = 1 (equal to 3/pi) by polynomial extrapolation of h E(z, 1 + h) to h = 0."""
    hs = np.asarray(steps, dtype=float)
    if hs.size < 2 or np.any(hs <= 0) or len(set(hs.tolist())) != hs.size:
        raise ValueError("steps must be at least two distinct positive numbers")
    vals = np.array([h * eisenstein_fourier(z, 1.0 + h, policy).real for h in hs])
    coeffs = np.linalg.solve(np.vander(hs, hs.size, increasing=True), vals)
    return float(coeffs[0])


# --------------------------------------------------------------------------
# lattice sum (oracle, Re s > 1)

_LATTICE_CUT = 45.0


def _tail_gamma(s: complex, a: np.ndarray) -> np.ndarray:
    """G_s(a) = int_1^inf exp(-a t) t^(s-1) dt for a > 0, vectorized in a.

    Gauss-Legendre in u = log t over [0, log(46 / a)], beyond which the
    integrand is below exp(-46).
    """
    a = np.asarray(a, dtype=float)
    top = np.log(np.maximum(46.0 / a, math.e))
    n = 64 + int(math.ceil(4.0 * abs(s.imag) * float(top.max()) / math.pi))
    x, w = np.polynomial.legendre.leggauss(n)
    u = 0.5 * top[:, None] * (x[None, :] + 1.0)
    wu = 0.5 * top[:, None] * w[None, :]
    integrand = np.exp(-a[:, None] * np.exp(u) + s * u)
    return (integrand * wu).sum(axis=1)


def _lattice_theta(z: HalfPlanePoint, s: complex) -> complex:
    """Epstein zeta of the form |m z + n|^2 / y by theta splitting."""
    x, y = z.x, z.y
    qmax = _LATTICE_CUT / math.pi
    m_max = int(math.floor(math.sqrt(qmax / y)))
    qs = []
    for m in range(-m_max, m_max + 1):
        # (m x + n)^2 + m^2 y^2 <= qmax y
        r2 = qmax * y - (m * y) ** 2
        if r2 < 0:
            continue
        r = math.sqrt(r2)
        ns = np.arange(math.ceil(-m * x - r), math.floor(-m * x + r) + 1)
        q = ((m * x + ns) ** 2 + (m * y) ** 2) / y
        if m == 0:
            q = q[ns != 0]
        qs.append(q)
    q = np.concatenate(qs)
    a = math.pi * q
    bracket = -1.0 / s - 1.0 / (1.0 - s) + complex(np.sum(_tail_gamma(s, a) + _tail_gamma(1.0 - s, a)))
    log_front = s * math.log(math.pi) - log_gamma_complex(s)
    epstein = cmath.exp(log_front) * bracket
    return epstein / (2.0 * zeta(2.0 * s))


def _lattice_direct(z: HalfPlanePoint, s: complex, c_max: int):
    """sum of (y / |c z + d|^2)^s over coprime (c, d), c <= c_max; with a tail bound."""
    x, y = z.x, z.y
    sigma = s.real
    total = cmath.exp(s * math.log(y))
    for c in range(1, c_max + 1):
        d_span = int(math.ceil(c * c_max + abs(c * x))) + 1
        d = np.arange(-d_span, d_span + 1)
        d = d[np.gcd(d, c) == 1]
        q = (c * x + d) ** 2 + (c * y) ** 2
        total += complex(np.sum(np.exp(s * (math.log(y) - np.log(q)))))
    # integral comparison for the omitted c > c_max and the omitted |d|
    tail = (y ** sigma) * (
        c_max ** (2.0 - 2.0 * sigma) * math.sqrt(math.pi) * math.gamma(sigma - 0.5) / math.gamma(sigma)
        / ((2.0 * sigma - 2.0) * y ** (2.0 * sigma - 1.0))
        + 2.0 * c_max * (c_max * c_max) ** (1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0)
    )
    return total, tail


def eisenstein_lattice(z, s, c_max: int = 200, method: str = "theta", tol: float = 1e-8) -> complex:
    """E(z, s) for Re s >= 1.05 from the defining lattice sum.

    ``method="theta"`` (default) splits the Epstein zeta function with the
    theta inversion, which converges like exp(-pi |m z + n|^2 / y);
    ``method="direct"`` sums coset representatives with c <= c_max and warns
    when the integral-comparison tail bound exceeds ``tol``.
    """
    s = as_complex(s)
    if s.real < LATTICE_MIN_SIGMA:
        raise NumericDomainError(f"lattice sum needs Re s >= {LATTICE_MIN_SIGMA}, got {s.real}")
    z_red, _ = reduce_to_fundamental(as_point(z))
    if method == "theta":
        return complex(_lattice_theta(z_red, s))
    if method == "direct":
        total, tail = _lattice_direct(z_red, s, int(c_max))
        if tail > tol * abs(total):
            warnings.warn(
                f"lattice tail bound {tail:.2e} exceeds tolerance at c_max = {c_max}",
                RuntimeWarning,
                stacklevel=2,
            )
        return complex(total)
    raise ValueError("method must be 'theta' or 'direct'")


def lattice_shell_sums(z, s, c_max: int) -> np.ndarray:
    """Cumulative direct lattice sums after including shells c = 0..c_max."""
    s = as_complex(s)
    z = as_point(z)
    out = [cmath.exp(s * math.log(z.y))]
    for c in range(1, c_max + 1):
        d_span = int(math.ceil(c * c_max + abs(c * z.x))) + 1
        d = np.arange(-d_span, d_span + 1)
        d = d[np.gcd(d, c) == 1]
        q = (c * z.x + d) ** 2 + (c * z.y) ** 2
        out.append(out[-1] + complex(np.sum(np.exp(s * (math.log(z.y) - np.log(q))))))
    return np.array(out)


# --------------------------------------------------------------------------
# residues and scattering states

RESIDUE_RADIUS = 1e-3
RESIDUE_NODES = 128
RESIDUE_POLICY = TruncationPolicy(digits=14.0)


def _contour_samples(func, center, radius, nodes):
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    pts = center + radius * np.exp(1j * theta)
    return np.array([func(p) for p in pts]) * (pts - center)


def contour_integral(func, center: complex, radius: float, nodes: int) -> complex:
    """(1 / 2 pi i) times the integral of func over |s - center| = radius (trapezoid)."""
    return complex(np.mean(_contour_samples(func, center, radius, nodes)))


def _converged_contour(func, center, radius, nodes, tol, max_doublings=4):
    if nodes < 64:
        raise ValueError("at least 64 nodes are required")
    samples = _contour_samples(func, center, radius, nodes)
    prev = complex(np.mean(samples))
    # a regular point integrates to zero, so the floor is relative to the integrand size
    floor = 1e-13 * float(np.max(np.abs(samples)))
    for _ in range(max_doublings):
        nodes *= 2
        cur = contour_integral(func, center, radius, nodes)
        if abs(cur - prev) <= max(tol * abs(cur), floor):
            return cur
        prev = cur
    raise AccuracyError(f"contour integral did not converge after {nodes} nodes")


def residue_at_pole(
    z, rho, radius: float = RESIDUE_RADIUS, nodes: int = RESIDUE_NODES, tol: float = 1e-9, validate: bool = True
) -> complex:
    """Residue of s -> E(z, s) at a scattering pole rho, by a circular contour."""
    from .zeros import nearest_pole

    rho = complex(rho)
    if validate:
        nearest_pole(rho)
    z = as_point(z)
    return _converged_contour(lambda s: eisenstein_fourier(z, s, RESIDUE_POLICY), rho, radius, nodes, tol)


def phi_residue(rho, radius: float = RESIDUE_RADIUS, nodes: int = RESIDUE_NODES, tol: float = 1e-9,
                validate: bool = True) -> complex:
    """Residue of phi at a scattering pole rho."""
    from .zeros import nearest_pole

    rho = complex(rho)
    if validate:
        nearest_pole(rho)
    return _converged_contour(lambda s: phi(s).to_complex(), rho, radius, nodes, tol)


def scattering_state(z, rho, method: str = "fast", radius: float = RESIDUE_RADIUS,
                     nodes: int = RESIDUE_NODES) -> complex:
    """u_rho(z) = res E(z, .) / res phi at rho.

    ``method="fast"`` evaluates the equal quantity E(z, 1 - rho);
    ``method="contour"`` computes both residues.
    """
    from .zeros import nearest_pole

    rho = nearest_pole(complex(rho)) if method == "contour" else complex(rho)
    if method == "fast":
        nearest_pole(rho)
        return eisenstein_fourier(z, 1.0 - rho, RESIDUE_POLICY)
    if method == "contour":
        res_e = residue_at_pole(z, rho, radius, nodes, validate=False)
        res_phi = phi_residue(rho, radius, nodes, validate=False)
        return res_e / res_phi
    raise ValueError("method must be 'fast' or 'contour'")


# --------------------------------------------------------------------------
# incomplete Eisenstein series and the test weights

# exp(-CUT) is the size of the largest neglected coset term
_COSET_CUT = 40.0


@dataclass(frozen=True)
class WeightFunction:
    """Built-in rapidly decaying weights.

    ``tag="exp_sym"`` with ``params=(lam,)`` is h(y) = exp(-(lam y + 1/(lam y))).
    """

    tag: str = "exp_sym"
    params: tuple = (1.0,)

    def __post_init__(self):
        if self.tag != "exp_sym":
            raise ValueError(f"unknown weight family {self.tag!r}")
        params = tuple(float(p) for p in self.params) or (1.0,)
        if len(params) != 1 or not params[0] > 0:
            raise ValueError("exp_sym takes one positive dilation parameter")
        object.__setattr__(self, "params", params)

    @classmethod
    def dilate(cls, lam: float) -> "WeightFunction":
        return cls("exp_sym", (lam,))

    @property
    def lam(self) -> float:
        return self.params[0]

    def __call__(self, y):
        v = self.lam * np.asarray(y, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            return np.exp(-(v + 1.0 / v))

    def support(self, cut: float = _COSET_CUT) -> tuple[float, float]:
        """Heights outside which h < exp(-cut)."""
        return 1.0 / (cut * self.lam), cut / self.lam


DEFAULT_WEIGHT = WeightFunction()


def mellin_transform(h: WeightFunction, s) -> complex:
    """H(s) = int_0^inf h(y) y^(-s) dy / y = 2 lam^s K_s(2)."""
    s = as_complex(s)
    k = bessel_k_scaled(s, 2.0)
    return (LogComplex.from_log(_LOG2 + s * math.log(h.lam)) * k).to_complex()


def _coset_sum(xs: np.ndarray, y: float, h: WeightFunction, c_max: int):
    lam = h.lam
    total = h(y) * np.ones_like(xs)
    span = math.sqrt(_COSET_CUT * lam * y)
    for c in range(1, c_max + 1):
        lo = np.floor((-c * xs - span).min())
        hi = np.ceil((-c * xs + span).max())
        d = np.arange(lo, hi + 1)
        d = d[np.gcd(d.astype(np.int64), c) == 1]
        q = (c * xs[:, None] + d[None, :]) ** 2 + (c * y) ** 2
        total = total + h(y / q).sum(axis=1)
    return total


def _coset_tail(y: float, h: WeightFunction, c_max: int) -> float:
    # omitted shells c > c_max: each <= (1 + sqrt(pi lam y)) exp(-c^2 y / lam)
    lam = h.lam
    c = np.arange(c_max + 1, c_max + 60)
    shell = (1.0 + math.sqrt(math.pi * lam * y)) * np.exp(-(c * c) * y / lam)
    return float(shell.sum()) + math.exp(-_COSET_CUT) * (2 * c_max + 1)


def incomplete_eisenstein_row(xs, y: float, h: WeightFunction = DEFAULT_WEIGHT, c_max: int | None = None,
                              tol: float = 1e-14):
    """F_h at x + iy for an array of x (points need not be reduced).

    Returns ``(values, tail_bound)``; raises when the tail bound exceeds tol.
    """
    xs = np.asarray(xs, dtype=float)
    y = float(y)
    if c_max is None:
        c_max = max(1, int(math.ceil(math.sqrt((_COSET_CUT + 5.0) * h.lam / y))))
    tail = _coset_tail(y, h, c_max)
    if tail > tol * max(1.0, float(h(y))):
        raise TruncationError(f"incomplete Eisenstein tail bound {tail:.2e} exceeds {tol:.1e} at c_max = {c_max}")
    return _coset_sum(xs, y, h, c_max), tail


def incomplete_eisenstein(z, h: WeightFunction = DEFAULT_WEIGHT, c_max: int | None = None,
                          tol: float = 1e-14) -> float:
    """F_h(z) = sum over cosets of h(Im gamma z), evaluated at the reduced point."""
    z_red, _ = reduce_to_fundamental(as_point(z))
    values, _ = incomplete_eisenstein_row(np.array([z_red.x]), z_red.y, h, c_max, tol)
    return float(values[0])
