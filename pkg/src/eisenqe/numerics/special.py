"""Gamma, Riemann zeta, completed zeta and divisor-power sums.

Gamma uses a Lanczos sum for |Im s| < 20 and the Stirling series beyond;
zeta uses Euler-Maclaurin summation with a certified remainder bound.
Both work in double precision; everything that can span e^{+-pi t/2}
is returned as a complex logarithm or a :class:`LogComplex`.
"""
from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli

from ..errors import AccuracyError, DivergentParametersError, PoleError
from .logcomplex import LogComplex
from .types import as_complex

_LOG_2PI = math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
# |Im z| at which log_gamma switches from Lanczos to Stirling.
STIRLING_SWITCH = 20.0
_STIRLING_TERMS = 10

_BERNOULLI = bernoulli(2 * 45 + 2)
# B_{2k} / (2k)! for k = 0..45
_B2K_FACT = np.array([_BERNOULLI[2 * k] / math.factorial(2 * k) for k in range(46)])
# B_{2k} / (2k (2k-1)) for the Stirling series, k = 1..
_STIRLING_COEF = [_BERNOULLI[2 * k] / (2 * k * (2 * k - 1)) for k in range(1, _STIRLING_TERMS + 1)]


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _log_gamma_lanczos(z: complex) -> complex:
    # valid for Re z >= 1/2
    z -= 1.0
    acc = _LANCZOS[0]
    for k in range(1, len(_LANCZOS)):
        acc += _LANCZOS[k] / (z + k)
    tt = z + LANCZOS_G + 0.5
    return 0.5 * _LOG_2PI + (z + 0.5) * cmath.log(tt) - tt + cmath.log(acc)


def _log_gamma_stirling(z: complex) -> complex:
    # valid for |z| >= 20 away from the negative real axis
    out = (z - 0.5) * cmath.log(z) - z + 0.5 * _LOG_2PI
    zinv = 1.0 / z
    zinv2 = zinv * zinv
    power = zinv
    for c in _STIRLING_COEF:
        out += c * power
        power *= zinv2
    return out


def _log_sin_pi(z: complex) -> complex:
    """log sin(pi z), stable for large |Im z| (branch irrelevant)."""
    if z.imag < 0:
        return _log_sin_pi(z.conjugate()).conjugate()
    w = math.pi * z
    return -1j * w + cmath.log(cmath.exp(2j * w) - 1.0) - cmath.log(2j)


def log_gamma_complex(z: complex) -> complex:
    """A complex logarithm of Gamma(z); the imaginary part is not reduced mod 2 pi."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z}")
    if z.real < 0.5:
        return _LOG_PI - _log_sin_pi(z) - log_gamma_complex(1.0 - z)
    if abs(z.imag) >= STIRLING_SWITCH:
        return _log_gamma_stirling(z)
    return _log_gamma_lanczos(z)


def log_gamma(s) -> LogComplex:
    """Gamma(s) as a LogComplex."""
    return LogComplex.from_log(log_gamma_complex(as_complex(s)))


def stirling_modulus_log(s) -> float:
    """log of sqrt(2 pi) |t|^(sigma - 1/2) exp(-pi |t| / 2)."""
    s = as_complex(s)
    t = abs(s.imag)
    return 0.5 * _LOG_2PI + (s.real - 0.5) * math.log(t) - 0.5 * math.pi * t


# --------------------------------------------------------------------------
# Riemann zeta by Euler-Maclaurin

ZETA_MAX_TERMS = 200_000


def _zeta_em(s: complex, N: int, tol: float):
    n = np.arange(1, N, dtype=float)
    partial = complex(np.exp(-s * np.log(n)).sum()) if N > 1 else 0j
    logN = math.log(N)
    n_pow = cmath.exp((1.0 - s) * logN)  # N^{1-s}
    head = partial + n_pow / (s - 1.0) + 0.5 * n_pow / N
    inv_n2 = 1.0 / (N * N)
    prod = s  # s (s+1) ... (s+2k-2)
    term_pow = n_pow * inv_n2  # N^{1-s-2k} for k = 1
    total = head
    for k in range(1, 45):
        if k > 1:
            prod *= (s + 2 * k - 3) * (s + 2 * k - 2)
            term_pow *= inv_n2
        term = _B2K_FACT[k] * prod * term_pow
        # bound on the remainder after including term k: next term times a factor
        nxt = abs(_B2K_FACT[k + 1] * prod * (s + 2 * k - 1) * (s + 2 * k) * term_pow * inv_n2)
        denom = s.real + 2 * k + 1
        total += term
        if denom > 0:
            bound = nxt * abs(s + 2 * k + 1) / denom
            if bound <= tol * max(1.0, abs(total)):
                return total, bound
        if abs(term) > abs(total) * 1e3 and k > 3:
            break
    return total, math.inf


def zeta(s, tol: float = 1e-15) -> complex:
    """Riemann zeta(s) by Euler-Maclaurin with a certified remainder.

    ``tol`` bounds the remainder relative to ``max(1, |zeta(s)|)``.
    """
    value, _ = zeta_with_bound(s, tol)
    return value


def zeta_with_bound(s, tol: float = 1e-15):
    """Return ``(zeta(s), remainder_bound)``."""
    s = as_complex(s)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if s.real < -0.5:
        return _zeta_reflected(s, tol)
    N = max(10, int(math.ceil((abs(s) + 40.0) / math.pi)))
    while N <= ZETA_MAX_TERMS:
        value, bound = _zeta_em(s, N, tol)
        if bound <= tol * max(1.0, abs(value)):
            return value, bound
        N *= 2
    raise AccuracyError(f"zeta({s}) cannot be certified to tol={tol}")


def _zeta_reflected(s: complex, tol: float):
    """zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s) zeta(1 - s) for Re s < -1/2.

    Left of the critical strip the Euler-Maclaurin sum cancels down to a
    small value near the trivial zeros; the sine factor carries that
    smallness exactly instead.
    """
    if s.imag == 0 and s.real == math.floor(s.real) and int(s.real) % 2 == 0:
        return 0j, 0.0
    partner, bound = zeta_with_bound(1.0 - s, tol)
    log_factor = s * math.log(2.0) + (s - 1.0) * _LOG_PI + _log_sin_pi(0.5 * s) + log_gamma_complex(1.0 - s)
    factor = cmath.exp(log_factor)
    return factor * partner, abs(factor) * bound


# --------------------------------------------------------------------------
# completed zeta


def log_xi_complex(s: complex, reflect: bool = True) -> complex:
    """Complex logarithm of xi(s) = pi^{-s/2} Gamma(s/2) zeta(s)."""
    s = complex(s)
    if s == 0 or s == 1:
        raise PoleError(f"xi has a pole at s = {s}")
    if reflect and s.real < 0.5:
        s = 1.0 - s
    z = zeta(s)
    if z == 0:
        return complex(-math.inf, 0.0)
    return -0.5 * s * _LOG_PI + log_gamma_complex(0.5 * s) + cmath.log(z)


def xi(s, reflect: bool = True) -> LogComplex:
    """Completed zeta xi(s) as a LogComplex.

    With ``reflect`` (default) points with Re s < 1/2 are evaluated through
    xi(1 - s), which keeps the Euler-Maclaurin sum in its well-conditioned
    half-plane.
    """
    return LogComplex.from_log(log_xi_complex(as_complex(s), reflect=reflect))


# --------------------------------------------------------------------------
# divisor sums


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple:
    """Prime factorization of n as a tuple of (p, k), by trial division."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def sigma_power(n: int, c) -> complex:
    """sigma_c(n) = sum of d^c over the divisors d of n."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    c = complex(c)
    total = 1.0 + 0j
    for p, k in factorize(n):
        pc = cmath.exp(c * math.log(p))
        acc = 1.0 + 0j
        term = 1.0 + 0j
        for _ in range(k):
            term *= pc
            acc += term
        total *= acc
    return total


@lru_cache(maxsize=256)
def sigma_table(N: int, c: complex) -> np.ndarray:
    """Array of sigma_c(n) for n = 1..N (read-only)."""
    out = np.array([sigma_power(n, c) for n in range(1, N + 1)], dtype=complex)
    out.setflags(write=False)
    return out


# --------------------------------------------------------------------------
# Ramanujan's identity for sum sigma_a(n) sigma_b(n) n^{-s}


def _check_ramanujan(s: complex, a: complex, b: complex):
    need = 1.0 + max(a.real, 0.0) + max(b.real, 0.0)
    if s.real <= need:
        raise DivergentParametersError(
            f"sum sigma_a sigma_b n^-s diverges: Re s = {s.real} <= {need}"
        )


def ramanujan_lhs(s, a, b, N: int) -> complex:
    """Partial sum over n <= N of sigma_a(n) sigma_b(n) / n^s."""
    s, a, b = complex(s), complex(a), complex(b)
    _check_ramanujan(s, a, b)
    if N < 1:
        raise ValueError("N must be >= 1")
    n = np.arange(1, N + 1, dtype=float)
    sa = sigma_table(N, a)
    sb = sa if b == a else sigma_table(N, b)
    return complex(np.sum(sa * sb * np.exp(-s * np.log(n))))


def ramanujan_rhs(s, a, b) -> complex:
    """zeta(s) zeta(s-a) zeta(s-b) zeta(s-a-b) / zeta(2s-a-b)."""
    s, a, b = complex(s), complex(a), complex(b)
    _check_ramanujan(s, a, b)
    return zeta(s) * zeta(s - a) * zeta(s - b) * zeta(s - a - b) / zeta(2 * s - a - b)
