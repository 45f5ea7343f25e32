"""Nontrivial zeros of the Riemann zeta function and the scattering poles.

On the critical line Z(tau) = xi(1/2 + i tau) is real, so zeros are found by
sign changes.  The magnitude of xi(1/2 + i tau) decays like exp(-pi tau / 4);
refinement works with the rescaled real function
exp(pi tau / 4) xi(1/2 + i tau), which grows only polynomially.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .errors import NoSignChangeError, ZeroTableError
from .numerics.special import log_xi_complex, zeta

SCAN_HALF_WIDTH = 0.5
SCAN_POINTS = 41
REFINE_TOL = 1e-12


def critical_xi(tau: float) -> float:
    """Real-valued, magnitude-normalized xi(1/2 + i tau).

    The factor exp(pi tau / 4) removes the exponential decay of the Gamma
    factor; the sign is that of xi(1/2 + i tau), which is real.
    """
    lv = log_xi_complex(complex(0.5, tau))
    if lv.real == -math.inf:
        return 0.0
    scaled = complex(math.exp(lv.real + 0.25 * math.pi * abs(tau)), 0.0)
    # xi is real on the line, so its phase is 0 or pi up to rounding
    return scaled.real * math.cos(lv.imag)


def _scan(tau_approx: float, half_width: float, points: int):
    grid = np.linspace(tau_approx - half_width, tau_approx + half_width, points)
    vals = np.array([critical_xi(t) for t in grid])
    flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)[0]
    return grid, vals, flips


def refine_zero(tau_approx: float, half_width: float = SCAN_HALF_WIDTH) -> float:
    """Refine a zero of xi(1/2 + i tau) near ``tau_approx`` to |d tau| < 1e-10.

    Scans for sign changes within +-half_width, takes the crossing nearest
    to ``tau_approx``, and solves with Brent's method.  A crossing whose
    slope is indistinguishable from zero is rejected as non-simple.
    """
    tau_approx = float(tau_approx)
    grid, vals, flips = _scan(tau_approx, half_width, SCAN_POINTS)
    if flips.size == 0:
        raise NoSignChangeError(
            f"no sign change of xi(1/2 + i tau) within +-{half_width} of tau = {tau_approx}"
        )
    if flips.size > 1:
        warnings.warn(
            f"{flips.size} sign changes near tau = {tau_approx}; using the nearest",
            RuntimeWarning,
            stacklevel=2,
        )
    centers = 0.5 * (grid[flips] + grid[flips + 1])
    k = flips[int(np.argmin(np.abs(centers - tau_approx)))]
    a, b = grid[k], grid[k + 1]
    if vals[k] == 0.0:
        root = a
    elif vals[k + 1] == 0.0:
        root = b
    else:
        root = brentq(critical_xi, a, b, xtol=REFINE_TOL, rtol=4 * np.finfo(float).eps, maxiter=200)
    h = 1e-4
    slope = (critical_xi(root + h) - critical_xi(root - h)) / (2 * h)
    scale = max(abs(vals[k]), abs(vals[k + 1])) / (b - a)
    if abs(slope) < 1e-6 * scale:
        raise ZeroTableError(f"zero near tau = {root} does not look simple (slope {slope:.3e})")
    return float(root)


@dataclass(frozen=True)
class ZeroTable:
    """Ordered imaginary parts of zeta zeros 1/2 + i tau."""

    taus: tuple = ()
    source: str = ""
    refined: tuple = field(default=())

    def __post_init__(self):
        taus = tuple(float(t) for t in self.taus)
        object.__setattr__(self, "taus", taus)
        refined = tuple(bool(r) for r in self.refined) or (False,) * len(taus)
        if len(refined) != len(taus):
            raise ZeroTableError("refined flags must match the zeros")
        object.__setattr__(self, "refined", refined)
        for i, t in enumerate(taus):
            if not t > 13.0:
                raise ZeroTableError(f"zero {t} is below the first zeta zero")
            if i and t <= taus[i - 1]:
                raise ZeroTableError(f"zeros must be strictly increasing: {taus[i - 1]} then {t}")

    def __len__(self):
        return len(self.taus)

    def refine(self) -> "ZeroTable":
        taus = tuple(t if r else refine_zero(t) for t, r in zip(self.taus, self.refined))
        return ZeroTable(taus, self.source, (True,) * len(taus))


def parse_zeros(text: str, source: str = "<string>") -> ZeroTable:
    taus = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = float(line.split()[0])
        except ValueError:
            raise ZeroTableError(f"{source}:{lineno}: cannot parse {line!r} as a number") from None
        if not math.isfinite(value) or value <= 0:
            raise ZeroTableError(f"{source}:{lineno}: zeros must be positive decimals, got {line!r}")
        taus.append((value, lineno))
    ordered = sorted(taus)
    for (a, la), (b, lb) in zip(ordered[:-1], ordered[1:]):
        if a == b:
            raise ZeroTableError(f"{source}: duplicate zero {a} on lines {la} and {lb}")
    return ZeroTable(tuple(v for v, _ in ordered), source)


def load_zeros(path) -> ZeroTable:
    """Read a zero table: one decimal per line, '#' starts a comment line."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ZeroTableError(f"cannot read zero table {path}: {exc}") from exc
    return parse_zeros(text, str(path))


def bundled_zeros() -> ZeroTable:
    """The packaged seed table (first ten zeros, unrefined)."""
    text = resources.files("eisenqe").joinpath("data/zeros.txt").read_text()
    return parse_zeros(text, "eisenqe:data/zeros.txt")


@lru_cache(maxsize=1)
def default_table() -> ZeroTable:
    """The packaged seed table, refined once per process."""
    return bundled_zeros().refine()


def scattering_poles(table: ZeroTable, count: int) -> list[complex]:
    """rho_n = (1/2 + i tau_n) / 2 for the first ``count`` zeros."""
    if count < 0:
        raise ValueError("count must be >= 0")
    if count > len(table):
        raise ZeroTableError(f"requested {count} poles but the table has {len(table)} zeros")
    out = []
    for tau, ok in zip(table.taus[:count], table.refined[:count]):
        if not ok:
            raise ZeroTableError(f"zero {tau} has not been refined")
        out.append(complex(0.25, 0.5 * tau))
    return out


def nearest_pole(rho: complex, table: ZeroTable | None = None, tol: float = 1e-8) -> complex:
    """Validate that rho is half a tabulated zero; returns the refined pole."""
    table = table or default_table()
    rho = complex(rho)
    tau = 2.0 * rho.imag
    if abs(rho.real - 0.25) <= tol and table.taus:
        taus = np.asarray(table.taus)
        i = int(np.argmin(np.abs(taus - abs(tau))))
        if abs(abs(tau) - taus[i]) <= 2 * tol:
            return complex(0.25, math.copysign(0.5 * taus[i], tau))
    # not tabulated: accept if refinement lands on it
    if abs(rho.real - 0.25) <= tol and abs(tau) > 13:
        try:
            t = refine_zero(abs(tau), 0.05)
        except NoSignChangeError:
            t = math.nan
        if abs(t - abs(tau)) <= 2 * tol:
            return complex(0.25, math.copysign(0.5 * t, tau))
    raise ZeroTableError(f"rho = {rho} is not within {tol} of half a zeta zero")


def zeta_zero_residual(tau: float) -> float:
    """|zeta(1/2 + i tau)| / |zeta(1/2 + i (tau + 0.1))|."""
    return abs(zeta(complex(0.5, tau))) / abs(zeta(complex(0.5, tau + 0.1)))
