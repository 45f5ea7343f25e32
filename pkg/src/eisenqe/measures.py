"""Quantum measures |E(z, s)|^2 dmu, their limit targets, and sweeps.

A sweep evaluates one measure per (region, t) cell.  Cells are independent
and may run on a thread pool; rows are always assembled in (region, t)
order so output is reproducible.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .domain import JordanRegion, fundamental_domain, mu_measure
from .eisenstein import (
    DEFAULT_POLICY,
    DEFAULT_WEIGHT,
    TruncationPolicy,
    WeightFunction,
    eisenstein_lattice,
    fourier_row,
    incomplete_eisenstein_row,
    log_phi,
)
from .errors import EisenQEError, NumericDomainError
from .numerics.quadrature import QuadratureSpec, integrate_1d, integrate_2d
from .numerics.types import as_complex

LUO_SARNAK_CONSTANT = 6.0 / math.pi
MEASURE_SPEC = QuadratureSpec(rel_tol=1e-8, abs_tol=1e-12)


# --------------------------------------------------------------------------
# schedules


@dataclass(frozen=True)
class SigmaSchedule:
    """sigma_t as a function of t.

    ``const``: sigma_t = sigma0 > 1/2.  ``critical``: sigma_t = 1/2.
    ``approach``: sigma_t = 1/2 + c / (log t)^p with c >= 0, p > 1.
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "params", params)
        if self.kind == "const":
            if len(params) != 1 or not params[0] > 0.5:
                raise ValueError("const schedule needs one sigma0 > 1/2")
        elif self.kind == "critical":
            if params:
                raise ValueError("critical schedule takes no parameters")
        elif self.kind == "approach":
            if len(params) != 2 or params[0] < 0 or not params[1] > 1:
                raise ValueError("approach schedule needs c >= 0 and p > 1")
        else:
            raise ValueError(f"unknown schedule kind {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "SigmaSchedule":
        """Parse ``const:s0``, ``critical`` or ``approach:c,p``."""
        kind, _, rest = text.strip().partition(":")
        try:
            params = tuple(float(v) for v in rest.split(",")) if rest.strip() else ()
        except ValueError:
            raise ValueError(f"schedule parameters in {text!r} must be numbers") from None
        return cls(kind.strip(), params)

    @property
    def is_critical(self) -> bool:
        return self.kind in ("critical", "approach")

    def sigma(self, t: float) -> float:
        if self.kind == "const":
            return self.params[0]
        if self.kind == "critical":
            return 0.5
        c, p = self.params
        return 0.5 + c / math.log(t) ** p

    def label(self) -> str:
        return self.kind + (":" + ",".join(repr(p) for p in self.params) if self.params else "")


# --------------------------------------------------------------------------
# measures


def _row_modes(s: complex, policy: TruncationPolicy):
    # |E|^2 carries x-modes up to twice the truncation of E
    return lambda y: 2 * fourier_row(y, s, policy).n_terms


def quantum_measure(region: JordanRegion, s, spec: QuadratureSpec = MEASURE_SPEC,
                    policy: TruncationPolicy = DEFAULT_POLICY):
    """mu_s(A) = int_A |E(z, s)|^2 dmu(z); returns ``(value, err_est)``."""
    if region.is_empty():
        return 0.0, 0.0
    s = as_complex(s)
    worst = [0.0]

    def integrand(xs, y):
        row = fourier_row(y, s, policy)
        worst[0] = max(worst[0], row.err_est)
        v = row.evaluate(xs)
        return (v * v.conjugate()).real

    value, err = integrate_2d(integrand, region, "hyperbolic", spec, _row_modes(s, policy), 2 * abs(s.imag) + 10)
    value = value.real
    area = mu_measure(region)
    delta = worst[0] * math.sqrt(area)
    err += 2.0 * math.sqrt(max(value, 0.0)) * delta + delta * delta
    return value, err


def _target_integrand(s2: float, policy, method: str):
    if method == "fourier":
        return lambda xs, y: fourier_row(y, s2, policy).evaluate(xs).real
    if method == "lattice":
        return lambda xs, y: np.array([eisenstein_lattice(complex(x, y), s2).real for x in xs])
    raise ValueError("method must be 'fourier' or 'lattice'")


def limit_target(region: JordanRegion, sigma_inf: float, spec: QuadratureSpec = MEASURE_SPEC,
                 policy: TruncationPolicy = DEFAULT_POLICY, method: str = "fourier") -> float:
    """int_A E(z, 2 sigma_inf) dmu(z) for sigma_inf > 1/2."""
    sigma_inf = float(sigma_inf)
    if not sigma_inf > 0.5:
        raise NumericDomainError(f"limit target needs sigma_inf > 1/2, got {sigma_inf}")
    if region.is_empty():
        return 0.0
    s2 = 2.0 * sigma_inf
    value, _ = integrate_2d(_target_integrand(s2, policy, method), region, "hyperbolic", spec,
                            _row_modes(complex(s2), policy))
    return value.real


def nu_measure(region: JordanRegion, s, sigma_inf: float, spec: QuadratureSpec = MEASURE_SPEC,
               policy: TruncationPolicy = DEFAULT_POLICY):
    """int_A |E(z, s)|^2 / E(z, 2 sigma_inf) dmu(z); returns ``(value, err_est)``."""
    sigma_inf = float(sigma_inf)
    if not sigma_inf > 0.5:
        raise NumericDomainError(f"nu measure needs sigma_inf > 1/2, got {sigma_inf}")
    if region.is_empty():
        return 0.0, 0.0
    s = as_complex(s)
    s2 = complex(2.0 * sigma_inf)

    def integrand(xs, y):
        v = fourier_row(y, s, policy).evaluate(xs)
        w = fourier_row(y, s2, policy).evaluate(xs).real
        return (v * v.conjugate()).real / w

    value, err = integrate_2d(integrand, region, "hyperbolic", spec, _row_modes(s, policy), 2 * abs(s.imag) + 10)
    return value.real, err


def luo_sarnak_ratio(region: JordanRegion, t: float, sigma_t: float = 0.5, spec: QuadratureSpec = MEASURE_SPEC,
                     policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """mu_{sigma_t + it}(A) / (mu(A) (6/pi) log t)."""
    if not t > math.e:
        raise NumericDomainError("the normalization needs t > e")
    value, _ = quantum_measure(region, complex(sigma_t, t), spec, policy)
    return value / (mu_measure(region) * LUO_SARNAK_CONSTANT * math.log(t))


# --------------------------------------------------------------------------
# unfolding identity


class ParsevalResult(NamedTuple):
    lhs: float
    rhs: float
    gap: float


def parseval_check(h: WeightFunction = DEFAULT_WEIGHT, s=complex(0.6, 10.0), n_max: int | None = None,
                   spec: QuadratureSpec = QuadratureSpec(rel_tol=1e-7, abs_tol=1e-12),
                   policy: TruncationPolicy = DEFAULT_POLICY) -> ParsevalResult:
    """Both sides of the unfolding identity

        int_X F_h |E(., s)|^2 dmu = int_0^inf h(y) sum_n |a_n(y, s)|^2 dy / y^2.

    The left side is a 2-D quadrature over the fundamental domain with F_h
    summed over cosets; the right side is a 1-D quadrature in log y of the
    Fourier coefficients (modes |n| <= n_max when given).
    """
    s = as_complex(s)
    region = fundamental_domain()

    def lhs_integrand(xs, y):
        fh, _ = incomplete_eisenstein_row(xs, y, h)
        if not np.any(fh):
            return np.zeros_like(xs)
        v = fourier_row(y, s, policy).evaluate(xs)
        return fh * (v * v.conjugate()).real

    lhs, _ = integrate_2d(lhs_integrand, region, "hyperbolic", spec, _row_modes(s, policy), 2 * abs(s.imag) + 10)

    def rhs_integrand(logs):
        out = np.empty(len(logs))
        for i, ly in enumerate(logs):
            y = math.exp(ly)
            row = fourier_row(y, s, policy)
            c = row.coeffs if n_max is None else row.coeffs[:n_max]
            total = abs(row.a0) ** 2 + 2.0 * float(np.sum(np.abs(c) ** 2))
            out[i] = float(h(y)) * total / y
        return out

    y_lo, y_hi = h.support()
    rhs, _ = integrate_1d(rhs_integrand, (math.log(y_lo), math.log(y_hi)), spec, smooth_ends=False)
    lhs, rhs = lhs.real, rhs.real
    return ParsevalResult(lhs, rhs, abs(lhs - rhs))


# --------------------------------------------------------------------------
# scattering-matrix diagnostic


def _dlog_phi(s: complex, step: float) -> complex:
    up, down = log_phi(s + step), log_phi(s - step)
    diff = up - down
    # remove any 2 pi i branch jump between the two logarithms
    diff = complex(diff.real, math.remainder(diff.imag, 2.0 * math.pi))
    return diff / (2.0 * step)


def _check_derivative_args(t, sigma, step):
    if abs(t) < 10:
        raise ValueError("phi'/phi diagnostic needs |t| >= 10")
    if sigma < 0.5:
        raise ValueError("phi'/phi diagnostic needs sigma >= 1/2")
    if not 0 < step <= 1e-4:
        raise ValueError("step must be in (0, 1e-4]")


def phi_log_derivative_one(t: float, sigma: float = 0.5, step: float = 1e-5) -> complex:
    """phi'/phi(sigma + it) by a central difference along sigma."""
    _check_derivative_args(t, sigma, step)
    return _dlog_phi(complex(sigma, t), step)


def phi_log_derivative(t: float, sigma: float = 0.5, step: float = 1e-5) -> complex:
    """phi'/phi(sigma + it) + phi'/phi(sigma - it), which behaves like -4 log t."""
    _check_derivative_args(t, sigma, step)
    return _dlog_phi(complex(sigma, t), step) + _dlog_phi(complex(sigma, -t), step)


def phi_log_derivative_ratio(t: float, sigma: float = 0.5, step: float = 1e-5) -> float:
    """phi_log_derivative / (-4 log t)."""
    return (phi_log_derivative(t, sigma, step) / (-4.0 * math.log(abs(t)))).real


# --------------------------------------------------------------------------
# sweeps

MODES = ("mu", "nu", "luo_sarnak", "scattering")
CSV_COLUMNS = ("mode", "t", "sigma", "region", "value", "err_est", "target", "ratio", "wall_ms")


@dataclass(frozen=True)
class SweepRow:
    mode: str
    t: float
    sigma: float
    region: str
    value: float
    err_est: float
    target: float
    ratio: float
    wall_ms: float = 0.0
    error: str = ""


@dataclass
class SweepResult:
    rows: list = field(default_factory=list)

    def ratios(self, region: str | None = None) -> list[float]:
        return [r.ratio for r in self.rows if region is None or r.region == region]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            writer.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_json(self) -> str:
        out = []
        for r in self.rows:
            d = {c: getattr(r, c) for c in CSV_COLUMNS}
            d = {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in d.items()}
            if r.error:
                d["error"] = r.error
            out.append(d)
        return json.dumps(out, indent=2) + "\n"


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _cell(mode, t, sigma, region: JordanRegion, spec, policy, s_override=None):
    area = mu_measure(region)
    if mode == "mu":
        value, err = quantum_measure(region, complex(sigma, t), spec, policy)
        target = limit_target(region, sigma, spec, policy)
    elif mode == "nu":
        value, err = nu_measure(region, complex(sigma, t), sigma, spec, policy)
        target = area
    elif mode == "luo_sarnak":
        value, err = quantum_measure(region, complex(sigma, t), spec, policy)
        target = area * LUO_SARNAK_CONSTANT * math.log(t)
    elif mode == "scattering":
        value, err = quantum_measure(region, s_override, spec, policy)
        # every tabulated zero has real part 1/2, so the limit is E(z, 3/2)
        target = limit_target(region, 0.75, spec, policy)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return value, err, target


def _run_cell(args):
    mode, t, sigma, region, spec, policy, s_override, timing = args
    start = time.perf_counter()
    try:
        value, err, target = _cell(mode, t, sigma, region, spec, policy, s_override)
        ratio = value / target if target else math.nan
        msg = ""
    except EisenQEError as exc:
        value = err = target = ratio = math.nan
        msg = f"{type(exc).__name__}: {exc}"
    wall = (time.perf_counter() - start) * 1e3 if timing else 0.0
    return SweepRow(mode, float(t), float(sigma), region.label(), float(value), float(err), float(target),
                    float(ratio), float(wall), msg)


def sweep(
    schedule: SigmaSchedule | None,
    t_list: Sequence[float],
    regions: Sequence[JordanRegion],
    mode: str = "mu",
    spec: QuadratureSpec = MEASURE_SPEC,
    policy: TruncationPolicy = DEFAULT_POLICY,
    poles: Sequence[complex] | None = None,
    threads: int = 1,
    timing: bool = False,
) -> SweepResult:
    """One row per (region, t); see the module docstring for ordering.

    In ``scattering`` mode ``poles`` supplies rho_n and each row is the
    measure of u_rho = E(., 1 - rho) (t is then Im(1 - rho)); ``t_list`` and
    ``schedule`` are ignored.  ``wall_ms`` is recorded only with ``timing``,
    so that default output is byte-reproducible.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    cells = []
    if mode == "scattering":
        if not poles:
            raise ValueError("scattering mode needs at least one pole")
        for region in regions:
            for rho in poles:
                s = 1.0 - complex(rho)
                cells.append((mode, s.imag, s.real, region, spec, policy, s, timing))
    else:
        if schedule is None:
            raise ValueError(f"mode {mode!r} needs a sigma schedule")
        if mode == "luo_sarnak" and not schedule.is_critical:
            raise ValueError("luo_sarnak mode needs a critical or approach schedule")
        if mode in ("mu", "nu") and schedule.kind != "const":
            raise ValueError(f"{mode} mode needs a const schedule with sigma0 > 1/2")
        t_list = [float(t) for t in t_list]
        if any(b <= a for a, b in zip(t_list[:-1], t_list[1:])):
            raise ValueError("t values must be strictly increasing")
        if mode == "luo_sarnak" and any(t <= math.e for t in t_list):
            raise ValueError("luo_sarnak mode needs t > e")
        for region in regions:
            for t in t_list:
                cells.append((mode, t, schedule.sigma(t), region, spec, policy, None, timing))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_run_cell, cells))
    else:
        rows = [_run_cell(c) for c in cells]
    return SweepResult(rows)
