"""Identity checks run by ``eisenqe verify``.

Each check returns a :class:`CheckResult` with the measured residual and
the tolerance it was held to.  Random parameters come from one seeded
generator, so a suite run is reproducible.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .domain import fundamental_domain, mu_measure
from .eisenstein import (
    eisenstein_fourier,
    eisenstein_lattice,
    phi,
    scattering_state,
)
from .measures import parseval_check, phi_log_derivative_ratio
from .numerics.logcomplex import LogComplex
from .numerics.bessel import bessel_moment_closed_form, bessel_moment_quadrature
from .numerics.special import log_xi_complex, ramanujan_lhs, ramanujan_rhs
from .zeros import default_table, scattering_poles


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""

    def as_dict(self):
        return asdict(self)


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _random_reduced_z(rng, count):
    out = []
    while len(out) < count:
        x, y = rng.uniform(-0.5, 0.5), rng.uniform(0.8, 2.5)
        if x * x + y * y >= 1.0:
            out.append(complex(x, y))
    return out


def check_functional_equation(rng, heights=(10.0, 40.0), points=3, tol=1e-8) -> CheckResult:
    worst = 0.0
    svals = [complex(0.5, t) for t in heights] + [complex(0.7, 30.0)]
    for s in svals:
        for z in _random_reduced_z(rng, points):
            lhs = eisenstein_fourier(z, s)
            rhs = (phi(s) * LogComplex.from_complex(eisenstein_fourier(z, 1.0 - s))).to_complex()
            worst = max(worst, _rel(lhs, rhs))
    return CheckResult("functional_equation", bool(worst < tol), worst, tol, f"t in {list(heights)} and s = 0.7+30i")


def _phi_direct(s: complex) -> complex:
    """phi(s) from unreflected xi values, independent of the library path."""
    s = complex(s)
    return cmath.exp(log_xi_complex(2.0 - 2.0 * s, reflect=False) - log_xi_complex(2.0 * s, reflect=False))


def check_phi_unitarity(rng, tol=1e-10) -> CheckResult:
    worst = 0.0
    for t in (10.0, 50.0, 100.0):
        worst = max(worst, abs(abs(_phi_direct(complex(0.5, t))) - 1.0))
    for _ in range(10):
        s = complex(rng.uniform(-1.0, 2.0), rng.uniform(-60.0, 60.0))
        worst = max(worst, abs(_phi_direct(s) * _phi_direct(1.0 - s) - 1.0))
        worst = max(worst, _rel(_phi_direct(s), phi(s).to_complex()))
    return CheckResult("phi_unitarity", bool(worst < tol), worst, tol, "unreflected xi on both sides")


def check_xi_symmetry(rng, count=100, tol=1e-12) -> CheckResult:
    worst = 0.0
    for _ in range(count):
        s = complex(rng.uniform(-2.0, 3.0), rng.uniform(-100.0, 100.0))
        a = log_xi_complex(s, reflect=False)
        b = log_xi_complex(1.0 - s, reflect=False)
        d = a - b
        worst = max(worst, abs(complex(d.real, math.remainder(d.imag, 2 * math.pi))))
    return CheckResult("xi_symmetry", bool(worst < tol), worst, tol, f"{count} random s, direct evaluation on both sides")


def check_dual_method(rng, count=10, tol=1e-8) -> CheckResult:
    worst = 0.0
    for _ in range(count):
        z = complex(rng.uniform(-2.0, 2.0), rng.uniform(0.3, 3.0))
        s = complex(rng.uniform(1.1, 2.0), rng.uniform(-5.0, 5.0))
        worst = max(worst, _rel(eisenstein_fourier(z, s), eisenstein_lattice(z, s)))
    return CheckResult("dual_method", bool(worst < tol), worst, tol, f"{count} random (z, s)")


def check_ramanujan(rng, tol=1e-3) -> CheckResult:
    worst = 0.0
    a = complex(-0.5, 1.0)
    for s, aa, bb in ((3.0, -0.4, -0.4), (complex(4.0, 2.0), a, a.conjugate())):
        worst = max(worst, _rel(ramanujan_lhs(s, aa, bb, 10_000), ramanujan_rhs(s, aa, bb)))
    return CheckResult("ramanujan", bool(worst < tol), worst, tol, "N = 10^4")


def random_moment_triple(rng):
    """(s, mu, nu) with |Im mu|, |Im nu| <= 20 and comparable imaginary parts."""
    a = rng.uniform(-19.0, 19.0)
    b = float(np.clip(rng.choice([-1.0, 1.0]) * a + rng.uniform(-1.0, 1.0), -20.0, 20.0))
    mu = complex(rng.uniform(-0.3, 0.3), a)
    nu = complex(rng.uniform(-0.3, 0.3), b)
    s = complex(abs(mu.real) + abs(nu.real) + rng.uniform(0.8, 2.0), rng.uniform(-3.0, 3.0))
    return s, mu, nu


def check_bessel_moment(rng, count=5, tol=1e-6) -> CheckResult:
    worst = 0.0
    triples = [(1.4, complex(0.1, 5.0), complex(0.1, -5.0))] + [random_moment_triple(rng) for _ in range(count - 1)]
    for s, mu, nu in triples:
        lhs, _ = bessel_moment_quadrature(s, mu, nu)
        worst = max(worst, _rel(lhs, bessel_moment_closed_form(s, mu, nu)))
    return CheckResult("bessel_moment", bool(worst < tol), worst, tol, f"{len(triples)} triples")


def check_parseval(rng, tol=1e-4) -> CheckResult:
    r = parseval_check()
    rel = r.gap / abs(r.rhs)
    return CheckResult("parseval_unfolding", bool(rel < tol), rel, tol, f"lhs={r.lhs!r} rhs={r.rhs!r}")


def check_residue_identity(rng, tol=1e-6) -> CheckResult:
    rho = scattering_poles(default_table(), 1)[0]
    worst = 0.0
    for z in (1j, complex(0.3, 1.5)):
        fast = scattering_state(z, rho, "fast")
        slow = scattering_state(z, rho, "contour")
        worst = max(worst, _rel(slow, fast))
    return CheckResult("residue_identity", bool(worst < tol), worst, tol, "first zeta zero")


def check_volume(rng, tol=1e-6) -> CheckResult:
    err = abs(mu_measure(fundamental_domain()) - math.pi / 3)
    return CheckResult("fundamental_domain_volume", bool(err < tol), err, tol)


def check_phi_log_derivative(rng, lo=0.7, hi=1.3) -> CheckResult:
    r = phi_log_derivative_ratio(500.0)
    return CheckResult("phi_log_derivative_t500", bool(lo <= r <= hi), float(abs(r - 1.0)), 0.3, f"ratio={r!r}")


FAST: tuple[Callable, ...] = (
    check_xi_symmetry,
    check_phi_unitarity,
    check_functional_equation,
    check_dual_method,
    check_ramanujan,
    check_bessel_moment,
    check_parseval,
    check_residue_identity,
    check_volume,
)


def run_suite(suite: str = "fast", seed: int = 0) -> list[CheckResult]:
    """Run the named suite; ``full`` adds t = 100 and the phi'/phi trend."""
    if suite not in ("fast", "full"):
        raise ValueError("suite must be 'fast' or 'full'")
    rng = np.random.default_rng(seed)
    results = []
    for check in FAST:
        if suite == "full" and check is check_functional_equation:
            results.append(check(rng, heights=(10.0, 40.0, 100.0), points=5))
        elif suite == "full" and check is check_dual_method:
            results.append(check(rng, count=30))
        elif suite == "full" and check is check_bessel_moment:
            results.append(check(rng, count=20))
        else:
            results.append(check(rng))
    if suite == "full":
        results.append(check_phi_log_derivative(rng))
    return results
