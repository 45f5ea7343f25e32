"""Geometry of the modular surface.

Points of the upper half-plane, the Moebius action of PSL(2, Z), Gauss
reduction to the standard fundamental domain, coset representatives of
the stabilizer of the cusp, and regions built from axis-aligned rectangles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, Sequence

import numpy as np

from .errors import NumericDomainError
from .numerics.quadrature import QuadratureSpec, RowPiece, integrate_2d

SQRT3_HALF = 0.5 * math.sqrt(3.0)
REDUCTION_CAP = 10_000


@dataclass(frozen=True)
class HalfPlanePoint:
    """z = x + i y with y > 0."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise NumericDomainError("point coordinates must be finite")
        if not self.y > 0:
            raise NumericDomainError(f"point must lie in the upper half-plane (y > 0), got y = {self.y}")

    @classmethod
    def from_complex(cls, z: complex) -> "HalfPlanePoint":
        z = complex(z)
        return cls(z.real, z.imag)

    def __complex__(self) -> complex:
        return complex(self.x, self.y)


def as_point(z) -> HalfPlanePoint:
    if isinstance(z, HalfPlanePoint):
        return z
    return HalfPlanePoint.from_complex(z)


@dataclass(frozen=True)
class MoebiusElement:
    """Element of PSL(2, Z); g and -g compare equal."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant must be 1, got {self.a * self.d - self.b * self.c}")

    def _canonical(self):
        first = next((v for v in (self.c, self.d) if v != 0))
        return (self.a, self.b, self.c, self.d) if first > 0 else (-self.a, -self.b, -self.c, -self.d)

    def __eq__(self, other):
        if not isinstance(other, MoebiusElement):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self):
        return hash(self._canonical())

    def __matmul__(self, other: "MoebiusElement") -> "MoebiusElement":
        return MoebiusElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusElement":
        return MoebiusElement(self.d, -self.b, -self.c, self.a)

    @classmethod
    def identity(cls) -> "MoebiusElement":
        return cls(1, 0, 0, 1)

    @classmethod
    def translation(cls, k: int) -> "MoebiusElement":
        return cls(1, int(k), 0, 1)

    @classmethod
    def inversion(cls) -> "MoebiusElement":
        return cls(0, -1, 1, 0)


def apply_moebius(g: MoebiusElement, z) -> HalfPlanePoint:
    """(a z + b) / (c z + d)."""
    z = as_point(z)
    zc = complex(z)
    w = (g.a * zc + g.b) / (g.c * zc + g.d)
    # Im w computed directly keeps y > 0 even when the division loses digits
    return HalfPlanePoint(w.real, im_moebius(g, z))


def im_moebius(g: MoebiusElement, z) -> float:
    """Im(g z) = y / |c z + d|^2."""
    z = as_point(z)
    cx = g.c * z.x + g.d
    cy = g.c * z.y
    return z.y / (cx * cx + cy * cy)


def in_fundamental_domain(z, tol: float = 1e-12) -> bool:
    z = as_point(z)
    return abs(z.x) <= 0.5 + tol and z.x * z.x + z.y * z.y >= 1.0 - tol


def reduce_to_fundamental(z) -> tuple[HalfPlanePoint, MoebiusElement]:
    """Return ``(z', g)`` with ``z' = g z`` in the standard fundamental domain."""
    z = as_point(z)
    x, y = z.x, z.y
    g = MoebiusElement.identity()
    for _ in range(REDUCTION_CAP):
        k = math.floor(x + 0.5)
        if k != 0:
            x -= k
            g = MoebiusElement.translation(-k) @ g
        r2 = x * x + y * y
        if r2 >= 1.0:
            break
        x, y = -x / r2, y / r2
        g = MoebiusElement.inversion() @ g
    else:
        raise NumericDomainError("reduction did not terminate within the iteration cap")
    # the translate step leaves x in [-1/2, 1/2); keep the boundary as is
    return HalfPlanePoint(x, y), g


def coset_representatives(c_max: int, d_bound: int | None = None) -> list[tuple[int, int]]:
    """Coprime pairs (c, d) labelling cosets of the cusp stabilizer.

    Returns (0, 1) and every (c, d) with 1 <= c <= c_max, |d| <= d_bound,
    gcd(c, d) = 1.  ``d_bound`` defaults to ``c_max``.
    """
    if c_max < 1:
        raise ValueError("c_max must be >= 1")
    d_bound = c_max if d_bound is None else int(d_bound)
    out = [(0, 1)]
    for c in range(1, c_max + 1):
        for d in range(-d_bound, d_bound + 1):
            if gcd(c, d) == 1:
                out.append((c, d))
    return out


def max_im_over_cosets(z, c_max: int, d_bound: int) -> float:
    """max of y / |c z + d|^2 over the enumerated coset representatives."""
    z = as_point(z)
    pairs = np.array(coset_representatives(c_max, d_bound), dtype=float)
    c, d = pairs[:, 0], pairs[:, 1]
    return float(np.max(z.y / ((c * z.x + d) ** 2 + (c * z.y) ** 2)))


# --------------------------------------------------------------------------
# regions


Rectangle = tuple  # (x_lo, x_hi, y_lo, y_hi)


def _log_rows(y_lo, y_hi):
    def to_y(p):
        y = np.exp(p)
        return y, y

    return math.log(y_lo), math.log(y_hi), to_y


def _cusp_rows(y_lo):
    # r = 1 / y on (0, 1 / y_lo]
    def to_y(p):
        return 1.0 / p, 1.0 / (p * p)

    return 0.0, 1.0 / y_lo, to_y


def _rect_rows(x_lo, x_hi, y_lo, y_hi) -> RowPiece:
    if math.isinf(y_hi):
        p_lo, p_hi, to_y = _cusp_rows(y_lo)
    else:
        p_lo, p_hi, to_y = _log_rows(y_lo, y_hi)
    segs = [(x_lo, x_hi)]
    return RowPiece(p_lo, p_hi, to_y, lambda y, s=segs: s)


def _arc_rows(x_lo, x_hi, y_lo, y_hi) -> RowPiece:
    """Rows under the unit circle, parametrized by y = cos(theta)."""
    th_lo, th_hi = math.acos(min(1.0, y_hi)), math.acos(y_lo)

    def to_y(p):
        return np.cos(p), np.sin(p)

    def segments(y):
        s = math.sqrt(max(0.0, 1.0 - y * y))
        out = []
        for a, b in ((-0.5, -s), (s, 0.5)):
            lo, hi = max(a, x_lo), min(b, x_hi)
            if hi > lo:
                out.append((lo, hi))
        return out

    breaks = tuple(math.asin(abs(v)) for v in (x_lo, x_hi) if 0.0 < abs(v) < 0.5)
    return RowPiece(th_lo, th_hi, to_y, segments, breaks)


@dataclass(frozen=True)
class JordanRegion:
    """A finite union of axis-aligned rectangles (x_lo, x_hi, y_lo, y_hi).

    With ``clip_to_fundamental`` the rectangles are intersected with the
    standard fundamental domain and y_hi may be infinite.
    ``max_fourier_mode_hint`` is the largest x-mode integrands are expected
    to carry; it sizes the x panels in ``integrate_2d``.
    """

    rectangles: tuple = ()
    max_fourier_mode_hint: int = 1
    clip_to_fundamental: bool = False
    name: str = field(default="", compare=False)

    def __post_init__(self):
        rects = tuple(tuple(float(v) for v in r) for r in self.rectangles)
        object.__setattr__(self, "rectangles", rects)
        for r in rects:
            if len(r) != 4:
                raise ValueError("rectangles are (x_lo, x_hi, y_lo, y_hi)")
            x_lo, x_hi, y_lo, y_hi = r
            if not (x_lo < x_hi and 0 < y_lo < y_hi):
                raise ValueError(f"invalid rectangle {r}: need x_lo < x_hi and 0 < y_lo < y_hi")
            if math.isinf(y_hi) and not self.clip_to_fundamental:
                raise ValueError("unbounded rectangles are only allowed when clipped to the fundamental domain")
        for i in range(len(rects)):
            for j in range(i + 1, len(rects)):
                a, b = rects[i], rects[j]
                if min(a[1], b[1]) > max(a[0], b[0]) and min(a[3], b[3]) > max(a[2], b[2]):
                    raise ValueError(f"rectangles {a} and {b} overlap")
        if self.max_fourier_mode_hint < 0:
            raise ValueError("max_fourier_mode_hint must be >= 0")

    @property
    def y_min(self) -> float:
        return min((r[2] for r in self.rectangles), default=math.inf)

    def is_empty(self) -> bool:
        return not self.rectangles

    def with_hint(self, modes: int) -> "JordanRegion":
        return JordanRegion(self.rectangles, int(modes), self.clip_to_fundamental, self.name)

    def row_pieces(self) -> Iterator[RowPiece]:
        for x_lo, x_hi, y_lo, y_hi in self.rectangles:
            if not self.clip_to_fundamental:
                yield _rect_rows(x_lo, x_hi, y_lo, y_hi)
                continue
            x_lo, x_hi = max(x_lo, -0.5), min(x_hi, 0.5)
            if x_hi <= x_lo:
                continue
            lo = max(y_lo, SQRT3_HALF)
            if lo < min(y_hi, 1.0):
                yield _arc_rows(x_lo, x_hi, lo, min(y_hi, 1.0))
            lo = max(y_lo, 1.0)
            if lo < y_hi:
                yield _rect_rows(x_lo, x_hi, lo, y_hi)

    def label(self) -> str:
        if self.name:
            return self.name
        return ";".join(",".join(_fmt(v) for v in r) for r in self.rectangles)


def _fmt(v: float) -> str:
    return repr(v) if not math.isinf(v) else "inf"


def fundamental_domain(y_max: float = math.inf, max_fourier_mode_hint: int = 1) -> JordanRegion:
    """The standard fundamental domain, truncated at y_max."""
    return JordanRegion(((-0.5, 0.5, SQRT3_HALF, y_max),), max_fourier_mode_hint, True, "F")


def mu_measure(region: JordanRegion, spec: QuadratureSpec | None = None) -> float:
    """Hyperbolic area of the region (exact for unclipped rectangles)."""
    if not region.clip_to_fundamental:
        return float(sum((x1 - x0) * (1.0 / y0 - 1.0 / y1) for x0, x1, y0, y1 in region.rectangles))
    value, _ = integrate_2d(lambda xs, y: np.ones_like(xs), region, "hyperbolic", spec)
    return value.real


def staircase_cover(k: int, y_max: float = 1e9) -> JordanRegion:
    """Rectangles covering the fundamental domain up to height y_max.

    The arc |z| = 1 over |x| <= 1/2 is boxed by k columns on each side; the
    measure exceeds pi/3 - 1/y_max by a right-endpoint Riemann-sum error
    that is a smooth series in 1/k, so it extrapolates cleanly.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    rects = [(-0.5, 0.5, 1.0, y_max)]
    edges = np.linspace(0.0, 0.5, k + 1)
    for a, b in zip(edges[:-1], edges[1:]):
        # lowest point of the arc over [a, b] is at x = b
        y0 = math.sqrt(1.0 - b * b)
        rects.append((a, b, y0, 1.0))
        rects.append((-b, -a, y0, 1.0))
    return JordanRegion(tuple(rects), 1, False, f"cover{k}")


def parse_region(text: str, max_fourier_mode_hint: int = 1) -> JordanRegion:
    """Parse ``"x0,x1,y0,y1[;x0,x1,y0,y1...]"``."""
    rects = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 4:
            raise ValueError(f"region rectangle {chunk!r} needs four numbers x0,x1,y0,y1")
        try:
            rects.append(tuple(float(p) for p in parts))
        except ValueError as exc:
            raise ValueError(f"region rectangle {chunk!r} is not numeric") from exc
    if not rects:
        raise ValueError("region must contain at least one rectangle")
    return JordanRegion(tuple(rects), max_fourier_mode_hint)


def split_rectangle(region: JordanRegion, axis: str = "x") -> tuple[JordanRegion, JordanRegion]:
    """Split a single-rectangle region into two halves along an axis."""
    if len(region.rectangles) != 1:
        raise ValueError("split_rectangle expects a single rectangle")
    x0, x1, y0, y1 = region.rectangles[0]
    if axis == "x":
        xm = 0.5 * (x0 + x1)
        parts = ((x0, xm, y0, y1),), ((xm, x1, y0, y1),)
    else:
        ym = math.sqrt(y0 * y1)
        parts = ((x0, x1, y0, ym),), ((x0, x1, ym, y1),)
    hint = region.max_fourier_mode_hint
    return JordanRegion(parts[0], hint), JordanRegion(parts[1], hint)


def union(regions: Sequence[JordanRegion]) -> JordanRegion:
    rects = tuple(r for reg in regions for r in reg.rectangles)
    hint = max((reg.max_fourier_mode_hint for reg in regions), default=1)
    return JordanRegion(rects, hint)
