"""Deterministic quadrature: adaptive Gauss-Legendre panels and exp-sinh.

``integrate_2d`` works row by row: the outer (y) variable is integrated
adaptively, and every outer node evaluates the integrand on a whole row of
x nodes in one call ``f(xs, y)``.  The x panels are sized from the largest
Fourier mode the caller declares, so a row is never under-resolved even
when the adaptive error estimate would be fooled by aliasing.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from ..errors import QuadratureError

# minimum Gauss-Legendre nodes per period of the highest declared x-mode
NODES_PER_PERIOD = 10
MAX_PANELS = 20000


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and rule size shared by the 1-D and 2-D integrators."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    max_depth: int = 40
    base_rule: int = 16

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.base_rule < 2:
            raise ValueError("base_rule must be >= 2")

    def target(self, value) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def refined(self, factor: float = 4.0) -> "QuadratureSpec":
        """Same spec with both tolerances divided by ``factor``."""
        return QuadratureSpec(self.rel_tol / factor, self.abs_tol / factor, self.max_depth + 2, self.base_rule)


@lru_cache(maxsize=16)
def gauss_legendre(n: int):
    """Nodes and weights on [-1, 1] (read-only arrays)."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


# --------------------------------------------------------------------------
# adaptive engine on an interval, batched integrand g(points) -> values


class _Panel:
    __slots__ = ("a", "b", "whole", "left", "right", "depth")

    def __init__(self, a, b, whole, left, right, depth):
        self.a, self.b = a, b
        self.whole, self.left, self.right = whole, left, right
        self.depth = depth

    @property
    def value(self):
        return self.left + self.right

    @property
    def error(self) -> float:
        return abs(self.whole - self.value)


def _rule_batch(g, intervals, n):
    """Gauss-Legendre sums of g over many intervals with one call to g."""
    x, w = gauss_legendre(n)
    iv = np.asarray(intervals, dtype=float).reshape(-1, 2)
    mid = 0.5 * (iv[:, 0] + iv[:, 1])
    half = 0.5 * (iv[:, 1] - iv[:, 0])
    pts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    vals = np.asarray(g(pts)).reshape(len(iv), n)
    return (vals * (half[:, None] * w[None, :])).sum(axis=1)


def _adaptive(g, edges: Sequence[float], spec: QuadratureSpec):
    """Globally adaptive panel refinement; returns (value, err_est)."""
    n = spec.base_rule
    edges = np.asarray(edges, dtype=float)
    if edges.size < 2:
        return 0.0, 0.0
    a, b = edges[:-1], edges[1:]
    m = 0.5 * (a + b)
    intervals = np.concatenate([np.stack([a, b], 1), np.stack([a, m], 1), np.stack([m, b], 1)])
    q = _rule_batch(g, intervals, n)
    k = len(a)
    panels = [_Panel(a[i], b[i], q[i], q[k + i], q[2 * k + i], 0) for i in range(k)]
    heap = [(-p.error, i, p) for i, p in enumerate(panels)]
    heapq.heapify(heap)
    counter = len(heap)
    total = sum(p.value for p in panels)
    err = sum(p.error for p in panels)
    while err > spec.target(total):
        _, _, worst = heapq.heappop(heap)
        if worst.depth >= spec.max_depth or counter > MAX_PANELS:
            raise QuadratureError(
                f"tolerance not met: err_est {err:.3e} > {spec.target(total):.3e} "
                f"near [{worst.a:.6g}, {worst.b:.6g}]"
            )
        mid = 0.5 * (worst.a + worst.b)
        q1, q2 = 0.5 * (worst.a + mid), 0.5 * (mid + worst.b)
        halves = _rule_batch(g, [(worst.a, q1), (q1, mid), (mid, q2), (q2, worst.b)], n)
        kids = (
            _Panel(worst.a, mid, worst.left, halves[0], halves[1], worst.depth + 1),
            _Panel(mid, worst.b, worst.right, halves[2], halves[3], worst.depth + 1),
        )
        total += kids[0].value + kids[1].value - worst.value
        err += kids[0].error + kids[1].error - worst.error
        for kid in kids:
            heapq.heappush(heap, (-kid.error, counter, kid))
            counter += 1
        if counter % 64 == 0:
            # refresh the running sums against drift
            live = [p for _, _, p in heap]
            total = sum(p.value for p in live)
            err = sum(p.error for p in live)
    return total, float(err)


# --------------------------------------------------------------------------
# one dimension


def _smooth_map(f, lo, hi):
    """Pull f back through y = lo + (hi - lo)(3 u^2 - 2 u^3), u in [0, 1].

    The Jacobian vanishes at both ends, which turns inverse-square-root
    endpoint singularities into bounded integrands.
    """
    width = hi - lo

    def g(u):
        y = lo + width * u * u * (3.0 - 2.0 * u)
        return f(y) * (6.0 * width * u * (1.0 - u))

    return g


def _exp_sinh(f, lo, spec: QuadratureSpec):
    """Exp-sinh trapezoid on [lo, inf): y = lo + exp(pi/2 sinh tau)."""
    tau_lo, tau_hi = -4.5, 4.0
    half_pi = 0.5 * math.pi

    def contribution(tau):
        e = half_pi * np.sinh(tau)
        y = lo + np.exp(e)
        jac = half_pi * np.cosh(tau) * np.exp(e)
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            v = np.asarray(f(y), dtype=complex) * jac
        v[(jac == 0) | ~np.isfinite(y)] = 0
        if not np.all(np.isfinite(v)):
            raise QuadratureError("integrand is not finite on [lo, inf)")
        return v.sum()

    h = 0.5
    taus = np.arange(tau_lo, tau_hi + 0.5 * h, h)
    total = contribution(taus) * h
    prev = total
    for level in range(1, min(spec.max_depth, 12) + 1):
        h *= 0.5
        mids = np.arange(tau_lo + h, tau_hi, 2 * h)
        total = 0.5 * prev + contribution(mids) * h
        err = abs(total - prev)
        if level >= 3 and err <= spec.target(total):
            return total, float(err)
        prev = total
    raise QuadratureError(f"exp-sinh did not converge: last change {err:.3e}")


def integrate_1d(f: Callable, interval, spec: QuadratureSpec | None = None, smooth_ends: bool = True):
    """Integrate a vectorized ``f`` over ``(lo, hi)``; ``hi`` may be ``inf``.

    Returns ``(value, err_est)`` with ``value`` complex.  Finite intervals use
    adaptive Gauss-Legendre (after an endpoint-smoothing change of variable
    unless ``smooth_ends`` is false); ``[lo, inf)`` uses the exp-sinh
    transform and requires ``f`` to decay.
    """
    spec = spec or QuadratureSpec()
    lo, hi = float(interval[0]), float(interval[1])
    if math.isnan(lo) or math.isnan(hi) or lo == -math.inf:
        raise ValueError("interval must be (finite lo, hi) with hi finite or +inf")
    if hi == math.inf:
        value, err = _exp_sinh(f, lo, spec)
        return complex(value), err
    if hi == lo:
        return 0j, 0.0
    sign = 1.0
    if hi < lo:
        lo, hi, sign = hi, lo, -1.0

    def g(pts):
        return np.asarray(f(pts), dtype=complex)

    if smooth_ends:
        value, err = _adaptive(_smooth_map(g, lo, hi), [0.0, 0.5, 1.0], spec)
    else:
        value, err = _adaptive(g, [lo, 0.5 * (lo + hi), hi], spec)
    return complex(sign * value), err


# --------------------------------------------------------------------------
# two dimensions


@dataclass(frozen=True)
class RowPiece:
    """A slab of a region described by an outer parameter p.

    ``to_y(p)`` returns ``(y, |dy/dp|)`` for arrays p, and ``x_segments(y)``
    the list of x intervals of the row at height y.  ``breaks`` are
    p-values where the row shape has a kink (always used as panel edges).
    """

    p_lo: float
    p_hi: float
    to_y: Callable
    x_segments: Callable
    breaks: tuple = ()


def _x_nodes(segments, modes: float, n: int):
    x, w = gauss_legendre(n)
    xs, ws = [], []
    for a, b in segments:
        if b <= a:
            continue
        periods = max(modes, 1.0) * (b - a)
        panels = max(1, int(math.ceil(NODES_PER_PERIOD * periods / n)))
        e = np.linspace(a, b, panels + 1)
        mid = 0.5 * (e[1:] + e[:-1])
        half = 0.5 * np.diff(e)
        xs.append((mid[:, None] + half[:, None] * x[None, :]).ravel())
        ws.append((half[:, None] * w[None, :]).ravel())
    if not xs:
        return np.empty(0), np.empty(0)
    return np.concatenate(xs), np.concatenate(ws)


def integrate_2d(
    f: Callable,
    region,
    weight: str = "hyperbolic",
    spec: QuadratureSpec | None = None,
    x_modes=None,
    y_freq: float = 0.0,
):
    """Integrate ``f(xs, y)`` over a region; returns ``(value, err_est)``.

    ``f`` receives an array of x values and a scalar y and returns the row of
    integrand values.  ``weight`` is ``"hyperbolic"`` (dx dy / y^2) or
    ``"euclidean"``.  ``x_modes`` is the largest Fourier mode in x, either a
    number or a callable of y; it defaults to the region's hint.  ``y_freq``
    is the expected oscillation frequency in log y, used to seed the outer
    panel count.
    """
    spec = spec or QuadratureSpec()
    if weight not in ("hyperbolic", "euclidean"):
        raise ValueError("weight must be 'hyperbolic' or 'euclidean'")
    if x_modes is None:
        x_modes = getattr(region, "max_fourier_mode_hint", 1)
    modes_of = x_modes if callable(x_modes) else (lambda y, _m=float(x_modes): _m)
    hyperbolic = weight == "hyperbolic"
    n = spec.base_rule

    total, err = 0j, 0.0
    pieces = list(region.row_pieces())
    for piece in pieces:

        def g(ps, piece=piece):
            ys, jac = piece.to_y(np.asarray(ps, dtype=float))
            out = np.empty(len(ys), dtype=complex)
            for i, (y, j) in enumerate(zip(ys, jac)):
                xs, ws = _x_nodes(piece.x_segments(y), modes_of(y), n)
                if xs.size == 0:
                    out[i] = 0
                    continue
                row = np.asarray(f(xs, y), dtype=complex)
                out[i] = (row * ws).sum() * (j / (y * y) if hyperbolic else j)
            return out

        edges = _outer_edges(piece, y_freq, n)
        # share the tolerance between pieces in proportion to nothing fancy:
        # each piece is held to the full relative tolerance of its own value
        value, e = _adaptive(g, edges, spec)
        total += value
        err += e
    return complex(total), float(err)


def _outer_edges(piece: RowPiece, y_freq: float, n: int):
    cuts = sorted({piece.p_lo, piece.p_hi, *[b for b in piece.breaks if piece.p_lo < b < piece.p_hi]})
    edges = [cuts[0]]
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        count = 1
        if y_freq > 0:
            with np.errstate(divide="ignore"):
                ys, _ = piece.to_y(np.array([lo, hi]))
            ys = np.clip(ys, 1e-300, 1e6)
            variation = y_freq * abs(math.log(ys[1] / ys[0]))
            count = max(1, int(math.ceil(NODES_PER_PERIOD * variation / (2 * math.pi * n))))
        edges.extend(np.linspace(lo, hi, count + 1)[1:].tolist())
    return edges
