"""Pure numpy kernels; the compiled module mirrors these step for step.

K-Bessel of complex order nu = a + i t at real u > 0 is computed from

    K_nu(u) = 1/2 * integral over R of exp(-u cosh w + nu w) dw

on the deformed contour w(x) = x + i beta(|x|).  For 0 < u < t the
contour sits on Im w = pi/2 while u cosh x < t (so |integrand| =
exp(-pi t/2 + a x) and the exp(-pi t/2) factor comes out exactly), then
beta decreases linearly in v = u cosh(x) / t until it reaches the real
axis at v = 1 + pi/2, after which the integrand decays doubly
exponentially.  For u >= t the saddle is at w = i asin(t/u) and the
contour is the steepest-descent path sin(beta) = t x / (u sinh x), on
which Im(-u cosh w + i t w) is constant.  Either way the sum never
cancels more than O(1) digits.
"""
from __future__ import annotations

import math

import numpy as np

GL_ORDER = 16
GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)
# total variation of the exponent allowed per Gauss-Legendre panel
PANEL_BUDGET = 12.0
SAMPLES = 64
TAIL = 40.0
DESCENT = 1.0 + 0.5 * math.pi
DENSITY_FLOOR = 1.0
TAIL_STEP = 0.25


def _descent_path(x, r):
    """Steepest-descent path sin(beta) = r x / sinh(x) through the saddle i asin(r), r <= 1."""
    x2 = x * x
    small = x < 0.1
    # sinh x - x and sinh x - x cosh x, by series near 0 to avoid cancellation
    sm = np.where(small, x * x2 * (1 / 6 + x2 * (1 / 120 + x2 * (1 / 5040 + x2 / 362880))), np.sinh(x) - x)
    sxc = np.where(small, -x * x2 * (1 / 3 + x2 * (1 / 30 + x2 * (1 / 840 + x2 / 45360))),
                   np.sinh(x) - x * np.cosh(x))
    sh = np.sinh(x)
    safe = np.where(x > 0, sh, 1.0)
    one_minus_q = np.where(x > 0, sm / safe, 0.0)
    g = r * (1.0 - one_minus_q)
    cos_beta = np.sqrt(((1.0 - r) + r * one_minus_q) * (1.0 + g))
    beta = np.arctan2(g, cos_beta)
    gp = np.where(x > 0, r * sxc / (safe * safe), 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        dbeta = np.where(cos_beta > 0, gp / cos_beta, -1.0 / math.sqrt(3.0))
    return beta, dbeta


def _path(x, u, t):
    """beta(x) and d beta/dx for x >= 0."""
    x = np.asarray(x, dtype=float)
    if t <= 0.0:
        return np.zeros_like(x), np.zeros_like(x)
    if u >= t:
        return _descent_path(x, t / u)
    v = u * np.cosh(x) / t
    delta = np.clip(v - 1.0, 0.0, 0.5 * math.pi)
    slope = np.where((v > 1.0) & (v < DESCENT), u * np.sinh(x) / t, 0.0)
    return 0.5 * math.pi - delta, -slope


def _density(x, u, a, t):
    beta, dbeta = _path(x, u, t)
    ch, sh = np.cosh(x), np.sinh(x)
    cb, sb = np.cos(beta), np.sin(beta)
    # F'(w) = -u sinh w + nu
    fr = -u * sh * cb + a
    fi = -u * ch * sb + t
    # |F''(w)| = u |cosh w|
    f2 = u * np.sqrt((ch * cb) ** 2 + (sh * sb) ** 2)
    # the floor keeps long flat stretches (small u) from sharing one panel with the knee
    return (np.hypot(fr, fi) + 2.0 * np.sqrt(f2) + DENSITY_FLOOR) * np.sqrt(1.0 + dbeta * dbeta)


def _real_exponent(x, u, a, t):
    beta, _ = _path(np.asarray(x, dtype=float), u, t)
    return -u * np.cosh(x) * np.cos(beta) + a * x - t * beta


def _panel_edges(u, a, t):
    """Panel edges on [0, X] (the contour is mirrored for x < 0)."""
    bps = [0.0]
    if t > 0.0:
        for level in (1.0, DESCENT):
            c = level * t / u
            if c > 1.0:
                bps.append(math.acosh(c))
    m0 = float(np.max(_real_exponent(np.array(bps), u, a, t)))
    target = TAIL - m0
    x_tail = 0.0
    if target > u:
        x_tail = math.acosh(target / u)
        for _ in range(4):
            x_tail = math.acosh(max(1.0, (target + a * x_tail) / u))
    # the estimate assumes beta = 0; walk out until the path itself has decayed.
    # The step is additive: at large x one step scales u cosh x by exp(TAIL_STEP)
    x_tail = max(x_tail, bps[-1], 0.05)
    while _real_exponent(x_tail, u, a, t) > m0 - TAIL:
        x_tail += TAIL_STEP
    bps.append(x_tail + 0.5)
    edges = [0.0]
    for lo, hi in zip(bps[:-1], bps[1:]):
        if hi <= lo:
            continue
        xs = np.linspace(lo, hi, SAMPLES + 1)
        dens = _density(xs, u, a, t)
        cum = np.concatenate(([0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(xs))))
        npan = max(1, int(math.ceil(cum[-1] / PANEL_BUDGET)))
        inner = np.interp(np.arange(1, npan) * (cum[-1] / npan), cum, xs)
        edges.extend(inner.tolist())
        edges.append(hi)
    return np.array(edges)


def k_bessel_log_one(a: float, t: float, u: float) -> complex:
    """Complex log of K_{a+it}(u) for a single u > 0."""
    conj = False
    if t < 0.0:
        t = -t
        conj = not conj
    if a < 0.0:
        a = -a
        conj = not conj
    edges = _panel_edges(u, a, t)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * GL_NODES[None, :]).ravel()
    wt = (half[:, None] * GL_WEIGHTS[None, :]).ravel()
    beta, dbeta = _path(x, u, t)
    ch, sh = np.cosh(x), np.sinh(x)
    cb, sb = np.cos(beta), np.sin(beta)
    # right branch w = x + i beta, left branch w = -x + i beta
    re_r = -u * ch * cb + a * x - t * beta
    im_r = -u * sh * sb + t * x + a * beta
    re_l = -u * ch * cb - a * x - t * beta
    im_l = u * sh * sb - t * x + a * beta
    m = max(re_r.max(), re_l.max())
    right = wt * np.exp(re_r - m) * np.exp(1j * im_r) * (1.0 + 1j * dbeta)
    left = wt * np.exp(re_l - m) * np.exp(1j * im_l) * (1.0 - 1j * dbeta)
    total = complex(right.sum() + left.sum())
    if total == 0:
        return complex(-math.inf, 0.0)
    out = m + complex(math.log(abs(total)) - math.log(2.0), math.atan2(total.imag, total.real))
    return out.conjugate() if conj else out


def k_bessel_log(a: float, t: float, u) -> np.ndarray:
    """Vector of complex logs of K_{a+it}(u_j)."""
    u = np.asarray(u, dtype=float)
    out = np.empty(u.shape, dtype=complex)
    flat = out.reshape(-1)
    for j, uj in enumerate(u.reshape(-1)):
        flat[j] = k_bessel_log_one(float(a), float(t), float(uj))
    return out


def cosine_sum(a0: complex, coeffs, x) -> np.ndarray:
    """a0 + 2 * sum_{n>=1} coeffs[n-1] cos(2 pi n x) at every x."""
    coeffs = np.asarray(coeffs, dtype=complex)
    x = np.asarray(x, dtype=float)
    if coeffs.size == 0:
        return np.full(x.shape, a0, dtype=complex)
    n = np.arange(1, coeffs.size + 1, dtype=float)
    return a0 + 2.0 * (np.cos(2.0 * math.pi * np.multiply.outer(x, n)) @ coeffs)
