# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same algorithm and constants as ``_reference``."""

from libc.math cimport acosh, atan2, ceil, cos, cosh, exp, fabs, floor, hypot, log, sin, sinh, sqrt, INFINITY
from libc.stdlib cimport free, malloc

import numpy as np

from ._reference import GL_NODES, GL_WEIGHTS, GL_ORDER, PANEL_BUDGET, SAMPLES, TAIL, DESCENT, DENSITY_FLOOR, TAIL_STEP

cdef double PI = 3.14159265358979323846
cdef double c_budget = PANEL_BUDGET
cdef int c_samples = SAMPLES
cdef double c_tail = TAIL
cdef double c_descent = DESCENT
cdef double c_floor = DENSITY_FLOOR
cdef double c_tail_step = TAIL_STEP
cdef int c_order = GL_ORDER
cdef int RESEED = 32
cdef double[16] gl_x
cdef double[16] gl_w
for _i in range(GL_ORDER):
    gl_x[_i] = GL_NODES[_i]
    gl_w[_i] = GL_WEIGHTS[_i]


cdef inline void _descent_path(double x, double r, double* beta, double* dbeta) noexcept nogil:
    cdef double x2, sm, sxc, sh, omq, g, cb, gp
    x2 = x * x
    sh = sinh(x)
    if x < 0.1:
        sm = x * x2 * (1.0 / 6 + x2 * (1.0 / 120 + x2 * (1.0 / 5040 + x2 / 362880)))
        sxc = -x * x2 * (1.0 / 3 + x2 * (1.0 / 30 + x2 * (1.0 / 840 + x2 / 45360)))
    else:
        sm = sh - x
        sxc = sh - x * cosh(x)
    if x > 0.0:
        omq = sm / sh
        gp = r * sxc / (sh * sh)
    else:
        omq = 0.0
        gp = 0.0
    g = r * (1.0 - omq)
    cb = sqrt(((1.0 - r) + r * omq) * (1.0 + g))
    beta[0] = atan2(g, cb)
    if cb > 0.0:
        dbeta[0] = gp / cb
    else:
        dbeta[0] = -1.0 / sqrt(3.0)


cdef inline void _path(double x, double u, double t, double* beta, double* dbeta) noexcept nogil:
    cdef double v, delta
    if t <= 0.0:
        beta[0] = 0.0
        dbeta[0] = 0.0
        return
    if u >= t:
        _descent_path(x, t / u, beta, dbeta)
        return
    v = u * cosh(x) / t
    delta = v - 1.0
    if delta < 0.0:
        delta = 0.0
    if delta > 0.5 * PI:
        delta = 0.5 * PI
    beta[0] = 0.5 * PI - delta
    if v > 1.0 and v < c_descent:
        dbeta[0] = -u * sinh(x) / t
    else:
        dbeta[0] = 0.0


cdef inline double _density(double x, double u, double a, double t) noexcept nogil:
    cdef double beta, dbeta, ch, sh, cb, sb, fr, fi, f2
    _path(x, u, t, &beta, &dbeta)
    ch = cosh(x)
    sh = sinh(x)
    cb = cos(beta)
    sb = sin(beta)
    fr = -u * sh * cb + a
    fi = -u * ch * sb + t
    f2 = u * sqrt((ch * cb) * (ch * cb) + (sh * sb) * (sh * sb))
    return (hypot(fr, fi) + 2.0 * sqrt(f2) + c_floor) * sqrt(1.0 + dbeta * dbeta)


cdef inline double _real_exponent(double x, double u, double a, double t) noexcept nogil:
    cdef double beta, dbeta
    _path(x, u, t, &beta, &dbeta)
    return -u * cosh(x) * cos(beta) + a * x - t * beta


cdef int _edges(double u, double a, double t, double** out) noexcept nogil:
    """Fill *out (malloc'd) with panel edges; return the edge count."""
    cdef double bps[4]
    cdef int nbp = 1
    cdef double c, level, m0, val, target, x_tail, lo, hi, total, goal, frac
    cdef int i, j, k, npan, cap, count
    cdef double xs[65]
    cdef double cum[65]
    cdef double* edges
    cdef double h
    bps[0] = 0.0
    if t > 0.0:
        for i in range(2):
            level = 1.0 if i == 0 else c_descent
            c = level * t / u
            if c > 1.0:
                bps[nbp] = acosh(c)
                nbp += 1
    m0 = -INFINITY
    for i in range(nbp):
        val = _real_exponent(bps[i], u, a, t)
        if val > m0:
            m0 = val
    target = c_tail - m0
    x_tail = 0.0
    if target > u:
        x_tail = acosh(target / u)
        for i in range(4):
            c = (target + a * x_tail) / u
            if c < 1.0:
                c = 1.0
            x_tail = acosh(c)
    if x_tail < bps[nbp - 1]:
        x_tail = bps[nbp - 1]
    if x_tail < 0.05:
        x_tail = 0.05
    while _real_exponent(x_tail, u, a, t) > m0 - c_tail:
        x_tail += c_tail_step
    bps[nbp] = x_tail + 0.5
    nbp += 1

    cap = 64
    edges = <double*> malloc(cap * sizeof(double))
    edges[0] = 0.0
    count = 1
    for i in range(nbp - 1):
        lo = bps[i]
        hi = bps[i + 1]
        if hi <= lo:
            continue
        h = (hi - lo) / c_samples
        for j in range(c_samples + 1):
            xs[j] = lo + j * h
        cum[0] = 0.0
        for j in range(1, c_samples + 1):
            cum[j] = cum[j - 1] + 0.5 * (_density(xs[j], u, a, t) + _density(xs[j - 1], u, a, t)) * h
        total = cum[c_samples]
        npan = <int> ceil(total / c_budget)
        if npan < 1:
            npan = 1
        if count + npan + 1 > cap:
            while count + npan + 1 > cap:
                cap *= 2
            edges = _grow(edges, count, cap)
        j = 0
        for k in range(1, npan):
            goal = k * (total / npan)
            while j < c_samples - 1 and cum[j + 1] < goal:
                j += 1
            frac = (goal - cum[j]) / (cum[j + 1] - cum[j])
            edges[count] = xs[j] + frac * (xs[j + 1] - xs[j])
            count += 1
        edges[count] = hi
        count += 1
    out[0] = edges
    return count


cdef double* _grow(double* old, int count, int cap) noexcept nogil:
    cdef double* new = <double*> malloc(cap * sizeof(double))
    cdef int i
    for i in range(count):
        new[i] = old[i]
    free(old)
    return new


cdef void _k_one(double a, double t, double u, double* re_out, double* im_out) noexcept nogil:
    cdef bint conj = False
    cdef double* edges
    cdef int count, p, q
    cdef double mid, half, x, wt, beta, dbeta, ch, sh, cb, sb
    cdef double re_r, im_r, re_l, im_l, m, e, sr, si, mag
    if t < 0.0:
        t = -t
        conj = not conj
    if a < 0.0:
        a = -a
        conj = not conj
    count = _edges(u, a, t, &edges)
    m = -INFINITY
    for p in range(count - 1):
        mid = 0.5 * (edges[p + 1] + edges[p])
        half = 0.5 * (edges[p + 1] - edges[p])
        for q in range(c_order):
            x = mid + half * gl_x[q]
            _path(x, u, t, &beta, &dbeta)
            ch = cosh(x)
            cb = cos(beta)
            re_r = -u * ch * cb + a * x - t * beta
            re_l = re_r - 2.0 * a * x
            if re_r > m:
                m = re_r
            if re_l > m:
                m = re_l
    sr = 0.0
    si = 0.0
    for p in range(count - 1):
        mid = 0.5 * (edges[p + 1] + edges[p])
        half = 0.5 * (edges[p + 1] - edges[p])
        for q in range(c_order):
            x = mid + half * gl_x[q]
            wt = half * gl_w[q]
            _path(x, u, t, &beta, &dbeta)
            ch = cosh(x)
            sh = sinh(x)
            cb = cos(beta)
            sb = sin(beta)
            re_r = -u * ch * cb + a * x - t * beta
            im_r = -u * sh * sb + t * x + a * beta
            re_l = -u * ch * cb - a * x - t * beta
            im_l = u * sh * sb - t * x + a * beta
            # right: wt e^{re_r - m} e^{i im_r} (1 + i dbeta)
            e = wt * exp(re_r - m)
            sr += e * (cos(im_r) - dbeta * sin(im_r))
            si += e * (sin(im_r) + dbeta * cos(im_r))
            # left: wt e^{re_l - m} e^{i im_l} (1 - i dbeta)
            e = wt * exp(re_l - m)
            sr += e * (cos(im_l) + dbeta * sin(im_l))
            si += e * (sin(im_l) - dbeta * cos(im_l))
    free(edges)
    mag = hypot(sr, si)
    if mag == 0.0:
        re_out[0] = -INFINITY
        im_out[0] = 0.0
        return
    re_out[0] = m + log(mag) - log(2.0)
    im_out[0] = atan2(si, sr)
    if conj:
        im_out[0] = -im_out[0]


def k_bessel_log(double a, double t, u):
    """Vector of complex logs of K_{a+it}(u_j)."""
    uu = np.ascontiguousarray(np.ravel(u), dtype=np.float64)
    cdef Py_ssize_t n = uu.shape[0]
    re = np.empty(n, dtype=np.float64)
    im = np.empty(n, dtype=np.float64)
    cdef const double[::1] uv = uu
    cdef double[::1] rv = re
    cdef double[::1] iv = im
    cdef Py_ssize_t j
    with nogil:
        for j in range(n):
            _k_one(a, t, uv[j], &rv[j], &iv[j])
    out = re + 1j * im
    return out.reshape(np.shape(u))


def cosine_sum(a0, coeffs, x):
    """a0 + 2 * sum_{n>=1} coeffs[n-1] cos(2 pi n x).

    cos(2 pi n x) comes from the rotation e^{2 pi i (n+1) x} = e^{2 pi i n x} e^{2 pi i x},
    reseeded exactly every RESEED terms so rounding never accumulates past that.
    """
    c = np.ascontiguousarray(np.ravel(coeffs), dtype=np.complex128)
    xx = np.ascontiguousarray(np.ravel(x), dtype=np.float64)
    cdef Py_ssize_t nx = xx.shape[0], nc = c.shape[0]
    out = np.empty(nx, dtype=np.complex128)
    cdef double complex z0 = a0
    cdef double complex acc
    cdef double xr, c1, s1, wr, wi, tmp, arg
    cdef Py_ssize_t i, k
    cdef const double complex[::1] cv = c
    cdef const double[::1] xv = xx
    cdef double complex[::1] ov = out
    with nogil:
        for i in range(nx):
            xr = xv[i] - floor(xv[i])
            c1 = cos(2.0 * PI * xr)
            s1 = sin(2.0 * PI * xr)
            acc = 0.0
            wr = 1.0
            wi = 0.0
            for k in range(nc):
                if k % RESEED == 0:
                    arg = (k + 1) * xr
                    arg = 2.0 * PI * (arg - floor(arg))
                    wr = cos(arg)
                    wi = sin(arg)
                else:
                    tmp = wr * c1 - wi * s1
                    wi = wr * s1 + wi * c1
                    wr = tmp
                acc = acc + cv[k] * wr
            ov[i] = z0 + 2.0 * acc
    return out.reshape(np.shape(x))
