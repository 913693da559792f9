# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: per-atom discriminator search and margin line search.

Mirrors ``_kernels_py`` exactly in semantics; ``kernels`` picks one at import.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, log1p, expm1, pow, fabs, INFINITY, isinf

cnp.import_array()

cdef double INVPHI = 0.6180339887498949


cdef inline int _mode(double alpha):
    if isinf(alpha):
        return 2
    if fabs(alpha - 1.0) < 1e-9:
        return 1
    return 0


cdef inline double _term(double w, double y, double c, double scale, int mode) nogil:
    # w * (alpha/(alpha-1)) * y^c, or its alpha=1 / alpha=inf limit; 0 when w == 0
    if w == 0.0:
        return 0.0
    if mode == 2:
        return w * y
    if mode == 1:
        if y <= 0.0:
            return -INFINITY
        return w * log(y)
    if y <= 0.0:
        if c < 0.0:
            return -INFINITY
        return 0.0
    return scale * w * pow(y, c)


cdef inline double _g(double a, double b, double y, double c, double scale, int mode) nogil:
    return _term(a, y, c, scale, mode) + _term(b, 1.0 - y, c, scale, mode)


cdef inline double _grid_g(double a, double b, double t0, double t1) nogil:
    cdef double v = 0.0
    if a != 0.0:
        v += a * t0
    if b != 0.0:
        v += b * t1
    return v


def brute_force_argmax(a_in, b_in, double alpha, int grid=1001, double tol=1e-10):
    """Grid argmax of the pointwise discriminator objective, golden-refined."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.ascontiguousarray(a_in, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] b = np.ascontiguousarray(b_in, dtype=np.float64).ravel()
    cdef Py_ssize_t n = a.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef int mode = _mode(alpha)
    cdef double c = 1.0, scale = 1.0
    if mode == 0:
        c = (alpha - 1.0) / alpha
        scale = alpha / (alpha - 1.0)
    cdef Py_ssize_t i, j, best
    cdef double step = 1.0 / (grid - 1)
    # per-grid-point terms are shared by every atom: t0[j] for y_j, t1[j] for 1 - y_j
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t0 = np.empty(grid, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t1 = np.empty(grid, dtype=np.float64)
    cdef double y
    for j in range(grid):
        y = 1.0 if j == grid - 1 else j * step
        t0[j] = _term(1.0, y, c, scale, mode)
        t1[j] = _term(1.0, 1.0 - y, c, scale, mode)
    cdef double ai, bi, v, vbest, lo, hi, x1, x2, f1, f2
    with nogil:
        for i in range(n):
            ai = a[i]
            bi = b[i]
            if ai == bi and (mode == 2 or ai == 0.0):
                out[i] = 0.5
                continue
            best = 0
            vbest = _grid_g(ai, bi, t0[0], t1[0])
            for j in range(1, grid):
                v = _grid_g(ai, bi, t0[j], t1[j])
                if v > vbest:
                    vbest = v
                    best = j
            lo = (best - 1) * step if best > 0 else 0.0
            hi = (best + 1) * step if best < grid - 1 else 1.0
            x1 = hi - INVPHI * (hi - lo)
            x2 = lo + INVPHI * (hi - lo)
            f1 = _g(ai, bi, x1, c, scale, mode)
            f2 = _g(ai, bi, x2, c, scale, mode)
            while hi - lo > tol:
                if f1 < f2:
                    lo = x1
                    x1 = x2
                    f1 = f2
                    x2 = lo + INVPHI * (hi - lo)
                    f2 = _g(ai, bi, x2, c, scale, mode)
                else:
                    hi = x2
                    x2 = x1
                    f2 = f1
                    x1 = hi - INVPHI * (hi - lo)
                    f1 = _g(ai, bi, x1, c, scale, mode)
            y = 0.5 * (lo + hi)
            # the grid endpoint may beat the refined interior point (linear or flat g)
            if best == 0 and _g(ai, bi, 0.0, c, scale, mode) >= _g(ai, bi, y, c, scale, mode):
                y = 0.0
            elif best == grid - 1 and _g(ai, bi, 1.0, c, scale, mode) >= _g(ai, bi, y, c, scale, mode):
                y = 1.0
            out[i] = y
    return out


cdef inline double _log_sigmoid(double t) nogil:
    if t >= 0.0:
        return -log1p(exp(-t))
    return t - log1p(exp(t))


cdef inline double _margin_loss(double t, double c, double scale, int mode) nogil:
    cdef double ls
    if mode == 2:
        return exp(_log_sigmoid(-t))
    ls = _log_sigmoid(t)
    if mode == 1:
        return -ls
    return -scale * expm1(c * ls)


cdef inline double _h(double eta, double t, double c, double scale, int mode) nogil:
    return eta * _margin_loss(t, c, scale, mode) + (1.0 - eta) * _margin_loss(-t, c, scale, mode)


cdef double _golden_min(double eta, double lo, double hi, double tol,
                        double c, double scale, int mode, double* fmin) nogil:
    cdef double x1 = hi - INVPHI * (hi - lo)
    cdef double x2 = lo + INVPHI * (hi - lo)
    cdef double f1 = _h(eta, x1, c, scale, mode)
    cdef double f2 = _h(eta, x2, c, scale, mode)
    cdef int it = 0
    while hi - lo > tol and it < 400:
        it += 1
        if f1 <= f2:
            hi = x2
            x2 = x1
            f2 = f1
            x1 = hi - INVPHI * (hi - lo)
            f1 = _h(eta, x1, c, scale, mode)
        else:
            lo = x1
            x1 = x2
            f1 = f2
            x2 = lo + INVPHI * (hi - lo)
            f2 = _h(eta, x2, c, scale, mode)
    cdef double t = 0.5 * (lo + hi)
    fmin[0] = _h(eta, t, c, scale, mode)
    return t


def margin_golden(eta_in, double alpha, double bound=40.0, double limit=700.0, double tol=1e-10):
    """Minimize ``eta*l(t) + (1-eta)*l(-t)`` over t for each eta in (0, 1).

    Starts on ``[-bound, bound]`` and doubles the bracket while the minimizer
    sits at its edge, up to ``[-limit, limit]``. Returns ``(argmin, value)``.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] eta = np.ascontiguousarray(eta_in, dtype=np.float64).ravel()
    cdef Py_ssize_t n = eta.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] arg = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] val = np.empty(n, dtype=np.float64)
    cdef int mode = _mode(alpha)
    cdef double c = 1.0, scale = 1.0
    if mode == 0:
        c = (alpha - 1.0) / alpha
        scale = alpha / (alpha - 1.0)
    cdef Py_ssize_t i
    cdef double B, t, fmin
    with nogil:
        for i in range(n):
            B = bound
            while True:
                t = _golden_min(eta[i], -B, B, tol, c, scale, mode, &fmin)
                if fabs(t) < B - 1e-3 * B or B >= limit:
                    break
                B = 2.0 * B
                if B > limit:
                    B = limit
            arg[i] = t
            val[i] = fmin
    return arg, val
