"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``.

Vectorized across atoms (resp. eta values); the golden-section updates run
in lock-step for all entries.
"""

import math

import numpy as np

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_CHUNK = 2048


def _mode(alpha):
    if math.isinf(alpha):
        return 2
    if abs(alpha - 1.0) < 1e-9:
        return 1
    return 0


def _term(w, y, c, scale, mode):
    with np.errstate(divide="ignore", invalid="ignore"):
        if mode == 2:
            v = w * y
        elif mode == 1:
            v = w * np.log(y)
        else:
            v = scale * w * np.power(y, c)
    return np.where(w == 0.0, 0.0, v)


def _g(a, b, y, c, scale, mode):
    return _term(a, y, c, scale, mode) + _term(b, 1.0 - y, c, scale, mode)


def _argmax_chunk(a, b, alpha, grid, tol):
    mode = _mode(alpha)
    c, scale = 1.0, 1.0
    if mode == 0:
        c, scale = (alpha - 1.0) / alpha, alpha / (alpha - 1.0)
    step = 1.0 / (grid - 1)
    ys = np.arange(grid) * step
    ys[-1] = 1.0
    t0 = _term(np.ones(1), ys, c, scale, mode)
    t1 = _term(np.ones(1), 1.0 - ys, c, scale, mode)
    with np.errstate(invalid="ignore"):
        vals = (np.where(a[:, None] == 0.0, 0.0, a[:, None] * t0[None, :])
                + np.where(b[:, None] == 0.0, 0.0, b[:, None] * t1[None, :]))
    best = np.argmax(vals, axis=1)
    lo = np.where(best > 0, (best - 1) * step, 0.0)
    hi = np.where(best < grid - 1, (best + 1) * step, 1.0)
    x1 = hi - INVPHI * (hi - lo)
    x2 = lo + INVPHI * (hi - lo)
    f1 = _g(a, b, x1, c, scale, mode)
    f2 = _g(a, b, x2, c, scale, mode)
    while np.any(hi - lo > tol):
        active = hi - lo > tol
        move_up = (f1 < f2) & active
        move_dn = ~(f1 < f2) & active
        # maximize: drop the side with the smaller value
        lo = np.where(move_up, x1, lo)
        hi = np.where(move_dn, x2, hi)
        nx1 = np.where(move_up, x2, hi - INVPHI * (hi - lo))
        nx2 = np.where(move_up, lo + INVPHI * (hi - lo), x1)
        nf1 = np.where(move_up, f2, np.nan)
        nf2 = np.where(move_dn, f1, np.nan)
        need1 = move_dn
        need2 = move_up
        nf1 = np.where(need1, _g(a, b, nx1, c, scale, mode), nf1)
        nf2 = np.where(need2, _g(a, b, nx2, c, scale, mode), nf2)
        x1 = np.where(active, nx1, x1)
        x2 = np.where(active, nx2, x2)
        f1 = np.where(active, nf1, f1)
        f2 = np.where(active, nf2, f2)
    y = 0.5 * (lo + hi)
    gy = _g(a, b, y, c, scale, mode)
    y = np.where((best == 0) & (_g(a, b, np.zeros_like(y), c, scale, mode) >= gy), 0.0, y)
    y = np.where((best == grid - 1) & (_g(a, b, np.ones_like(y), c, scale, mode) >= gy), 1.0, y)
    tie = (a == b) & ((mode == 2) | (a == 0.0))
    return np.where(tie, 0.5, y)


def brute_force_argmax(a_in, b_in, alpha, grid=1001, tol=1e-10):
    a = np.ascontiguousarray(a_in, dtype=np.float64).ravel()
    b = np.ascontiguousarray(b_in, dtype=np.float64).ravel()
    out = np.empty_like(a)
    for s in range(0, a.size, _CHUNK):
        out[s:s + _CHUNK] = _argmax_chunk(a[s:s + _CHUNK], b[s:s + _CHUNK], float(alpha), grid, tol)
    return out


def _log_sigmoid(t):
    return np.where(t >= 0.0, -np.log1p(np.exp(-np.abs(t))), t - np.log1p(np.exp(-np.abs(t))))


def _margin_loss(t, c, scale, mode):
    with np.errstate(over="ignore"):
        if mode == 2:
            return np.exp(_log_sigmoid(-t))
        ls = _log_sigmoid(t)
        if mode == 1:
            return -ls
        return -scale * np.expm1(c * ls)


def _h(eta, t, c, scale, mode):
    return eta * _margin_loss(t, c, scale, mode) + (1.0 - eta) * _margin_loss(-t, c, scale, mode)


def _golden_min(eta, lo, hi, tol, c, scale, mode):
    x1 = hi - INVPHI * (hi - lo)
    x2 = lo + INVPHI * (hi - lo)
    f1 = _h(eta, x1, c, scale, mode)
    f2 = _h(eta, x2, c, scale, mode)
    it = 0
    while it < 400 and np.any(hi - lo > tol):
        it += 1
        active = hi - lo > tol
        left = (f1 <= f2) & active
        right = ~(f1 <= f2) & active
        hi = np.where(left, x2, hi)
        lo = np.where(right, x1, lo)
        nx1 = np.where(left, hi - INVPHI * (hi - lo), x2)
        nx2 = np.where(left, x1, lo + INVPHI * (hi - lo))
        nf1 = np.where(left, _h(eta, nx1, c, scale, mode), f2)
        nf2 = np.where(left, f1, _h(eta, nx2, c, scale, mode))
        x1 = np.where(active, nx1, x1)
        x2 = np.where(active, nx2, x2)
        f1 = np.where(active, nf1, f1)
        f2 = np.where(active, nf2, f2)
    t = 0.5 * (lo + hi)
    return t, _h(eta, t, c, scale, mode)


def margin_golden(eta_in, alpha, bound=40.0, limit=700.0, tol=1e-10):
    eta = np.ascontiguousarray(eta_in, dtype=np.float64).ravel()
    mode = _mode(alpha)
    c, scale = 1.0, 1.0
    if mode == 0:
        c, scale = (alpha - 1.0) / alpha, alpha / (alpha - 1.0)
    arg = np.empty_like(eta)
    val = np.empty_like(eta)
    todo = np.arange(eta.size)
    B = np.full(eta.size, float(bound))
    while todo.size:
        t, f = _golden_min(eta[todo], -B[todo], B[todo], tol, c, scale, mode)
        arg[todo] = t
        val[todo] = f
        edge = (np.abs(t) >= B[todo] - 1e-3 * B[todo]) & (B[todo] < limit)
        todo = todo[edge]
        B[todo] = np.minimum(2.0 * B[todo], limit)
    return arg, val
