# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric core.

Mirrors ``_slowcore`` function for function; keep the algorithms in sync
(tests/test_backends.py compares them).
"""

from libc.math cimport fabs, log, log1p

import numpy as np

cdef double LN2 = 0.6931471805599453
cdef double _SPLIT_LO = 0.06
cdef double _SPLIT_HI = 0.5

SPLIT_INV_LO = _SPLIT_LO
SPLIT_INV_HI = _SPLIT_HI


cdef inline double _h(double x) noexcept:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * log(x) - (1.0 - x) * log1p(-x)


cdef inline double _conv(double p, double x) noexcept:
    if p == 0.5 or x == 0.5:
        return 0.5
    return p * (1.0 - x) + (1.0 - p) * x


def entropy_scalar(double x):
    """Binary entropy in nats with the 0*log(0) = 0 convention."""
    return _h(x)


def entropy_array(x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] xv = x.ravel()
    out = np.empty(xv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        ov[i] = _h(xv[i])
    return out.reshape(np.shape(x))


def convolve_scalar(double p, double x):
    """Binary convolution p(1-x) + (1-p)x; exact 1/2 for a 1/2 input."""
    return _conv(p, x)


def convolve_array(double p, x):
    """Binary convolution of scalar ``p`` against an array ``x``."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] xv = x.ravel()
    out = np.empty(xv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        ov[i] = _conv(p, xv[i])
    return out.reshape(np.shape(x))


cdef double _hinv(double u, double tol, int max_iter, int* ok) noexcept:
    # Same stopping logic as the fallback backend: accepted-step or bracket
    # width below tol, so the x-accuracy is uniform across the flat top.
    cdef double lo, hi, x, fx, d, xn
    cdef int it
    ok[0] = 1
    if u <= 0.0:
        return 0.0
    if u >= LN2:
        return 0.5
    lo = 0.0
    hi = 0.5
    x = 0.25
    for it in range(max_iter):
        fx = -x * log(x) - (1.0 - x) * log1p(-x) - u
        if fx == 0.0:
            return x
        if fx < 0.0:
            lo = x
        else:
            hi = x
        if hi - lo <= tol:
            return 0.5 * (lo + hi)
        d = log1p(-x) - log(x)
        xn = x - fx / d
        if lo < xn and xn < hi:
            if fabs(xn - x) <= tol:
                return xn
        else:
            xn = 0.5 * (lo + hi)
        if xn == x:
            return x
        x = xn
    ok[0] = 0
    return x


def entropy_inv_scalar(double u, double tol=1e-13, int max_iter=256):
    """Invert the natural-base binary entropy onto [0, 1/2].

    Same safeguarded Newton/bisection iteration as the fallback backend.
    """
    cdef int ok
    cdef double x = _hinv(u, tol, max_iter, &ok)
    if not ok:
        raise RuntimeError(f"entropy inverse did not converge (u={u!r}, tol={tol!r})")
    return x


def entropy_inv_array(u, double tol=1e-13, int max_iter=256):
    u = np.ascontiguousarray(u, dtype=np.float64)
    cdef double[::1] uv = u.ravel()
    out = np.empty(uv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    cdef int ok
    cdef Py_ssize_t bad = -1
    for i in range(uv.shape[0]):
        ov[i] = _hinv(uv[i], tol, max_iter, &ok)
        if not ok:
            bad = i
            break
    if bad >= 0:
        raise RuntimeError(f"entropy inverse did not converge (u={uv[bad]!r})")
    return out.reshape(np.shape(u))


cdef inline double _split(double t) noexcept:
    return _h(0.5 * t) + _h(0.5 * (1.0 - t))


def split_entropy_scalar(double t):
    """H(t/2) + H((1-t)/2) in nats."""
    return _split(t)


def split_entropy_array(t):
    t = np.ascontiguousarray(t, dtype=np.float64)
    cdef double[::1] tv = t.ravel()
    out = np.empty(tv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(tv.shape[0]):
        ov[i] = _split(tv[i])
    return out.reshape(np.shape(t))


cdef double _split_inv(double v, double tol, int max_iter) noexcept:
    cdef double lo = _SPLIT_LO
    cdef double hi = _SPLIT_HI
    cdef double mid
    cdef int it
    if v <= _split(lo):
        return lo
    if v >= _split(hi):
        return hi
    for it in range(max_iter):
        mid = 0.5 * (lo + hi)
        if _split(mid) < v:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def split_entropy_inv_scalar(double v, double tol=1e-13, int max_iter=128):
    """Invert the split-entropy curve on [0.06, 0.5] by bisection."""
    return _split_inv(v, tol, max_iter)


def split_entropy_inv_array(v, double tol=1e-13, int max_iter=128):
    v = np.ascontiguousarray(v, dtype=np.float64)
    cdef double[::1] vv = v.ravel()
    out = np.empty(vv.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(vv.shape[0]):
        ov[i] = _split_inv(vv[i], tol, max_iter)
    return out.reshape(np.shape(v))


def mgl_gaps(raw, ks, ps, int max_support, double tol=1e-13, int max_iter=256):
    """Per-trial gap of the entropy-inverse inequality; see the fallback
    backend for the row layout."""
    if max_support > 64:
        raise ValueError("max_support larger than 64 is not supported")
    raw = np.ascontiguousarray(raw, dtype=np.float64)
    ks_arr = np.ascontiguousarray(ks, dtype=np.int64)
    ps_arr = np.ascontiguousarray(ps, dtype=np.float64)
    cdef double[:, ::1] R = raw
    cdef long long[::1] K = ks_arr
    cdef double[::1] P = ps_arr
    cdef Py_ssize_t n = R.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] G = out
    cdef double wbuf[65]
    cdef double gbuf[64]
    cdef double p, hx, hy, a, lhs, c, rhs, key, prev
    cdef double hx_lo, hx_hi, hy_lo, hy_hi
    cdef Py_ssize_t i, j, m
    cdef long long k
    cdef int ok1, ok2
    for i in range(n):
        k = K[i]
        p = P[i]
        # weights: gaps of the sorted k-1 uniforms (insertion sort)
        for j in range(k - 1):
            key = R[i, 1 + j]
            m = j
            while m > 0 and gbuf[m - 1] > key:
                gbuf[m] = gbuf[m - 1]
                m -= 1
            gbuf[m] = key
        prev = 0.0
        for j in range(k - 1):
            wbuf[j] = gbuf[j] - prev
            prev = gbuf[j]
        wbuf[k - 1] = 1.0 - prev
        hx = 0.0
        hy = 0.0
        hx_lo = hx_hi = _h(R[i, max_support])
        hy_lo = hy_hi = _h(_conv(p, R[i, max_support]))
        for j in range(k):
            key = _h(R[i, max_support + j])
            hx += wbuf[j] * key
            if key < hx_lo: hx_lo = key
            if key > hx_hi: hx_hi = key
            key = _h(_conv(p, R[i, max_support + j]))
            hy += wbuf[j] * key
            if key < hy_lo: hy_lo = key
            if key > hy_hi: hy_hi = key
        # weighted means lie in the hull of their values; clamp the rounding
        # (the inverse is sqrt-sensitive near the flat top)
        if hx < hx_lo: hx = hx_lo
        if hx > hx_hi: hx = hx_hi
        if hy < hy_lo: hy = hy_lo
        if hy > hy_hi: hy = hy_hi
        a = _hinv(hx, tol, max_iter, &ok1)
        lhs = _hinv(hy, tol, max_iter, &ok2)
        if not (ok1 and ok2):
            raise RuntimeError(f"entropy inverse did not converge in trial {i}")
        c = _conv(a, p)
        rhs = c if c < 1.0 - c else 1.0 - c
        G[i] = lhs - rhs
    return out
