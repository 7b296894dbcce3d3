"""Numpy implementations of the numeric kernels.

This is the fallback backend, used when the compiled extension is not
available or when MGLTK_BACKEND=python is set.  ``_fastcore.pyx`` implements
the same algorithms element-by-element in C; the two backends must stay
behaviourally identical (they are compared in tests/test_backends.py).

All kernels work in natural-log units; base conversion happens in the API
layer.  Kernels do no domain validation beyond what the algorithms need;
callers validate.
"""

import math

import numpy as np

LN2 = 0.6931471805599453

# Left edge of the window on which the split-entropy curve is inverted.
SPLIT_INV_LO = 0.06
SPLIT_INV_HI = 0.5


def entropy_scalar(x):
    """Binary entropy in nats with the 0*log(0) = 0 convention."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log(x) - (1.0 - x) * math.log1p(-x)


def entropy_array(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros(x.shape, dtype=np.float64)
    inner = (x > 0.0) & (x < 1.0)
    xi = x[inner]
    out[inner] = -xi * np.log(xi) - (1.0 - xi) * np.log1p(-xi)
    return out


def convolve_scalar(p, x):
    """Binary convolution p(1-x) + (1-p)x; exact 1/2 for a 1/2 input."""
    if p == 0.5 or x == 0.5:
        return 0.5
    return p * (1.0 - x) + (1.0 - p) * x


def convolve_array(p, x):
    """Binary convolution of scalar ``p`` against an array ``x``."""
    x = np.asarray(x, dtype=np.float64)
    if p == 0.5:
        return np.full(x.shape, 0.5)
    return np.where(x == 0.5, 0.5, p * (1.0 - x) + (1.0 - p) * x)


def entropy_inv_scalar(u, tol=1e-13, max_iter=256):
    """Invert the natural-base binary entropy onto [0, 1/2].

    Safeguarded Newton iteration on H(x) - u over the bracket [0, 1/2]:
    a Newton step is accepted only when it stays strictly inside the current
    bracket, otherwise the step bisects.  Converges when the accepted Newton
    step or the bracket width drops below ``tol``, so the result is within
    ~tol of the root *in x* even where H flattens near 1/2 (a residual-based
    exit would lose five digits of x-accuracy there).
    """
    if u <= 0.0:
        return 0.0
    if u >= LN2:
        return 0.5
    lo, hi = 0.0, 0.5
    x = 0.25
    for _ in range(max_iter):
        fx = -x * math.log(x) - (1.0 - x) * math.log1p(-x) - u
        if fx == 0.0:
            return x
        if fx < 0.0:
            lo = x
        else:
            hi = x
        if hi - lo <= tol:
            return 0.5 * (lo + hi)
        # H'(x) = log((1-x)/x) > 0 strictly, since x stays in (0, 1/2).
        d = math.log1p(-x) - math.log(x)
        xn = x - fx / d
        if lo < xn < hi:
            if abs(xn - x) <= tol:
                return xn
        else:
            xn = 0.5 * (lo + hi)
        if xn == x:
            return x
        x = xn
    raise RuntimeError(f"entropy inverse did not converge (u={u!r}, tol={tol!r})")


def entropy_inv_array(u, tol=1e-13, max_iter=256):
    """Vectorised mirror of entropy_inv_scalar (same per-element decisions)."""
    u = np.asarray(u, dtype=np.float64)
    flat = u.ravel()
    out = np.empty(flat.shape, dtype=np.float64)
    out[flat <= 0.0] = 0.0
    out[flat >= LN2] = 0.5
    idx = np.nonzero((flat > 0.0) & (flat < LN2))[0]
    uu = flat[idx]
    x = np.full(uu.shape, 0.25)
    lo = np.zeros(uu.shape)
    hi = np.full(uu.shape, 0.5)
    for _ in range(max_iter):
        if idx.size == 0:
            break
        fx = -x * np.log(x) - (1.0 - x) * np.log1p(-x) - uu
        exact = fx == 0.0
        neg = fx < 0.0
        lo = np.where(neg & ~exact, x, lo)
        hi = np.where(~neg & ~exact, x, hi)
        width_done = (hi - lo) <= tol
        d = np.log1p(-x) - np.log(x)
        xn_raw = x - fx / d
        inside = (xn_raw > lo) & (xn_raw < hi)
        step_done = inside & (np.abs(xn_raw - x) <= tol)
        xn = np.where(inside, xn_raw, 0.5 * (lo + hi))
        stalled = xn == x
        done = exact | width_done | step_done | stalled
        if done.any():
            # same priority as the scalar loop: exact, width, step, stall
            result = np.where(exact, x,
                              np.where(width_done, 0.5 * (lo + hi),
                                       np.where(step_done, xn_raw, x)))
            out[idx[done]] = result[done]
            keep = ~done
            idx, uu, x, lo, hi = idx[keep], uu[keep], xn[keep], lo[keep], hi[keep]
        else:
            x = xn
    if idx.size:
        raise RuntimeError(f"entropy inverse did not converge for {idx.size} points")
    return out.reshape(u.shape)


def split_entropy_scalar(t):
    """H(t/2) + H((1-t)/2) in nats."""
    return entropy_scalar(0.5 * t) + entropy_scalar(0.5 * (1.0 - t))


def split_entropy_array(t):
    t = np.asarray(t, dtype=np.float64)
    return entropy_array(0.5 * t) + entropy_array(0.5 * (1.0 - t))


def split_entropy_inv_scalar(v, tol=1e-13, max_iter=128):
    """Invert the split-entropy curve on [0.06, 0.5] by bisection."""
    lo, hi = SPLIT_INV_LO, SPLIT_INV_HI
    if v <= split_entropy_scalar(lo):
        return lo
    if v >= split_entropy_scalar(hi):
        return hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if split_entropy_scalar(mid) < v:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def split_entropy_inv_array(v, tol=1e-13, max_iter=128):
    v = np.asarray(v, dtype=np.float64)
    flat = v.ravel()
    lo = np.full(flat.shape, SPLIT_INV_LO)
    hi = np.full(flat.shape, SPLIT_INV_HI)
    flo = split_entropy_scalar(SPLIT_INV_LO)
    fhi = split_entropy_scalar(SPLIT_INV_HI)
    done_lo = flat <= flo
    done_hi = flat >= fhi
    for _ in range(max_iter):
        if np.all(hi - lo <= tol):
            break
        mid = 0.5 * (lo + hi)
        below = split_entropy_array(mid) < flat
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    out = 0.5 * (lo + hi)
    out[done_lo] = SPLIT_INV_LO
    out[done_hi] = SPLIT_INV_HI
    return out.reshape(v.shape)


def mgl_gaps(raw, ks, ps, max_support, tol=1e-13, max_iter=256):
    """Gap of the entropy-inverse inequality for a batch of sampled trials.

    ``raw`` is the (trials, 2*max_support+1) matrix of unit uniforms laid out
    as [k-draw | k-1 weight draws | k conditionals | p-draw]; ``ks`` and
    ``ps`` are the decoded support sizes and crossover probabilities.  Returns
    lhs - rhs per trial, where both sides are reduced to the sub-half
    crossover representative.
    """
    raw = np.asarray(raw, dtype=np.float64)
    ks = np.asarray(ks)
    ps = np.asarray(ps, dtype=np.float64)
    trials = raw.shape[0]
    hxu = np.empty(trials)
    hyu = np.empty(trials)
    for k in range(1, max_support + 1):
        rows = np.nonzero(ks == k)[0]
        if rows.size == 0:
            continue
        if k > 1:
            g = np.sort(raw[np.ix_(rows, range(1, k))], axis=1)
            edges = np.concatenate(
                [np.zeros((rows.size, 1)), g, np.ones((rows.size, 1))], axis=1)
            w = np.diff(edges, axis=1)
        else:
            w = np.ones((rows.size, 1))
        x = raw[np.ix_(rows, range(max_support, max_support + k))]
        p = ps[rows][:, None]
        hx = entropy_array(x)
        pt = np.where((p == 0.5) | (x == 0.5), 0.5,
                      p * (1.0 - x) + (1.0 - p) * x)
        hy = entropy_array(pt)
        # a weighted mean lies in the hull of its values; clamp the rounded
        # sum back into it (the inverse is sqrt-sensitive near the flat top,
        # so a 1-ulp excursion would cost ~1e-8 in probability space)
        hxu[rows] = np.clip(np.sum(w * hx, axis=1),
                            hx.min(axis=1), hx.max(axis=1))
        hyu[rows] = np.clip(np.sum(w * hy, axis=1),
                            hy.min(axis=1), hy.max(axis=1))
    a = entropy_inv_array(hxu, tol, max_iter)
    lhs = entropy_inv_array(hyu, tol, max_iter)
    c = np.where((a == 0.5) | (ps == 0.5), 0.5,
                 a * (1.0 - ps) + (1.0 - a) * ps)
    rhs = np.minimum(c, 1.0 - c)
    return lhs - rhs
