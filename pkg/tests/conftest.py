"""Shared oracle helpers for the test suite.

These deliberately avoid the package's own solver paths: the inverse oracle
is plain bisection, and derivative oracles are central finite differences,
so closed forms are always checked against an independent route.
"""

import math


def entropy_nat(x):
    """Direct evaluation of the defining formula, natural log."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log(x) - (1.0 - x) * math.log(1.0 - x)


def bisect_hinv(u, iters=200):
    """Pure-bisection inverse of the natural-base entropy on [0, 1/2]."""
    lo, hi = 0.0, 0.5
    if u <= 0.0:
        return 0.0
    if u >= math.log(2.0):
        return 0.5
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if entropy_nat(mid) < u:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def central_first(f, x, h):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def central_second(f, x, h):
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


def rel_err(a, b, floor=0.0):
    """Relative error with an absolute floor for near-zero comparisons."""
    return abs(a - b) / max(abs(a), abs(b), floor, 1e-300)
