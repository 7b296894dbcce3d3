"""The split-entropy application curve f(t) = H(t/2) + H((1-t)/2), the l/r
inequality machinery that accompanies it, and the associated convexity scans
and figure data.

The curve is strictly increasing on (0, 1/2] with f'(1/2) = 0; its inverse is
taken on the window [0.06, 0.5].  The inequality under scrutiny is

    l(t) = (1-t)(2-t) log((2-t)/(t+1))  <=  r(t) = (7t - 5t^2) log((1-t)/t)

on that window, with l convex and r concave there.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .convexity import DEFAULT_TOLERANCE, GridSpec, second_difference_scan
from .curves import MglComposite, SmoothCurve
from .entropy import DEFAULT_INV_TOL, LogBase, _as_base
from .errors import DomainError

T_WINDOW_LO = kernels.SPLIT_INV_LO  # 0.06
T_WINDOW_HI = kernels.SPLIT_INV_HI  # 0.5


class SplitEntropyCurve(SmoothCurve):
    """f(t) = H(t/2) + H((1-t)/2) on (0, 1/2], in the requested base.

    f(0+) = H(1/2), f(1/2) = 2 H(1/4); f' > 0 on (0, 1/2) and f'(1/2) = 0.
    """

    def __init__(self, base=LogBase.NATURAL):
        self.base = _as_base(base)
        self.domain = (0.0, 0.5)

    def check_domain(self, t):
        t = float(t)
        if not 0.0 < t <= 0.5:
            raise DomainError(f"t must lie in (0, 1/2], got {t!r}")
        return t

    def value(self, t):
        t = self.check_domain(t)
        return kernels.split_entropy_scalar(t) / self.base.scale

    def values(self, ts):
        ts = np.asarray(ts, dtype=np.float64)
        bad = ~((ts > 0.0) & (ts <= 0.5))
        if bad.any():
            raise DomainError(f"t must lie in (0, 1/2], got {ts[bad].flat[0]!r}")
        return kernels.split_entropy_array(ts) / self.base.scale

    def first_derivative(self, t):
        t = self.check_domain(t)
        half = 0.5 * t
        other = 0.5 * (1.0 - t)
        d = 0.5 * ((math.log1p(-half) - math.log(half))
                   - (math.log1p(-other) - math.log(other)))
        return d / self.base.scale

    def second_derivative(self, t):
        t = self.check_domain(t)
        d = -1.0 / (t * (2.0 - t)) - 1.0 / ((1.0 - t) * (1.0 + t))
        return d / self.base.scale

    def triple(self, t):
        """(value, first derivative, second derivative) at t."""
        return (self.value(t), self.first_derivative(t),
                self.second_derivative(t))

    def inverse(self, v, tol=DEFAULT_INV_TOL):
        """t = f^{-1}(v) on [0.06, 0.5], by bisection."""
        v = float(v)
        lo, hi = self.value(T_WINDOW_LO), self.value(T_WINDOW_HI)
        if not lo <= v <= hi:
            raise DomainError(
                f"v must lie in [f(0.06), f(0.5)] = [{lo!r}, {hi!r}], got {v!r}")
        return kernels.split_entropy_inv_scalar(v * self.base.scale, tol, 128)

    def inverse_values(self, vs, tol=DEFAULT_INV_TOL):
        vs = np.asarray(vs, dtype=np.float64)
        lo, hi = self.value(T_WINDOW_LO), self.value(T_WINDOW_HI)
        bad = ~((vs >= lo) & (vs <= hi))
        if bad.any():
            raise DomainError(
                f"v must lie in [f(0.06), f(0.5)] = [{lo!r}, {hi!r}], "
                f"got {vs[bad].flat[0]!r}")
        return kernels.split_entropy_inv_array(vs * self.base.scale, tol, 128)


class SplitEntropyInverseCurve(SmoothCurve):
    """t = f^{-1}(u) on [f(0.06), f(0.5)], as a curve with values in
    [0.06, 0.5] (a valid input to the composite machinery)."""

    def __init__(self, base=LogBase.NATURAL, tol=DEFAULT_INV_TOL):
        self.base = _as_base(base)
        self.tol = tol
        self._fwd = SplitEntropyCurve(base)
        self.domain = (self._fwd.value(T_WINDOW_LO), self._fwd.value(T_WINDOW_HI))

    def value(self, u):
        u = self.check_domain(u)
        return self._fwd.inverse(u, self.tol)

    def values(self, us):
        return self._fwd.inverse_values(us, self.tol)

    def first_derivative(self, u):
        t = self.value(u)
        d1 = self._fwd.first_derivative(t)
        if d1 == 0.0:
            raise DomainError(f"inverse curve derivative singular at u={u!r} "
                              "(the forward derivative vanishes at t=1/2)")
        return 1.0 / d1

    def second_derivative(self, u):
        t = self.value(u)
        d1 = self._fwd.first_derivative(t)
        if d1 == 0.0:
            raise DomainError(f"inverse curve derivative singular at u={u!r} "
                              "(the forward derivative vanishes at t=1/2)")
        return -self._fwd.second_derivative(t) / d1 ** 3


def _check_t(t):
    t = float(t)
    if not 0.0 < t < 1.0:
        raise DomainError(f"t must lie in (0, 1), got {t!r}")
    return t


def inequality_lhs(t, base=LogBase.NATURAL):
    """l(t) = (1-t)(2-t) log((2-t)/(t+1)) and its second derivative

        l'' = 2 log((2-t)/(1+t)) + 3(3-2t)/((1+t)(2-t)) + 6/(1+t)^2

    (convex on the window: l'' >= 0 there).  Returns (value, second)."""
    t = _check_t(t)
    base = _as_base(base)
    ratio = math.log(2.0 - t) - math.log1p(t)
    value = (1.0 - t) * (2.0 - t) * ratio
    second = (2.0 * ratio + 3.0 * (3.0 - 2.0 * t) / ((1.0 + t) * (2.0 - t))
              + 6.0 / (1.0 + t) ** 2)
    return value / base.scale, second / base.scale


def inequality_rhs(t, base=LogBase.NATURAL):
    """r(t) = (7t - 5t^2) log((1-t)/t) and its second derivative

        r'' = -10 log((1-t)/t) - (7-10t)/((1-t)t) - 2/(1-t)^2

    (concave on the window: r'' <= 0 there).  Returns (value, second)."""
    t = _check_t(t)
    base = _as_base(base)
    ratio = math.log1p(-t) - math.log(t)
    value = (7.0 * t - 5.0 * t * t) * ratio
    second = (-10.0 * ratio - (7.0 - 10.0 * t) / ((1.0 - t) * t)
              - 2.0 / (1.0 - t) ** 2)
    return value / base.scale, second / base.scale


def claim1_grid(base=LogBase.NATURAL, points=2001):
    """The u-grid [f(0.06), f(0.5)] used by the composite scans."""
    fwd = SplitEntropyCurve(base)
    return GridSpec(fwd.value(T_WINDOW_LO), fwd.value(T_WINDOW_HI), points)


def claim1_verify(p_grid=None, u_points=2001, tolerance=DEFAULT_TOLERANCE,
                  base=LogBase.NATURAL, tol=DEFAULT_INV_TOL):
    """Scan H(p * f^{-1}(u)) for convexity on [f(0.06), f(0.5)], for each p.

    ``p_grid`` defaults to 21 values 0, 0.025, ..., 0.5.  Returns the list of
    (p, report) pairs; callers judge the verdicts (no hypothesis is enforced
    here; reporting what the scan finds is the point).
    """
    base = _as_base(base)
    if p_grid is None:
        p_grid = GridSpec(0.0, 0.5, 21)
    ps = p_grid.array() if isinstance(p_grid, GridSpec) else np.asarray(p_grid)
    u_grid = claim1_grid(base, u_points)
    curve = SplitEntropyInverseCurve(base, tol)
    reports = []
    for p in ps:
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {p!r}")
        reports.append((p, second_difference_scan(
            MglComposite(p, curve, base), u_grid, tolerance)))
    return reports


@dataclass(frozen=True)
class InequalityScanResult:
    min_slack: float
    argmin: float
    grid: GridSpec


def inequality_scan(t_grid=None, base=LogBase.NATURAL):
    """Minimum of r(t) - l(t) over a grid of the window [0.06, 0.5].

    The slack is concave (r concave minus l convex), so its minimum sits at
    an endpoint of the window; the scan reports whatever it finds.
    """
    base = _as_base(base)
    if t_grid is None:
        t_grid = GridSpec(T_WINDOW_LO, T_WINDOW_HI, 4401)
    ts = t_grid.array()
    slack = np.array([inequality_rhs(t, base)[0] - inequality_lhs(t, base)[0]
                      for t in ts])
    i = int(np.argmin(slack))
    return InequalityScanResult(min_slack=float(slack[i]), argmin=float(ts[i]),
                                grid=t_grid)


def figure1_rows(t_step=0.001, base=LogBase.BINARY):
    """Rows (t, l(t), r(t)) for t from 0.06 to 0.5 inclusive."""
    t_step = float(t_step)
    if not 0.0 < t_step <= 0.01:
        raise DomainError(f"t_step must lie in (0, 0.01], got {t_step!r}")
    base = _as_base(base)
    n = int(math.floor((T_WINDOW_HI - T_WINDOW_LO) / t_step + 1e-9))
    ts = T_WINDOW_LO + np.arange(n + 1) * t_step
    if abs(ts[-1] - T_WINDOW_HI) <= 1e-9:
        ts[-1] = T_WINDOW_HI
    else:
        ts = np.append(ts, T_WINDOW_HI)
    return [(float(t), inequality_lhs(t, base)[0], inequality_rhs(t, base)[0])
            for t in ts]


def write_figure1(fh, t_step=0.001, base=LogBase.BINARY):
    """Write the figure table as CSV (header t,l,r; 17 significant digits).

    ``fh`` is a writable text handle.  Returns the number of data rows.
    """
    rows = figure1_rows(t_step, base)
    fh.write("t,l,r\n")
    for t, l, r in rows:
        fh.write(f"{t:.17g},{l:.17g},{r:.17g}\n")
    return len(rows)
