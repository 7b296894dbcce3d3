"""Curve objects and the composite-convexity machinery.

A curve maps an open interval into [0, 1/2] (probability space).  The central
object is ``MglComposite``: the map u -> H(p * f(u)) whose convexity the
toolkit certifies.  Alongside it live the closed-form margin expressions that
drive the smooth and one-sided convexity arguments.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .entropy import (LN2, DEFAULT_INV_TOL, LogBase, _as_base, binary_entropy,
                      convolve, entropy_values, entropy_inverse_values,
                      max_entropy)
from .errors import DomainError, SingularityError


class SmoothCurve:
    """Function-object contract: value over an open interval plus optional
    first/second derivatives.

    Subclasses set ``domain`` and implement ``value``; derivative methods and
    the vectorised paths have sensible defaults.
    """

    domain = (float("-inf"), float("inf"))

    def check_domain(self, u):
        u = float(u)
        a, b = self.domain
        if not a <= u <= b:
            raise DomainError(f"u={u!r} outside the curve domain ({a!r}, {b!r})")
        return u

    def value(self, u):
        raise NotImplementedError

    def values(self, us):
        return np.array([self.value(float(u)) for u in np.asarray(us).ravel()],
                        dtype=np.float64).reshape(np.shape(us))

    def first_derivative(self, u):
        raise NotImplementedError(f"{type(self).__name__} has no first derivative")

    def second_derivative(self, u):
        raise NotImplementedError(f"{type(self).__name__} has no second derivative")

    def entropy_of_value(self, u, base=LogBase.NATURAL):
        """H(f(u)) in the requested base."""
        return binary_entropy(self.value(u), base)

    def entropy_of_values(self, us, base=LogBase.NATURAL):
        return entropy_values(self.values(us), base)


class EntropyCurve(SmoothCurve):
    """The binary entropy function restricted to (0, 1/2), as a curve.

    Strictly increasing there; feeding it to the inverse-convexity criterion
    recovers the identity map H(H^{-1}(u)) = u, the boundary case where the
    criterion equals 1 exactly.
    """

    def __init__(self, base=LogBase.NATURAL):
        self.base = _as_base(base)
        self.domain = (0.0, 0.5)

    def value(self, x):
        x = self.check_domain(x)
        return binary_entropy(x, self.base)

    def values(self, xs):
        return entropy_values(xs, self.base)

    def first_derivative(self, x):
        x = self.check_domain(x)
        if x <= 0.0:
            raise SingularityError(f"entropy derivative singular at x={x!r}")
        d = math.log1p(-x) - math.log(x)
        return d / (LN2 if self.base is LogBase.BINARY else 1.0)

    def second_derivative(self, x):
        x = self.check_domain(x)
        if x <= 0.0:
            raise SingularityError(f"entropy second derivative singular at x={x!r}")
        d = -1.0 / (x * (1.0 - x))
        return d / (LN2 if self.base is LogBase.BINARY else 1.0)


class EntropyInverseCurve(SmoothCurve):
    """f = the inverse of H restricted to [0, 1/2], as a curve over (0, H(1/2)).

    The composition H(f(u)) is the identity map; ``entropy_of_value`` uses
    that algebraic fact directly, which keeps second differences of the p = 0
    composite free of inversion noise.
    """

    def __init__(self, base=LogBase.NATURAL, tol=DEFAULT_INV_TOL):
        self.base = _as_base(base)
        self.tol = tol
        self.domain = (0.0, max_entropy(self.base))

    def value(self, u):
        u = self.check_domain(u)
        un = u * LN2 if self.base is LogBase.BINARY else u
        return kernels.entropy_inv_scalar(un, self.tol, 256)

    def values(self, us):
        return entropy_inverse_values(us, self.base, self.tol)

    def first_derivative(self, u):
        x = self.value(u)
        if x <= 0.0 or x >= 0.5:
            raise SingularityError(f"derivative of the entropy inverse is "
                                   f"singular at u={u!r}")
        d = math.log1p(-x) - math.log(x)
        if self.base is LogBase.BINARY:
            d /= LN2
        return 1.0 / d

    def second_derivative(self, u):
        x = self.value(u)
        if x <= 0.0 or x >= 0.5:
            raise SingularityError(f"second derivative of the entropy inverse "
                                   f"is singular at u={u!r}")
        d1 = math.log1p(-x) - math.log(x)
        d2 = -1.0 / (x * (1.0 - x))
        if self.base is LogBase.BINARY:
            d1 /= LN2
            d2 /= LN2
        return -d2 / d1 ** 3

    def entropy_of_value(self, u, base=LogBase.NATURAL):
        base = _as_base(base)
        u = self.check_domain(u)
        if base is self.base:
            return u
        return u * LN2 if base is LogBase.BINARY else u / LN2

    def entropy_of_values(self, us, base=LogBase.NATURAL):
        base = _as_base(base)
        us = np.asarray(us, dtype=np.float64)
        a, b = self.domain
        bad = ~((us >= a) & (us <= b))
        if bad.any():
            raise DomainError(f"u={us[bad].flat[0]!r} outside the curve "
                              f"domain ({a!r}, {b!r})")
        if base is self.base:
            return us.copy()
        return us * LN2 if base is LogBase.BINARY else us / LN2


class ConstantCurve(SmoothCurve):
    """A constant value c in [0, 1/2] over an arbitrary interval."""

    def __init__(self, c, domain=(0.0, 1.0)):
        c = float(c)
        if not 0.0 <= c <= 0.5:
            raise DomainError(f"constant curve value must lie in [0, 1/2], got {c!r}")
        self.c = c
        self.domain = (float(domain[0]), float(domain[1]))

    def value(self, u):
        self.check_domain(u)
        return self.c

    def values(self, us):
        return np.full(np.shape(us), self.c)

    def first_derivative(self, u):
        self.check_domain(u)
        return 0.0

    def second_derivative(self, u):
        self.check_domain(u)
        return 0.0


class FlooredCurve(SmoothCurve):
    """Pointwise maximum of a curve and a constant floor in [0, 1/2].

    Since H is increasing on [0, 1/2], H(max(f, c)) = max(H(f), H(c)); the
    entropy composition uses that identity so the flat region stays exactly
    flat.
    """

    def __init__(self, curve, floor):
        floor = float(floor)
        if not 0.0 <= floor <= 0.5:
            raise DomainError(f"floor must lie in [0, 1/2], got {floor!r}")
        self.curve = curve
        self.floor = floor
        self.domain = curve.domain

    def value(self, u):
        return max(self.curve.value(u), self.floor)

    def values(self, us):
        return np.maximum(self.curve.values(us), self.floor)

    def entropy_of_value(self, u, base=LogBase.NATURAL):
        return max(self.curve.entropy_of_value(u, base),
                   binary_entropy(self.floor, base))

    def entropy_of_values(self, us, base=LogBase.NATURAL):
        return np.maximum(self.curve.entropy_of_values(us, base),
                          binary_entropy(self.floor, base))


class PiecewiseLinearCurve:
    """Piecewise-linear curve given by breakpoints (u, value) with values in
    [0, 1/2].

    One-sided derivatives are the exact segment slopes.  Convexity is *not*
    enforced at construction; certifying it is what
    ``right_derivative_monotonicity_check`` is for.
    """

    def __init__(self, breakpoints):
        pts = [(float(u), float(v)) for u, v in breakpoints]
        if len(pts) < 2:
            raise DomainError("a piecewise-linear curve needs at least two breakpoints")
        us = [u for u, _ in pts]
        if any(b <= a for a, b in zip(us, us[1:])):
            raise DomainError("breakpoint abscissae must be strictly increasing")
        if any(not 0.0 <= v <= 0.5 for _, v in pts):
            raise DomainError("breakpoint values must lie in [0, 1/2]")
        self.breakpoints = tuple(pts)
        self._us = np.array(us)
        self._vs = np.array([v for _, v in pts])
        self.slopes = tuple(
            (v2 - v1) / (u2 - u1)
            for (u1, v1), (u2, v2) in zip(pts, pts[1:]))
        self.domain = (us[0], us[-1])

    @classmethod
    def from_text(cls, text):
        """Parse breakpoints from text: one "u,value" pair per line,
        '#' comments and blank lines allowed."""
        pts = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = body.split(",")
            if len(parts) != 2:
                raise DomainError(
                    f"line {lineno}: expected 'u,value', got {line.strip()!r}")
            try:
                pts.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise DomainError(
                    f"line {lineno}: could not parse numbers in {line.strip()!r}"
                ) from None
        return cls(pts)

    @classmethod
    def from_file(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def value(self, u):
        u = float(u)
        a, b = self.domain
        if not a <= u <= b:
            raise DomainError(f"u={u!r} outside the curve domain [{a!r}, {b!r}]")
        return float(np.interp(u, self._us, self._vs))

    def values(self, us):
        us = np.asarray(us, dtype=np.float64)
        a, b = self.domain
        bad = ~((us >= a) & (us <= b))
        if bad.any():
            raise DomainError(f"u={us[bad].flat[0]!r} outside the curve "
                              f"domain [{a!r}, {b!r}]")
        return np.interp(us, self._us, self._vs)

    def _segment_right(self, u):
        """Index of the segment to the right of u (breakpoints belong to the
        segment that starts there)."""
        i = int(np.searchsorted(self._us, u, side="right")) - 1
        return min(max(i, 0), len(self.slopes) - 1)

    def right_derivative(self, u):
        u = float(u)
        a, b = self.domain
        if not a <= u < b:
            raise DomainError(
                f"right derivative undefined at u={u!r} (domain [{a!r}, {b!r}]))")
        return self.slopes[self._segment_right(u)]

    def left_derivative(self, u):
        u = float(u)
        a, b = self.domain
        if not a < u <= b:
            raise DomainError(
                f"left derivative undefined at u={u!r} (domain [{a!r}, {b!r}]))")
        i = int(np.searchsorted(self._us, u, side="left")) - 1
        return self.slopes[min(max(i, 0), len(self.slopes) - 1)]

    def entropy_of_value(self, u, base=LogBase.NATURAL):
        return binary_entropy(self.value(u), base)

    def entropy_of_values(self, us, base=LogBase.NATURAL):
        return entropy_values(self.values(us), base)


@dataclass(frozen=True)
class MglComposite:
    """The map u -> H(p * f(u)) for a curve f with values in [0, 1/2].

    At p = 0 the evaluation delegates to the curve's entropy composition,
    which curve classes may implement exactly (the entropy-inverse curve,
    for instance, yields the identity map).
    """

    p: float
    curve: object
    base: LogBase = LogBase.NATURAL

    def __post_init__(self):
        object.__setattr__(self, "base", _as_base(self.base))
        p = float(self.p)
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {p!r}")
        object.__setattr__(self, "p", p)

    @property
    def domain(self):
        return self.curve.domain

    def value(self, u):
        if self.p == 0.0:
            return self.curve.entropy_of_value(u, self.base)
        x = self.curve.value(u)
        return binary_entropy(convolve(self.p, x), self.base)

    def values(self, us):
        if self.p == 0.0:
            return self.curve.entropy_of_values(us, self.base)
        xs = self.curve.values(us)
        h = kernels.entropy_array(kernels.convolve_array(self.p, xs))
        return h if self.base is LogBase.NATURAL else h / LN2

    def second_derivative(self, u):
        """Closed-form second derivative for twice-differentiable curves:

            -((1-2p) f')^2 / ((1-p*f)(p*f)) + (1-2p) f'' log((1-p*f)/(p*f))

        scaled to the composite's log base.  Valid for any p in [0, 1] (the
        symmetry about p = 1/2 is a property of the formula, not a branch).
        """
        x = self.curve.value(u)
        pf = convolve(self.p, x)
        if pf <= 0.0 or pf >= 1.0:
            raise SingularityError(
                f"composite second derivative singular: p*f(u) = {pf!r}")
        d1 = self.curve.first_derivative(u)
        d2 = self.curve.second_derivative(u)
        q = 1.0 - 2.0 * self.p
        val = (-(q * d1) ** 2 / ((1.0 - pf) * pf)
               + q * d2 * (math.log1p(-pf) - math.log(pf)))
        return val if self.base is LogBase.NATURAL else val / LN2

    def right_derivative(self, u):
        """One-sided derivative (1-2p) f'+(u) log((1-p*f)/(p*f)) for curves
        exposing exact right derivatives."""
        x = self.curve.value(u)
        pf = convolve(self.p, x)
        if pf <= 0.0 or pf >= 1.0:
            raise SingularityError(
                f"composite right derivative singular: p*f(u) = {pf!r}")
        m = self.curve.right_derivative(u)
        val = (1.0 - 2.0 * self.p) * m * (math.log1p(-pf) - math.log(pf))
        return val if self.base is LogBase.NATURAL else val / LN2


def smooth_convexity_margin(f, u, p):
    """Margin certifying convexity of H(p*f(u)) for smooth curves:

        -(1-2p) f'(u)^2 + (1-p*f)(p*f) f''(u) log((1-p*f)/(p*f))

    (natural log).  Shares its sign with the composite second derivative for
    p < 1/2, vanishes identically at p = 1/2, and is concave in p; that
    concavity is the core of the smooth convexity argument.
    """
    p = float(p)
    if not 0.0 <= p <= 0.5:
        raise DomainError(f"p must lie in [0, 1/2], got {p!r}")
    x = f.value(u)
    pf = convolve(p, x)
    if pf <= 0.0 or pf >= 1.0:
        raise SingularityError(f"margin singular: p*f(u) = {pf!r}")
    d1 = f.first_derivative(u)
    d2 = f.second_derivative(u)
    return (-(1.0 - 2.0 * p) * d1 * d1
            + (1.0 - pf) * pf * d2 * (math.log1p(-pf) - math.log(pf)))


def weighted_log_ratio(x):
    """The auxiliary curve x(1-x) log((1-x)/x) and its two derivatives.

    Returns (value, first, second); concave on [0, 1/2], which is what makes
    the margin above concave in p.
    """
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x!r}")
    ratio = math.log1p(-x) - math.log(x)
    value = x * (1.0 - x) * ratio
    first = (1.0 - 2.0 * x) * ratio - 1.0
    second = -2.0 * ratio - (1.0 - 2.0 * x) / (x * (1.0 - x))
    return value, first, second


def onesided_convexity_margin(f, u0, u1, p):
    """Margin for non-smooth convex curves, built from exact one-sided
    derivatives:

        (f'+(u1) - f'+(u0)) (p*f(u0))(1-p*f(u0)) log((1-p*f(u0))/(p*f(u0)))
        - (1-2p) f'+(u0) f'+(u1) (u1 - u0)

    Vanishes identically at p = 1/2 and is concave in p.
    """
    u0, u1 = float(u0), float(u1)
    if not u0 < u1:
        raise DomainError(f"need u0 < u1, got u0={u0!r}, u1={u1!r}")
    p = float(p)
    if not 0.0 <= p <= 0.5:
        raise DomainError(f"p must lie in [0, 1/2], got {p!r}")
    m0 = f.right_derivative(u0)
    m1 = f.right_derivative(u1)
    pf = convolve(p, f.value(u0))
    if pf <= 0.0 or pf >= 1.0:
        raise SingularityError(f"margin singular: p*f(u0) = {pf!r}")
    ratio = math.log1p(-pf) - math.log(pf)
    return (m1 - m0) * pf * (1.0 - pf) * ratio - (1.0 - 2.0 * p) * m0 * m1 * (u1 - u0)


def invert_increasing(fn, lo, hi, target, tol=1e-13, max_iter=200):
    """Bisection for a strictly increasing scalar function on [lo, hi]."""
    flo, fhi = fn(lo), fn(hi)
    if not flo <= fhi:
        raise DomainError("function is not increasing on the bracket")
    if not flo <= target <= fhi:
        raise DomainError(
            f"target {target!r} outside the function range [{flo!r}, {fhi!r}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if fn(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def inverse_convexity_criterion(f, u, tol=1e-13):
    """Criterion for convexity of H(f^{-1}(u)) at a point u in the range of a
    strictly increasing smooth curve f:

        -t(1-t) (f''(t)/f'(t)) log((1-t)/t)   with t = f^{-1}(u)

    (natural log; the value is independent of the entropy unit).  Convexity
    holds at u if and only if the criterion is >= 1.  Requires t in (0, 1/2)
    and f'(t) > 0.
    """
    a, b = f.domain
    span = b - a
    # open domains may be singular at the ends; inset defensively if so
    lo, hi = a, b
    try:
        f.value(lo)
    except (DomainError, ValueError, ZeroDivisionError):
        lo = a + 1e-12 * span
    try:
        f.value(hi)
    except (DomainError, ValueError, ZeroDivisionError):
        hi = b - 1e-12 * span
    t = invert_increasing(f.value, lo, hi, float(u), tol)
    if not 0.0 < t < 0.5:
        raise DomainError(
            f"criterion defined only for f^-1(u) in (0, 1/2); got t={t!r}")
    d1 = f.first_derivative(t)
    if d1 == 0.0:
        raise SingularityError(f"f' vanishes at t={t!r}")
    if d1 < 0.0:
        raise DomainError(f"criterion requires strictly increasing f; "
                          f"f'({t!r}) = {d1!r} < 0")
    d2 = f.second_derivative(t)
    return -t * (1.0 - t) * (d2 / d1) * (math.log1p(-t) - math.log(t))
