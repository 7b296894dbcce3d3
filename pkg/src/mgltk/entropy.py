"""Binary entropy function, its derivatives, its inverse, and the binary
convolution.

All values can be reported in natural or binary log units; conversion is the
single factor ln(2).  Every function here is a pure function of its inputs.
"""

import enum
import math

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError

LN2 = kernels.LN2

DEFAULT_INV_TOL = 1e-13


class LogBase(enum.Enum):
    """Logarithm base for entropy units: natural (nats) or binary (bits)."""

    NATURAL = "nat"
    BINARY = "bit"

    @property
    def scale(self):
        """Divisor converting natural-base values into this base."""
        return 1.0 if self is LogBase.NATURAL else LN2


def _as_base(base):
    if isinstance(base, LogBase):
        return base
    try:
        return LogBase(base)
    except ValueError:
        raise DomainError(f"unknown log base {base!r}; use 'nat' or 'bit'") from None


def max_entropy(base=LogBase.NATURAL):
    """H(1/2) in the requested base: ln 2 in nats, exactly 1 in bits."""
    return LN2 if _as_base(base) is LogBase.NATURAL else 1.0


def _check_unit(name, v):
    v = float(v)
    if not 0.0 <= v <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {v!r}")
    return v


def _check_open_unit(name, v):
    v = float(v)
    if not 0.0 < v < 1.0:
        raise DomainError(
            f"{name} must lie in the open interval (0, 1), got {v!r} "
            "(logarithmic singularity at the endpoints)")
    return v


def binary_entropy(x, base=LogBase.NATURAL):
    """H(x) = -x log x - (1-x) log(1-x), with 0 log 0 = 0."""
    x = _check_unit("x", x)
    base = _as_base(base)
    h = kernels.entropy_scalar(x)
    return h if base is LogBase.NATURAL else h / LN2


def entropy_first_derivative(x, base=LogBase.NATURAL):
    """dH/dx = log((1-x)/x) on the open interval (0, 1)."""
    x = _check_open_unit("x", x)
    base = _as_base(base)
    d = math.log1p(-x) - math.log(x)
    return d if base is LogBase.NATURAL else d / LN2


def entropy_second_derivative(x, base=LogBase.NATURAL):
    """d2H/dx2 = -1/(x(1-x)) on the open interval (0, 1)."""
    x = _check_open_unit("x", x)
    base = _as_base(base)
    d = -1.0 / (x * (1.0 - x))
    return d if base is LogBase.NATURAL else d / LN2


def binary_entropy_inverse(u, base=LogBase.NATURAL, tol=DEFAULT_INV_TOL):
    """The inverse of H restricted to [0, 1/2].

    ``tol`` bounds both the bracket width and the natural-base residual of
    the safeguarded Newton/bisection iteration, so the returned x satisfies
    |H(x) - u| <= tol in either base.
    """
    base = _as_base(base)
    u = float(u)
    if tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    hmax = max_entropy(base)
    if not 0.0 <= u <= hmax:
        raise DomainError(f"u must lie in [0, {hmax!r}] for base "
                          f"'{base.value}', got {u!r}")
    un = u * LN2 if base is LogBase.BINARY else u
    try:
        return kernels.entropy_inv_scalar(un, tol, 256)
    except RuntimeError as exc:
        raise ConvergenceError(str(exc)) from exc


def convolve(p, x):
    """Binary convolution p*x = p(1-x) + (1-p)x.

    Returns exactly 1/2 whenever either argument equals 1/2.
    """
    p = _check_unit("p", p)
    x = _check_unit("x", x)
    return kernels.convolve_scalar(p, x)


def entropy_values(xs, base=LogBase.NATURAL):
    """Vectorised H over an array of probabilities (validated wholesale)."""
    base = _as_base(base)
    xs = np.asarray(xs, dtype=np.float64)
    bad = ~((xs >= 0.0) & (xs <= 1.0))
    if bad.any():
        raise DomainError(
            f"x must lie in [0, 1], got {xs[bad].flat[0]!r}")
    h = kernels.entropy_array(xs)
    return h if base is LogBase.NATURAL else h / LN2


def entropy_inverse_values(us, base=LogBase.NATURAL, tol=DEFAULT_INV_TOL):
    """Vectorised inverse of H onto [0, 1/2]."""
    base = _as_base(base)
    us = np.asarray(us, dtype=np.float64)
    hmax = max_entropy(base)
    bad = ~((us >= 0.0) & (us <= hmax))
    if bad.any():
        raise DomainError(
            f"u must lie in [0, {hmax!r}] for base '{base.value}', "
            f"got {us[bad].flat[0]!r}")
    un = us * LN2 if base is LogBase.BINARY else us
    try:
        return kernels.entropy_inv_array(un, tol, 256)
    except RuntimeError as exc:
        raise ConvergenceError(str(exc)) from exc
