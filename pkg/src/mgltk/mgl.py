"""Brute-force verification of the entropy-inverse inequality for binary
symmetric channels over finite joint distributions.

For X Bernoulli conditioned on a finite U, Z ~ Bern(p) independent, and
Y = X xor Z, the inequality states

    Hinv(H(Y|U)) >= Hinv(H(X|U)) * p

where both sides are reduced to the sub-half crossover representative (the
convolution of a value <= 1/2 with p > 1/2 lands above 1/2; its mirror
1 - c describes the same channel, which is what makes the inequality
symmetric under p -> 1-p).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .entropy import (DEFAULT_INV_TOL, LogBase, _as_base, binary_entropy,
                      binary_entropy_inverse, convolve)
from .errors import DomainError

# A reported gap below this is a violation: budget for two numeric
# inversions plus summation error.
VIOLATION_TOL = -1e-9


@dataclass(frozen=True)
class JointDistribution:
    """Finite joint law of (X, U): weights over U plus conditional Bernoulli
    parameters P(X=1 | U=i)."""

    weights: tuple
    conditionals: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        c = tuple(float(x) for x in self.conditionals)
        if len(w) == 0 or len(w) != len(c):
            raise DomainError("weights and conditionals must be equal-length, "
                              f"nonempty; got {len(w)} and {len(c)}")
        if any(x < 0.0 for x in w):
            raise DomainError("weights must be nonnegative")
        total = math.fsum(w)
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"weights must sum to 1 (within 1e-12), got {total!r}")
        if any(not 0.0 <= x <= 1.0 for x in c):
            raise DomainError("conditionals must lie in [0, 1]")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "conditionals", c)

    @property
    def support(self):
        return len(self.weights)


@dataclass(frozen=True)
class MglTrialResult:
    """One inequality evaluation: lhs = Hinv(H(Y|U)), rhs = the sub-half
    representative of Hinv(H(X|U)) * p, gap = lhs - rhs (>= 0 is the claim)."""

    lhs: float
    rhs: float
    gap: float


def _weighted_mean_entropy(weights, values):
    # clamp the rounded sum into the hull of its values: the true mean lies
    # there, and the entropy inverse is sqrt-sensitive near its flat top
    total = math.fsum(w * h for w, h in zip(weights, values))
    return min(max(total, min(values)), max(values))


def conditional_entropy_input(d, base=LogBase.NATURAL):
    """H(X|U) = sum_i w_i H(x_i)."""
    return _weighted_mean_entropy(
        d.weights, [binary_entropy(x, base) for x in d.conditionals])


def conditional_entropy_output(d, p, base=LogBase.NATURAL):
    """H(Y|U) = sum_i w_i H(p * x_i): conditionally on U=i, Y ~ Bern(p*x_i)."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    return _weighted_mean_entropy(
        d.weights, [binary_entropy(convolve(p, x), base)
                    for x in d.conditionals])


def mgl_gap(d, p, base=LogBase.NATURAL, tol=DEFAULT_INV_TOL):
    """Evaluate both sides of the inequality for one distribution."""
    base = _as_base(base)
    lhs = binary_entropy_inverse(conditional_entropy_output(d, p, base), base, tol)
    a = binary_entropy_inverse(conditional_entropy_input(d, base), base, tol)
    c = convolve(a, p)
    rhs = min(c, 1.0 - c)
    return MglTrialResult(lhs=lhs, rhs=rhs, gap=lhs - rhs)


@dataclass(frozen=True)
class MglBatchSummary:
    """Outcome of a randomized batch: violation count, the worst trial, and
    enough metadata to replay it byte-for-byte."""

    trials: int
    max_support: int
    p_mode: str
    seed: int
    base: LogBase
    violations: int
    min_gap: float
    argmin_index: int
    argmin_distribution: JointDistribution
    argmin_p: float

    def argmin_line(self):
        w = ",".join(repr(x) for x in self.argmin_distribution.weights)
        x = ",".join(repr(x) for x in self.argmin_distribution.conditionals)
        return f"w: {w}; x: {x}; p: {self.argmin_p!r}; gap: {self.min_gap!r}"


def _raw_matrix(trials, max_support, seed):
    """Unit uniforms, one fixed-stride row per trial, from a counter-based
    generator so any single trial can be re-derived from (seed, index)."""
    gen = np.random.Generator(np.random.Philox(key=seed))
    return gen.random((trials, 2 * max_support + 1))


def _decode_trial(row, max_support):
    """Reconstruct (weights, conditionals, p_draw) from one raw row."""
    k = 1 + min(int(row[0] * max_support), max_support - 1)
    if k > 1:
        g = np.sort(row[1:k])
        w = np.diff(np.concatenate([[0.0], g, [1.0]]))
    else:
        w = np.ones(1)
    x = row[max_support:max_support + k]
    return w, x, float(row[2 * max_support])


def verify_mgl_batch(trials, max_support=8, p="random", seed=0,
                     base=LogBase.NATURAL, tol=DEFAULT_INV_TOL):
    """Run ``trials`` random joint distributions through the inequality.

    Sampling per trial: support size uniform on 1..max_support, weights
    uniform on the simplex (gaps of sorted uniforms), conditionals uniform on
    [0, 1], and p uniform on [0, 1] when p="random".  Deterministic given
    ``seed``.  The gap itself is a probability-space quantity, so the log
    base cancels; it is recorded for reporting only.
    """
    base = _as_base(base)
    trials = int(trials)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials!r}")
    max_support = int(max_support)
    if max_support < 1:
        raise DomainError(f"max_support must be >= 1, got {max_support!r}")
    raw = _raw_matrix(trials, max_support, seed)
    ks = 1 + np.minimum((raw[:, 0] * max_support).astype(np.int64),
                        max_support - 1)
    if p == "random":
        ps = raw[:, 2 * max_support].copy()
        p_mode = "random"
    else:
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {p!r}")
        ps = np.full(trials, p)
        p_mode = repr(p)
    gaps = kernels.mgl_gaps(raw, ks, ps, max_support, tol, 256)
    violations = int(np.count_nonzero(gaps < VIOLATION_TOL))
    i_min = int(np.argmin(gaps))
    w, x, _ = _decode_trial(raw[i_min], max_support)
    argmin = JointDistribution(tuple(w), tuple(x))
    return MglBatchSummary(
        trials=trials, max_support=max_support, p_mode=p_mode, seed=int(seed),
        base=base, violations=violations, min_gap=float(gaps[i_min]),
        argmin_index=i_min, argmin_distribution=argmin,
        argmin_p=float(ps[i_min]))
