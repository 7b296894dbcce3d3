import math

import pytest

from conftest import entropy_nat
from mgltk import (DomainError, EntropyInverseCurve, JointDistribution,
                   LogBase, MglComposite, binary_entropy,
                   binary_entropy_inverse, conditional_entropy_input,
                   conditional_entropy_output, mgl_gap, verify_mgl_batch)

LN2 = math.log(2.0)


def test_distribution_validation():
    JointDistribution((0.5, 0.5), (0.1, 0.9))
    with pytest.raises(DomainError):
        JointDistribution((), ())
    with pytest.raises(DomainError):
        JointDistribution((0.5, 0.6), (0.1, 0.9))
    with pytest.raises(DomainError):
        JointDistribution((-0.1, 1.1), (0.1, 0.9))
    with pytest.raises(DomainError):
        JointDistribution((0.5, 0.5), (0.1, 1.9))
    with pytest.raises(DomainError):
        JointDistribution((0.5, 0.5), (0.1,))


def test_conditional_entropy_input_examples():
    assert conditional_entropy_input(
        JointDistribution((1.0,), (0.5,))) == pytest.approx(LN2, abs=0)
    assert conditional_entropy_input(
        JointDistribution((0.5, 0.5), (0.0, 1.0))) == 0.0
    d = JointDistribution((0.2, 0.3, 0.5), (0.1, 0.2, 0.3))
    expected = (0.2 * entropy_nat(0.1) + 0.3 * entropy_nat(0.2)
                + 0.5 * entropy_nat(0.3))
    assert conditional_entropy_input(d) == pytest.approx(expected, abs=1e-15)
    assert conditional_entropy_input(d, LogBase.BINARY) == pytest.approx(
        expected / LN2, abs=1e-15)


def test_conditional_entropy_output_examples():
    d = JointDistribution((0.4, 0.6), (0.1, 0.3))
    assert conditional_entropy_output(d, 0.0) == pytest.approx(
        conditional_entropy_input(d), abs=0)
    assert conditional_entropy_output(d, 0.5) == pytest.approx(LN2, abs=0)
    expected = (0.4 * entropy_nat(0.11 * 0.9 + 0.89 * 0.1)
                + 0.6 * entropy_nat(0.11 * 0.7 + 0.89 * 0.3))
    assert conditional_entropy_output(d, 0.11) == pytest.approx(expected, abs=1e-15)


def test_gap_equality_for_deterministic_u():
    res = mgl_gap(JointDistribution((1.0,), (0.2,)), 0.1)
    assert res.lhs == pytest.approx(0.26, abs=1e-12)
    assert res.rhs == pytest.approx(0.26, abs=1e-12)
    assert abs(res.gap) <= 1e-9


def test_gap_zero_at_p_zero():
    for conds in [(0.1, 0.4), (0.25, 0.25, 0.7)]:
        w = tuple(1.0 / len(conds) for _ in conds)
        res = mgl_gap(JointDistribution(w, conds), 0.0)
        assert abs(res.gap) <= 1e-12


def test_gap_strictly_positive_for_heterogeneous_conditionals():
    res = mgl_gap(JointDistribution((0.5, 0.5), (0.05, 0.45)), 0.11)
    assert res.gap > 1e-4


def test_gap_equality_cases_at_any_p():
    # constant conditionals keep the inequality tight for every p, including
    # p above one half (the sub-half fold)
    for p in (0.1, 0.5, 0.9):
        res = mgl_gap(JointDistribution((0.3, 0.7), (0.2, 0.2)), p)
        assert abs(res.gap) <= 1e-9


def test_gap_symmetry_under_p_reflection():
    d = JointDistribution((0.4, 0.6), (0.15, 0.35))
    for p in (0.1, 0.3, 0.45):
        a = mgl_gap(d, p).gap
        b = mgl_gap(d, 1.0 - p).gap
        assert a == pytest.approx(b, abs=2e-12)


def test_gap_symmetry_under_joint_conditional_flip():
    d1 = JointDistribution((0.4, 0.6), (0.15, 0.35))
    d2 = JointDistribution((0.4, 0.6), (0.85, 0.65))
    for p in (0.1, 0.45, 0.8):
        assert mgl_gap(d1, p).gap == pytest.approx(mgl_gap(d2, p).gap, abs=2e-12)


def test_lhs_agrees_with_jensen_route():
    # apply the composite curve to the per-symbol entropies and invert:
    # the two routes to the lhs agree
    d = JointDistribution((0.2, 0.3, 0.5), (0.1, 0.6, 0.33))
    for p in (0.07, 0.3, 0.9):
        res = mgl_gap(d, p)
        comp = MglComposite(p, EntropyInverseCurve())
        mean = math.fsum(w * comp.value(binary_entropy(x))
                         for w, x in zip(d.weights, d.conditionals))
        lhs2 = binary_entropy_inverse(mean)
        assert abs(res.lhs - lhs2) <= 1e-10


def test_gap_nonneg_implied_by_composite_convexity():
    # midpoint Jensen on the composite curve: direct numerical link between
    # the scan machinery and the inequality
    comp = MglComposite(0.11, EntropyInverseCurve())
    u1, u2 = binary_entropy(0.05), binary_entropy(0.45)
    assert comp.value(0.5 * (u1 + u2)) <= 0.5 * (comp.value(u1) + comp.value(u2)) + 1e-12


def test_batch_zero_violations_seeded():
    summary = verify_mgl_batch(100000, max_support=8, p="random", seed=42)
    assert summary.violations == 0
    assert summary.min_gap > -1e-9
    assert summary.trials == 100000


def test_batch_single_trial_support_one_is_equality():
    summary = verify_mgl_batch(1, max_support=1, seed=3)
    assert summary.violations == 0
    assert abs(summary.min_gap) <= 1e-9
    assert summary.argmin_distribution.support == 1


def test_batch_fixed_half_p():
    summary = verify_mgl_batch(1000, max_support=4, p=0.5, seed=7)
    assert summary.violations == 0
    assert abs(summary.min_gap) <= 1e-9  # lhs = rhs = 1/2 exactly


def test_batch_deterministic_given_seed():
    a = verify_mgl_batch(2000, max_support=6, p="random", seed=11)
    b = verify_mgl_batch(2000, max_support=6, p="random", seed=11)
    assert a.min_gap == b.min_gap
    assert a.argmin_index == b.argmin_index
    assert a.argmin_distribution == b.argmin_distribution
    c = verify_mgl_batch(2000, max_support=6, p="random", seed=12)
    assert c.min_gap != a.min_gap


def test_batch_argmin_is_replayable():
    # scalar replay of the batch's worst trial; the two paths differ only by
    # summation order and log rounding
    summary = verify_mgl_batch(5000, max_support=8, p="random", seed=19)
    res = mgl_gap(summary.argmin_distribution, summary.argmin_p)
    assert res.gap == pytest.approx(summary.min_gap, abs=5e-12)
    line = summary.argmin_line()
    assert line.startswith("w: ") and "; x: " in line and "; p: " in line \
        and "; gap: " in line


def test_batch_argument_validation():
    with pytest.raises(DomainError):
        verify_mgl_batch(0)
    with pytest.raises(DomainError):
        verify_mgl_batch(10, max_support=0)
    with pytest.raises(DomainError):
        verify_mgl_batch(10, p=1.5)
