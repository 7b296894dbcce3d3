import math

import numpy as np
import pytest

from conftest import bisect_hinv, central_second, entropy_nat, rel_err
from mgltk import (DomainError, EntropyCurve, EntropyInverseCurve,
                   FlooredCurve, LogBase, MglComposite, PiecewiseLinearCurve,
                   SingularityError, SplitEntropyCurve, binary_entropy,
                   convolve, inverse_convexity_criterion,
                   onesided_convexity_margin, smooth_convexity_margin,
                   weighted_log_ratio)

LN2 = math.log(2.0)
HINV = EntropyInverseCurve()


# ---------------------------------------------------------------- composite

def test_composite_identity_at_p_zero():
    comp = MglComposite(0.0, HINV)
    for u in (0.05, 0.3, 0.69):
        assert comp.value(u) == u
    us = np.linspace(0.01, 0.6, 40)
    assert np.array_equal(comp.values(us), us)


def test_composite_absorbing_at_half():
    comp = MglComposite(0.5, HINV)
    for u in (0.01, 0.3, 0.6):
        assert comp.value(u) == LN2
    comp_b = MglComposite(0.5, EntropyInverseCurve(LogBase.BINARY), LogBase.BINARY)
    assert comp_b.value(0.77) == 1.0


def test_composite_chain_matches_independent_oracle():
    # H(0.11 * Hinv(0.5)) assembled from the bisection oracle and the
    # defining formulas only
    x = bisect_hinv(0.5)
    expected = entropy_nat(0.11 * (1 - x) + 0.89 * x)
    comp = MglComposite(0.11, HINV)
    assert comp.value(0.5) == pytest.approx(expected, abs=1e-11)


def test_composite_rejects_bad_p_and_domain():
    with pytest.raises(DomainError):
        MglComposite(1.2, HINV)
    comp = MglComposite(0.2, HINV)
    with pytest.raises(DomainError):
        comp.value(0.75)  # above ln 2


def test_composite_range_closure():
    # p <= 1/2 keeps p * f(u) at or below 1/2
    for p in (0.0, 0.2, 0.5):
        for u in np.linspace(0.01, 0.69, 25):
            x = HINV.value(float(u))
            assert convolve(p, x) <= 0.5


# --------------------------------------------- composite second derivative

def test_composite_second_derivative_identity_cases():
    from mgltk import SplitEntropyInverseCurve
    assert abs(MglComposite(0.0, HINV).second_derivative(0.4)) < 1e-12
    f = SplitEntropyInverseCurve()
    for u in (0.2, 0.35, 0.45):
        assert MglComposite(0.5, HINV).second_derivative(u) == 0.0
    for u in (0.83, 0.95, 1.1):
        assert MglComposite(0.5, f).second_derivative(u) == 0.0


def test_composite_second_derivative_matches_finite_differences():
    from mgltk import SplitEntropyInverseCurve
    h = 1e-4
    curves = [HINV, SplitEntropyInverseCurve()]
    for curve in curves:
        a, b = curve.domain
        us = np.linspace(a + 0.05 * (b - a), b - 0.05 * (b - a), 9)
        for p in (0.0, 0.1, 0.2, 0.3, 0.4):
            comp = MglComposite(p, curve)
            for u in us:
                u = float(u)
                closed = comp.second_derivative(u)
                fd = central_second(comp.value, u, h)
                # identity composites are ~0 on both routes; floor the
                # comparison at the finite-difference noise level
                assert abs(closed - fd) <= 1e-4 * max(abs(closed), abs(fd), 1e-5)


def test_composite_second_derivative_symmetric_in_p():
    comp_hi = MglComposite(0.8, HINV)
    comp_lo = MglComposite(0.2, HINV)
    for u in (0.1, 0.3, 0.6):
        assert comp_hi.second_derivative(u) == pytest.approx(
            comp_lo.second_derivative(u), rel=1e-12)


def test_composite_second_derivative_singularity():
    with pytest.raises(SingularityError):
        MglComposite(0.0, EntropyInverseCurve()).second_derivative(0.0)


# ------------------------------------------------------------ margin (g)

def test_margin_zero_at_half():
    for u in (0.1, 0.4, 0.6):
        assert smooth_convexity_margin(HINV, u, 0.5) == 0.0


def test_margin_zero_for_identity():
    for u in (0.1, 0.4, 0.6):
        assert abs(smooth_convexity_margin(HINV, u, 0.0)) < 1e-12


def test_margin_nonnegative_for_entropy_inverse():
    for p in np.linspace(0.0, 0.5, 11):
        for u in np.linspace(0.05, 0.65, 13):
            assert smooth_convexity_margin(HINV, float(u), float(p)) > -1e-12


def test_margin_sign_matches_composite_second_derivative():
    from mgltk import SplitEntropyInverseCurve
    for curve in (HINV, SplitEntropyInverseCurve()):
        a, b = curve.domain
        for u in np.linspace(a + 0.1 * (b - a), b - 0.1 * (b - a), 7):
            u = float(u)
            for p in np.linspace(0.0, 0.5 - 1e-6, 9):
                p = float(p)
                g = smooth_convexity_margin(curve, u, p)
                d2 = MglComposite(p, curve).second_derivative(u)
                pf = convolve(p, curve.value(u))
                # positive-multiplier identity: g = d2 * pf(1-pf)/(1-2p)
                assert g == pytest.approx(d2 * pf * (1 - pf) / (1 - 2 * p),
                                          rel=1e-10, abs=1e-13)


def test_margin_midpoint_concave_in_p():
    from mgltk import SplitEntropyInverseCurve
    for curve in (HINV, SplitEntropyInverseCurve()):
        a, b = curve.domain
        for u in np.linspace(a + 0.1 * (b - a), b - 0.1 * (b - a), 5):
            u = float(u)
            ps = np.linspace(0.0, 0.5, 51)
            vals = [smooth_convexity_margin(curve, u, float(p)) for p in ps]
            for i in range(1, len(vals) - 1):
                assert vals[i] >= 0.5 * (vals[i - 1] + vals[i + 1]) - 1e-12


def test_margin_rejects_p_out_of_half_range():
    with pytest.raises(DomainError):
        smooth_convexity_margin(HINV, 0.3, 0.7)


# ------------------------------------------------------------------- g1

def test_weighted_log_ratio_at_half():
    v, d1, d2 = weighted_log_ratio(0.5)
    assert v == 0.0 and d1 == -1.0 and d2 == 0.0


def test_weighted_log_ratio_closed_forms():
    v, d1, d2 = weighted_log_ratio(0.25)
    assert v == pytest.approx(0.1875 * math.log(3.0), rel=1e-15)
    assert d1 == pytest.approx(0.5 * math.log(3.0) - 1.0, rel=1e-15)
    assert d2 == pytest.approx(-2.0 * math.log(3.0) - 8.0 / 3.0, rel=1e-15)


def test_weighted_log_ratio_matches_finite_differences():
    h = 1e-6
    for x in (0.1, 0.3, 0.45):
        v, d1, d2 = weighted_log_ratio(x)
        fd1 = (weighted_log_ratio(x + h)[0] - weighted_log_ratio(x - h)[0]) / (2 * h)
        fd2 = (weighted_log_ratio(x + h)[1] - weighted_log_ratio(x - h)[1]) / (2 * h)
        assert rel_err(d1, fd1) < 1e-6
        assert rel_err(d2, fd2) < 1e-6


def test_weighted_log_ratio_concave_on_lower_half():
    for x in np.linspace(1e-3, 0.5 - 1e-3, 200):
        assert weighted_log_ratio(float(x))[2] <= 0.0


def test_weighted_log_ratio_rejects_endpoints():
    for bad in (0.0, 1.0):
        with pytest.raises(DomainError):
            weighted_log_ratio(bad)


# ------------------------------------------------------------------- g2

TWO_SEGMENT = PiecewiseLinearCurve([(0.0, 0.1), (0.5, 0.2), (1.0, 0.45)])


def test_onesided_margin_zero_at_half():
    assert onesided_convexity_margin(TWO_SEGMENT, 0.1, 0.8, 0.5) == 0.0


def test_onesided_margin_flat_segment():
    flat = PiecewiseLinearCurve([(0.0, 0.3), (1.0, 0.3)])
    assert onesided_convexity_margin(flat, 0.2, 0.7, 0.1) == 0.0
    # equal slopes on one segment: only the endpoint term survives
    m = TWO_SEGMENT.slopes[0]
    expected = -(1 - 2 * 0.1) * m * m * (0.3 - 0.1)
    assert onesided_convexity_margin(TWO_SEGMENT, 0.1, 0.3, 0.1) == pytest.approx(
        expected, rel=1e-14)


def test_onesided_margin_two_segment_formula():
    # re-evaluate the defining expression from scratch
    u0, u1, p = 0.2, 0.8, 0.1
    m0, m1 = TWO_SEGMENT.slopes
    x0 = TWO_SEGMENT.value(u0)
    pf = p * (1 - x0) + (1 - p) * x0
    expected = ((m1 - m0) * pf * (1 - pf) * math.log((1 - pf) / pf)
                - (1 - 2 * p) * m0 * m1 * (u1 - u0))
    got = onesided_convexity_margin(TWO_SEGMENT, u0, u1, p)
    assert got == pytest.approx(expected, rel=1e-13)


def test_onesided_margin_midpoint_concave_in_p():
    curves = [TWO_SEGMENT,
              PiecewiseLinearCurve([(0.0, 0.05), (0.3, 0.1), (0.7, 0.3), (1.0, 0.5)])]
    for curve in curves:
        ps = np.linspace(0.0, 0.5, 51)
        vals = [onesided_convexity_margin(curve, 0.1, 0.9, float(p)) for p in ps]
        for i in range(1, len(vals) - 1):
            assert vals[i] >= 0.5 * (vals[i - 1] + vals[i + 1]) - 1e-12


def test_onesided_margin_requires_ordered_points():
    with pytest.raises(DomainError):
        onesided_convexity_margin(TWO_SEGMENT, 0.8, 0.1, 0.2)


# ------------------------------------------------- piecewise-linear curves

def test_pl_curve_slopes_and_one_sided_derivatives():
    single = PiecewiseLinearCurve([(0.0, 0.1), (1.0, 0.4)])
    assert single.right_derivative(0.5) == pytest.approx(0.3, rel=1e-15)
    m1, m2 = TWO_SEGMENT.slopes
    assert m1 < m2
    assert TWO_SEGMENT.right_derivative(0.5) == m2
    assert TWO_SEGMENT.left_derivative(0.5) == m1
    assert TWO_SEGMENT.right_derivative(0.0) == m1
    assert TWO_SEGMENT.left_derivative(1.0) == m2


def test_pl_curve_right_derivative_monotone_across_breakpoints():
    rs = [TWO_SEGMENT.right_derivative(u) for u in np.linspace(0.0, 0.99, 50)]
    assert all(b >= a for a, b in zip(rs, rs[1:]))


def test_pl_curve_one_sided_derivative_domain_errors():
    with pytest.raises(DomainError):
        TWO_SEGMENT.right_derivative(1.0)
    with pytest.raises(DomainError):
        TWO_SEGMENT.left_derivative(0.0)


def test_pl_curve_validation():
    with pytest.raises(DomainError):
        PiecewiseLinearCurve([(0.0, 0.1)])
    with pytest.raises(DomainError):
        PiecewiseLinearCurve([(0.0, 0.1), (0.0, 0.2)])
    with pytest.raises(DomainError):
        PiecewiseLinearCurve([(0.0, 0.1), (1.0, 0.7)])


def test_pl_curve_from_text():
    text = """
    # a two-segment curve
    0.0, 0.1
    0.5, 0.2   # kink
    1.0, 0.45
    """
    curve = PiecewiseLinearCurve.from_text(text)
    assert curve.breakpoints == TWO_SEGMENT.breakpoints
    with pytest.raises(DomainError):
        PiecewiseLinearCurve.from_text("0.0 0.1\n")
    with pytest.raises(DomainError):
        PiecewiseLinearCurve.from_text("0.0,abc\n")


def test_pl_curve_values_interpolate():
    assert TWO_SEGMENT.value(0.25) == pytest.approx(0.15, rel=1e-15)
    np.testing.assert_allclose(TWO_SEGMENT.values(np.array([0.0, 0.5, 1.0])),
                               [0.1, 0.2, 0.45])
    with pytest.raises(DomainError):
        TWO_SEGMENT.value(1.5)


def test_composite_right_derivative_for_pl_curve():
    comp = MglComposite(0.2, TWO_SEGMENT)
    for u in (0.1, 0.7):
        got = comp.right_derivative(u)
        h = 1e-7
        fd = (comp.value(u + h) - comp.value(u)) / h
        assert got == pytest.approx(fd, rel=1e-5)


# --------------------------------------------------------------- criterion

def test_criterion_exactly_one_for_entropy_curve():
    curve = EntropyCurve()
    for u in (0.1, 0.3, 0.55, 0.69):
        assert inverse_convexity_criterion(curve, u) == pytest.approx(1.0, abs=1e-11)
    curve_b = EntropyCurve(LogBase.BINARY)
    assert inverse_convexity_criterion(curve_b, 0.5) == pytest.approx(1.0, abs=1e-11)


def test_criterion_on_split_entropy_curve():
    # oracle: direct closed-form evaluation -t(1-t)(f''/f') log((1-t)/t);
    # the numeric value is below 1 on the window (recorded as measured; the
    # criterion does not certify convexity of H(f^{-1}) here)
    f = SplitEntropyCurve()
    c25 = inverse_convexity_criterion(f, f.value(0.25))
    t = 0.25
    d1 = 0.5 * (math.log((1 - t / 2) / (t / 2))
                - math.log((1 - (1 - t) / 2) / ((1 - t) / 2)))
    d2 = -1 / (t * (2 - t)) - 1 / ((1 - t) * (1 + t))
    expected = -t * (1 - t) * (d2 / d1) * math.log((1 - t) / t)
    assert c25 == pytest.approx(expected, rel=1e-9)
    assert c25 == pytest.approx(0.9623911115549357, abs=1e-9)
    assert c25 < 1.0


def test_criterion_below_window_left_edge():
    f = SplitEntropyCurve()
    c03 = inverse_convexity_criterion(f, f.value(0.03))
    assert c03 == pytest.approx(0.8790374141322271, abs=1e-9)
    assert c03 < 1.0


def test_criterion_rejects_out_of_range_target():
    with pytest.raises(DomainError):
        inverse_convexity_criterion(SplitEntropyCurve(), 5.0)


def test_criterion_rejects_decreasing_curve():
    class Decreasing(EntropyCurve):
        def value(self, x):
            return binary_entropy(0.5 - self.check_domain(x) * 0.9)

        def first_derivative(self, x):
            return -1.0

        def second_derivative(self, x):
            return 0.0

    with pytest.raises(DomainError):
        inverse_convexity_criterion(Decreasing(), 0.3)


# ----------------------------------------------------------- curve corpus

def test_smooth_curve_derivative_consistency():
    h = 1e-5
    curves = [EntropyInverseCurve(), SplitEntropyCurve()]
    for curve in curves:
        a, b = curve.domain
        for u in np.linspace(a + 0.1 * (b - a), b - 0.1 * (b - a), 11):
            u = float(u)
            fd1 = (curve.value(u + h) - curve.value(u - h)) / (2 * h)
            assert rel_err(curve.first_derivative(u), fd1) < 1e-5
            fd2 = central_second(curve.value, u, h)
            assert rel_err(curve.second_derivative(u), fd2, floor=1e-4) < 1e-4


def test_entropy_inverse_curve_range():
    curve = EntropyInverseCurve()
    us = np.linspace(0.0, LN2, 101)
    vals = curve.values(us)
    assert np.all((vals >= 0.0) & (vals <= 0.5))


def test_floored_curve_matches_pointwise_max():
    wit = FlooredCurve(HINV, 0.3)
    for u in np.linspace(0.01, 0.69, 31):
        u = float(u)
        assert wit.value(u) == max(HINV.value(u), 0.3)
        assert wit.entropy_of_value(u) == max(u, binary_entropy(0.3))
    with pytest.raises(DomainError):
        FlooredCurve(HINV, 0.7)
