"""Tests for the forward map, branch constants, special points, and the
real Lambert W branches."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pqlambert.core import (
    AsymmetryParam,
    BranchId,
    DomainError,
    ParamKind,
    RangeError,
    as_param,
    branch_constants,
    forward,
    forward_dw,
    lambert_w,
    special_point,
)

P, LO = BranchId.PRINCIPAL, BranchId.LOWER


class TestAsymmetryParam:
    def test_kinds(self):
        assert AsymmetryParam(0.0).kind is ParamKind.ZERO_LIMIT
        assert AsymmetryParam(1.0).kind is ParamKind.ONE_LIMIT
        assert AsymmetryParam(0.5).kind is ParamKind.INTERIOR

    @pytest.mark.parametrize("bad", [-0.1, 1.0000001, math.nan, math.inf, -math.inf])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(DomainError):
            AsymmetryParam(bad)

    def test_rational_constructor(self):
        a = AsymmetryParam.from_rational(1, 3)
        assert a.exact == Fraction(1, 3)
        assert a.a == float(Fraction(1, 3))

    def test_as_param_passthrough(self):
        a = AsymmetryParam(0.25)
        assert as_param(a) is a
        assert as_param(Fraction(1, 4)).exact == Fraction(1, 4)
        assert as_param(0.25).a == 0.25


class TestForward:
    def test_zero_at_origin(self):
        assert forward(1 / 3, 0.0) == 0.0

    def test_minimum_value_examples(self):
        # f(1/3, -(3/2)log 2) = -1/8 and f(1/2, -log 3) = -sqrt(3)/9
        assert forward(1 / 3, -1.5 * math.log(2.0)) == pytest.approx(-0.125, rel=1e-15)
        assert forward(1 / 2, -math.log(3.0)) == pytest.approx(-math.sqrt(3.0) / 9.0,
                                                               rel=1e-15)

    def test_limit_cases(self):
        assert forward(0.0, 5.0) == 0.0
        assert forward(0.0, -700.0) == 0.0
        w = 0.37
        assert forward(1.0, w) == pytest.approx(0.5 * math.expm1(2 * w), rel=1e-15)

    def test_overflow_signals_range_error(self):
        with pytest.raises(RangeError):
            forward(0.5, 600.0)

    def test_matches_naive_definition(self):
        for a in (0.1, 0.5, 0.9):
            for w in (-3.0, -0.7, 0.2, 1.5, 4.0):
                naive = math.sinh(a * w) * math.exp(w)
                assert forward(a, w) == pytest.approx(naive, rel=1e-13)

    def test_no_cancellation_for_large_negative_w(self):
        # naive sinh*exp underflows/cancels; the two-exponential form does not
        a, w = 0.5, -500.0
        want = -0.5 * math.exp((1 - a) * w)  # dominant term
        assert forward(a, w) == pytest.approx(want, rel=1e-12)

    @given(st.floats(0.01, 0.99), st.floats(-50.0, 50.0))
    @settings(max_examples=300, deadline=None)
    def test_derivative_consistent(self, a, w):
        if (1 + a) * w > 600.0:
            return
        h = 1e-6 * (1.0 + abs(w))
        fd = (forward(a, w + h) - forward(a, w - h)) / (2 * h)
        assert forward_dw(a, w) == pytest.approx(fd, rel=1e-6, abs=1e-12)


class TestBranchConstants:
    def test_one_third(self):
        bc = branch_constants(AsymmetryParam.from_rational(1, 3))
        assert bc.f_min == pytest.approx(-0.125, rel=1e-15)
        assert bc.w_min == pytest.approx(-1.5 * math.log(2.0), rel=1e-15)
        assert bc.scale == pytest.approx(0.125 * (1 - 1 / 9), rel=1e-14)

    def test_one_half(self):
        bc = branch_constants(0.5)
        assert bc.f_min == pytest.approx(-math.sqrt(3.0) / 9.0, rel=1e-15)
        assert bc.w_min == pytest.approx(-math.log(3.0), rel=1e-15)

    def test_zero_limit_is_lambert_branch_point(self):
        bc = branch_constants(0.0)
        assert bc.f_min == pytest.approx(-math.exp(-1.0), rel=1e-15)
        assert bc.w_min == -1.0

    def test_one_rejected(self):
        with pytest.raises(DomainError):
            branch_constants(1.0)

    @given(st.floats(0.005, 0.995))
    @settings(max_examples=200, deadline=None)
    def test_minimum_attained(self, a):
        bc = branch_constants(a)
        assert forward(a, bc.w_min) == pytest.approx(bc.f_min, rel=1e-13)
        assert bc.f_min < 0.0 and bc.w_min < 0.0 and bc.scale > 0.0
        assert bc.scale == pytest.approx(bc.f_min * (a * a - 1.0), rel=1e-15)
        # derivative vanishes at the minimizer
        assert abs(forward_dw(a, bc.w_min)) <= 1e-15

    def test_monotone_on_each_side(self):
        for a in (0.2, 0.5, 0.8):
            bc = branch_constants(a)
            left = [bc.w_min - 10.0 + 10.0 * i / 40 for i in range(41)]
            vals = [forward(a, w) for w in left]
            assert all(v1 > v2 for v1, v2 in zip(vals, vals[1:]))
            right = [bc.w_min + 8.0 * i / 40 for i in range(41)]
            vals = [forward(a, w) for w in right]
            assert all(v1 < v2 for v1, v2 in zip(vals, vals[1:]))


class TestSpecialPoint:
    def test_n1_is_branch_point(self):
        for a in (0.2, 0.5, 0.8):
            bc = branch_constants(a)
            x, w = special_point(a, 1)
            assert x == pytest.approx(bc.f_min, rel=1e-14)
            assert w == pytest.approx(bc.w_min, rel=1e-15)

    def test_n2_is_inflection_value(self):
        for a in (0.2, 0.5, 0.8):
            bc = branch_constants(a)
            x, w = special_point(a, 2)
            assert x == pytest.approx(-2.0 * bc.f_min ** 2 / a, rel=1e-13)
            assert w == pytest.approx(2.0 * bc.w_min, rel=1e-15)

    def test_one_third_n3_frozen_value(self):
        # I(3) at a=1/3 is exactly (1/2)(1/2)^3((1/2)^3 - 1) = -7/128
        x, w = special_point(AsymmetryParam.from_rational(1, 3), 3)
        assert x == pytest.approx(-7.0 / 128.0, rel=1e-15)
        assert w == pytest.approx(-4.5 * math.log(2.0), rel=1e-15)
        assert forward(1 / 3, w) == pytest.approx(x, rel=1e-13)

    @pytest.mark.parametrize("a", [0.1 * k for k in range(1, 10)])
    def test_forward_consistency_to_n10(self, a):
        for n in range(1, 11):
            x, w = special_point(a, n)
            assert forward(a, w) == pytest.approx(x, rel=1e-12)

    def test_validation(self):
        with pytest.raises(DomainError):
            special_point(0.5, 0)
        with pytest.raises(DomainError):
            special_point(0.0, 1)


class TestLambertW:
    def test_trivial_values(self):
        assert lambert_w(P, 0.0) == 0.0
        assert lambert_w(LO, -math.exp(-1.0)) == pytest.approx(-1.0, abs=1e-7)

    def test_figure_pinned_value(self):
        # W0 at -5*exp(-5), the a=0 transition of -5
        got = lambert_w(P, -5.0 * math.exp(-5.0))
        assert got == pytest.approx(-0.0348858, abs=5e-7)

    def test_against_scipy(self):
        from scipy.special import lambertw as scipy_w

        for x in (-0.367, -0.3, -0.1, -1e-4, 1e-4, 0.5, 1.0, 10.0, 1e8):
            assert lambert_w(P, x) == pytest.approx(
                float(scipy_w(x, 0).real), rel=1e-12, abs=1e-300)
        for x in (-0.367, -0.3, -0.1, -1e-4, -1e-12):
            assert lambert_w(LO, x) == pytest.approx(
                float(scipy_w(x, -1).real), rel=1e-12)

    def test_residual_contract(self):
        for x in (-0.3678, -0.2, -1e-3, 0.7, 42.0, 1e6):
            w = lambert_w(P, x)
            assert abs(w * math.exp(w) - x) <= 1e-14 * abs(x)

    # round trip over the branch ranges: w >= -1 maps through W0, w <= -1
    # through the lower branch
    @given(st.floats(-1.0, 30.0))
    @settings(max_examples=400, deadline=None)
    def test_round_trip_principal(self, w):
        x = w * math.exp(w)
        assert lambert_w(P, x) == pytest.approx(w, rel=1e-12, abs=2e-8)

    @given(st.floats(-30.0, -1.0))
    @settings(max_examples=400, deadline=None)
    def test_round_trip_lower(self, w):
        x = w * math.exp(w)
        assert lambert_w(LO, x) == pytest.approx(w, rel=1e-12, abs=2e-8)

    def test_round_trip_tight_away_from_branch_point(self):
        for w in [-1.0 + 31.0 * i / 200 for i in range(201)]:
            if abs(w + 1.0) < 1e-3:
                continue
            x = w * math.exp(w)
            assert lambert_w(P, x) == pytest.approx(w, rel=1e-12, abs=1e-12)
        for w in [-30.0 + 29.0 * i / 200 for i in range(201)]:
            if abs(w + 1.0) < 1e-3:
                continue
            x = w * math.exp(w)
            assert lambert_w(LO, x) == pytest.approx(w, rel=1e-12)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            lambert_w(P, -0.5)
        with pytest.raises(DomainError):
            lambert_w(LO, 0.1)
        with pytest.raises(DomainError):
            lambert_w(LO, -0.5)

    def test_branch_sides(self):
        assert lambert_w(P, -0.1) >= -1.0
        assert lambert_w(LO, -0.1) <= -1.0
