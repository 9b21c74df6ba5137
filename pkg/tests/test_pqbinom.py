"""Tests for the p,q-binomial coefficients, distribution, and peaks."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pqlambert.core import AsymmetryParam, DomainError
from pqlambert.branches import omega, omega_finite_n
from pqlambert.pqbinom import (
    DegenerateRatioError,
    PqParams,
    build_distribution,
    equal_ratio_residual,
    log_pq_binomial,
    peak_drift,
)

A_HALF = AsymmetryParam.from_rational(1, 2)


def mp_log_coefficient(n, p, q, k, mp):
    """Extended-precision direct product oracle."""
    p, q = mp.mpf(p), mp.mpf(q)
    acc = mp.mpf(1)
    for j in range(1, k + 1):
        acc *= (p ** (n - k + j) - q ** (n - k + j)) / (p ** j - q ** j)
    return float(mp.log(acc))


class TestPqParams:
    def test_validation(self):
        with pytest.raises(DomainError):
            PqParams(n=0, p=1.0, q=0.5)
        with pytest.raises(DomainError):
            PqParams(n=4, p=0.7, q=0.7)
        with pytest.raises(DomainError):
            PqParams(n=4, p=-0.1, q=0.5)

    def test_transition_provenance_exact(self):
        params = PqParams.from_transition(128, A_HALF, -3.0)
        a, y, z = params.provenance
        assert params.p == 1.0 + 2.0 * y / 128
        assert params.q == 1.0 + 2.0 * z / 128
        assert y == pytest.approx(omega(A_HALF, -3.0), rel=1e-15)
        assert params.p > params.q > 0.0

    def test_transition_rejects_bad_z(self):
        with pytest.raises(DomainError):
            PqParams.from_transition(4, A_HALF, -5.0)  # q <= 0
        with pytest.raises(DomainError):
            PqParams.from_transition(64, A_HALF, 1.0)


class TestLogCoefficient:
    def test_small_identities(self):
        # (p^2 - q^2)/(p - q) = p + q and the empty product at k = 0
        params = PqParams(n=2, p=1.37, q=0.41)
        assert log_pq_binomial(params, 1) == pytest.approx(math.log(1.78), rel=1e-14)
        assert log_pq_binomial(params, 0) == 0.0
        assert log_pq_binomial(params, 2) == 0.0

    def test_reduces_to_binomial_when_q_to_1(self):
        # at q -> 1, p -> 1 the coefficients approach C(n, k)
        params = PqParams(n=10, p=1.0 + 1e-9, q=1.0 - 1e-9)
        assert log_pq_binomial(params, 4) == pytest.approx(math.log(210.0), abs=1e-6)

    @pytest.mark.parametrize("n", [8, 16, 32, 64])
    def test_extended_precision_oracle(self, n, mp50):
        for (p, q) in ((1.1, 0.9), (0.97, 0.55), (1.5, 1.2), (0.2, 3.0),
                       (1.0001, 0.9999)):
            params = PqParams(n=n, p=p, q=q)
            dist = build_distribution(params)
            for k in range(n + 1):
                ref = mp_log_coefficient(n, p, q, k, mp50)
                assert abs(log_pq_binomial(params, k) - ref) <= 1e-11
                assert abs(float(dist.log_coeffs[k]) - ref) <= 1e-11

    def test_validation(self):
        params = PqParams(n=8, p=1.1, q=0.9)
        with pytest.raises(DomainError):
            log_pq_binomial(params, 9)
        with pytest.raises(DomainError):
            log_pq_binomial(params, -1)


class TestDistribution:
    def test_symmetry_exact(self):
        for n, z in ((64, -3.0), (1023, -5.0), (1024, -5.0)):
            dist = build_distribution(PqParams.from_transition(n, A_HALF, z))
            assert bool(np.all(dist.log_coeffs == dist.log_coeffs[::-1]))

    def test_normalization(self):
        for n in (16, 256, 4096):
            dist = build_distribution(PqParams.from_transition(n, A_HALF, -4.0))
            assert float(dist.masses().sum()) == pytest.approx(1.0, abs=1e-12)

    def test_bimodal_peaks_near_quarters(self):
        n = 2 ** 10
        dist = build_distribution(PqParams.from_transition(n, A_HALF, -5.0))
        assert len(dist.peaks) == 2
        k_lo, k_hi = dist.peaks
        assert abs(k_lo - 0.25 * n) <= 0.02 * n
        assert abs(k_hi - 0.75 * n) <= 0.02 * n
        assert k_lo + k_hi == n  # symmetric pair

    def test_zero_limit_twin_peaks_straddle_center(self):
        n = 2 ** 10
        dist = build_distribution(PqParams.from_transition(n, AsymmetryParam(0.0), -5.0))
        assert len(dist.peaks) == 2
        k_lo, k_hi = dist.peaks
        assert k_lo < n // 2 < k_hi
        assert k_lo + k_hi == n

    def test_unimodal_peak_at_center(self):
        assert build_distribution(PqParams(n=64, p=1.001, q=0.999)).peaks == (32,)
        assert build_distribution(PqParams(n=63, p=1.001, q=0.999)).peaks == (31,)

    @given(st.integers(4, 200), st.floats(0.05, 3.0), st.floats(0.05, 3.0))
    @settings(max_examples=300, deadline=None)
    def test_one_or_two_peaks_never_more(self, n, p, q):
        if p == q:
            return
        dist = build_distribution(PqParams(n=n, p=p, q=q))
        assert len(dist.peaks) in (1, 2)
        assert float(dist.masses().sum()) == pytest.approx(1.0, abs=1e-12)
        assert bool(np.all(dist.log_coeffs == dist.log_coeffs[::-1]))

    def test_immutable(self):
        dist = build_distribution(PqParams(n=8, p=1.1, q=0.9))
        with pytest.raises(ValueError):
            dist.log_coeffs[0] = 1.0

    def test_cap(self):
        with pytest.raises(DomainError):
            build_distribution(PqParams(n=2 ** 24 + 1, p=1.1, q=0.9))


class TestEqualRatioResidual:
    def test_zero_iff_consecutive_equal(self):
        n = 512
        y = omega_finite_n(n, A_HALF, -4.0)
        params = PqParams.from_transition(n, A_HALF, -4.0, y)
        k = round(n * 0.25)
        assert abs(equal_ratio_residual(params, k)) <= 1e-10
        assert abs(log_pq_binomial(params, k) - log_pq_binomial(params, k - 1)) <= 1e-10
        # away from the solution the residual is visibly nonzero
        assert abs(equal_ratio_residual(params, k + 30)) > 1e-3

    def test_invariant_under_index_reflection(self):
        params = PqParams.from_transition(512, AsymmetryParam(0.0), -4.0)
        for k in (1, 100, 256):
            r1 = equal_ratio_residual(params, k)
            r2 = equal_ratio_residual(params, 512 - k + 1)
            assert r1 == pytest.approx(r2, abs=1e-12)

    def test_degenerate_denominator(self):
        with pytest.raises(DegenerateRatioError):
            equal_ratio_residual(PqParams(n=10, p=0.9, q=1.0), 2)

    def test_trivial_numerator(self):
        assert equal_ratio_residual(PqParams(n=10, p=1.0, q=0.9), 2) == -1.0

    def test_validation(self):
        with pytest.raises(DomainError):
            equal_ratio_residual(PqParams(n=10, p=1.1, q=0.9), 0)
        with pytest.raises(DomainError):
            equal_ratio_residual(PqParams(n=10, p=1.1, q=0.9), 11)


class TestPeakDrift:
    def test_half_at_1024(self):
        k_peak, offset = peak_drift(2 ** 10, A_HALF, -5.0)
        assert abs(k_peak - 256) <= 8
        assert offset <= 0.01

    def test_zero_limit_never_exactly_centered(self):
        k_peak, offset = peak_drift(2 ** 10, AsymmetryParam(0.0), -5.0)
        assert k_peak < 512
        assert offset > 0.0

    def test_offset_shrinks_with_n(self):
        offsets = [peak_drift(2 ** k, A_HALF, -5.0)[1] for k in (10, 12, 14)]
        assert offsets[2] <= offsets[0] * 1.1
        assert all(o2 <= o1 * 1.1 for o1, o2 in zip(offsets, offsets[1:]))
