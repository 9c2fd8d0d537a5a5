import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from youngkit.errors import DomainError, PreconditionError
from youngkit.monotone import AffinePiece, MonotoneFn, StepPiece, affine
from youngkit.probability import (
    DistributionPair, ErfInvSeries, erf, erf_inv, erf_inv_newton, erf_quadrature, erfinv_coefficients,
    check_probabilistic_young, truncated_gaussian_pair, uniform_pair,
)
from youngkit.quadrature import ProductKernel


class TestErf:
    @pytest.mark.parametrize("x", [-1.5, 0.0, 0.3, 1.0, 2.5])
    def test_quadrature_matches_scipy(self, x):
        assert erf_quadrature(x) == pytest.approx(erf(x), rel=1e-10, abs=1e-15)

    def test_coefficients(self):
        c = erfinv_coefficients(4)
        with mp.workdps(60):
            expected = [mp.mpf(1), mp.mpf(1), mp.mpf(7) / 6, mp.mpf(127) / 90]
            for value, exact in zip(c, expected):
                assert abs(value - exact) < mp.mpf(10) ** -50

    def test_summation_order(self):
        forward = erfinv_coefficients(60)
        backward = erfinv_coefficients(60, reverse=True)
        with mp.workdps(60):
            for u, v in zip(forward, backward):
                assert abs(u - v) <= mp.mpf(10) ** -45 * abs(u)

    def test_series(self):
        series = ErfInvSeries(k_max=50)
        np.testing.assert_allclose(series.coefficients[:4], [1, 1, 7 / 6, 127 / 90])
        assert series.weights[0] == pytest.approx(np.sqrt(np.pi) / 2)
        # the truncated series alone is already close for small z
        assert series(0.1) == pytest.approx(special.erfinv(0.1), rel=1e-14)


class TestErfInv:
    def test_zero(self):
        assert erf_inv(0.0) == 0.0

    @pytest.mark.parametrize("z", [0.5, -0.25, 0.9])
    def test_matches_scipy(self, z):
        assert erf_inv(z) == pytest.approx(special.erfinv(z), rel=1e-13)

    @given(st.floats(-0.9, 0.9))
    @settings(max_examples=200, deadline=None)
    def test_residual(self, z):
        assert abs(erf(erf_inv(z)) - z) <= 1e-14

    def test_residual_on_a_grid(self):
        z = np.linspace(-0.9, 0.9, 1001)
        residual = np.array([erf(erf_inv(v)) for v in z]) - z
        assert np.max(np.abs(residual)) <= 1e-10

    def test_domain(self):
        with pytest.raises(DomainError):
            erf_inv(0.95)
        with pytest.raises(DomainError):
            erf_inv_newton(1.0)

    @pytest.mark.parametrize("z", [0.95, -0.99, 0.999999])
    def test_newton(self, z):
        assert erf_inv_newton(z) == pytest.approx(special.erfinv(z), rel=1e-10)

    def test_newton_inside_uses_series(self):
        assert erf_inv_newton(0.5) == erf_inv(0.5)


class TestProbabilisticYoung:
    def test_uniform_equality(self):
        report = check_probabilistic_young(uniform_pair(), 1, 1)
        assert report.lhs == pytest.approx(1)
        assert report.rhs == pytest.approx(1)
        assert report.equality

    def test_uniform_strict(self):
        report = check_probabilistic_young(uniform_pair(), 1, 0.5)
        assert report.lhs == pytest.approx(0.5)
        assert report.rhs == pytest.approx(0.625)
        assert report.details["epigraph"] == pytest.approx(0.125)
        assert not report.equality
        assert report.satisfied

    def test_truncated_gaussian(self):
        dp = truncated_gaussian_pair()
        assert dp.cdf(3) == pytest.approx(1)
        report = check_probabilistic_young(dp, 1, dp.cdf(1.0))
        assert report.equality
        assert abs(report.gap) <= 1e-7
        for b, c in [(0.5, 0.9), (2.5, 0.1)]:
            report = check_probabilistic_young(dp, b, c)
            assert report.satisfied
            assert report.gap > 1e-4

    def test_uniform_summands_cannot_both_be_small(self):
        report = check_probabilistic_young(uniform_pair(), 1, 1)
        assert report.details["hypograph"] >= report.lhs / 2 - 1e-10
        assert report.details["epigraph"] >= report.lhs / 2 - 1e-10

    def test_truncated_gaussian_grid(self):
        dp = truncated_gaussian_pair()
        for b in np.linspace(0.2, 3, 5):
            for c in np.linspace(0.1, 0.95, 5):
                assert check_probabilistic_young(dp, b, c).satisfied

    def test_quantile(self):
        dp = truncated_gaussian_pair(2)
        x = dp.quantile(0.5)
        assert dp.cdf(x) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("cdf", [
        truncated_gaussian_pair().cdf,
        # uniform on [0, 1] and [2, 3] with no mass in between
        MonotoneFn([AffinePiece(0, 1, 0.5, 0), StepPiece(1, 2, 0.5), AffinePiece(2, 3, 0.5, -0.5)]),
    ])
    def test_quantile_is_the_inf_inverse(self, cdf):
        dp = DistributionPair(ProductKernel.one(box=((0, 3), (0, 1))), cdf)
        inverse = cdf.pseudo_inverse("inf")
        # 0.5 is the value of the plateau, where the quantile jumps
        for y in np.linspace(0.01, 0.99, 50):
            if abs(y - 0.5) > 1e-3:
                assert dp.quantile(y) == pytest.approx(inverse(y), abs=1e-9)

    def test_cdf_must_start_at_zero(self):
        with pytest.raises(PreconditionError):
            DistributionPair(ProductKernel.one(), affine(1, 0.5, 0, 0.5))

    def test_cdf_bounded_by_one(self):
        with pytest.raises(PreconditionError):
            DistributionPair(ProductKernel.one(), affine(2, 0, 0, 1))

    @pytest.mark.parametrize("b,c", [(0, 0.5), (1.5, 0.5), (0.5, 0), (0.5, 1.2)])
    def test_domain(self, b, c):
        with pytest.raises(DomainError):
            check_probabilistic_young(uniform_pair(), b, c)
