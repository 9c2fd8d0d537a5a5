import numpy as np
import pytest

from youngkit.errors import ConfigError, DomainError, PreconditionError
from youngkit.legendre import (
    ConvexFn, absolute, check_ext_young, check_fenchel_young, check_sulaiman, conjugate, entropy,
    exponential, integral_representation, is_convex_sampled, power_p,
)
from youngkit.monotone import affine, identity, step
from youngkit.quadrature import ProductKernel
from youngkit.testing import instances
from youngkit.young import YoungInstance


class TestConvexFn:
    def test_not_convex(self):
        with pytest.raises(PreconditionError):
            ConvexFn(np.sin, (0, 3))

    def test_sampled_convexity(self):
        assert is_convex_sampled(power_p(3, -1, 1))
        assert not is_convex_sampled(ConvexFn(np.sin, (0, 3), validate=False))

    def test_subdifferential(self):
        F = absolute()
        assert F.subdifferential(0) == (-1, 1)
        assert F.subdifferential(0.5) == (1, 1)
        left, right = F.subdifferential(-1)
        assert left == -np.inf and right == -1

    def test_finite_differences(self):
        F = ConvexFn(lambda x: x ** 4, (-1, 2))
        left, right = F.subdifferential(1)
        assert left == pytest.approx(4, rel=1e-6)
        assert right == pytest.approx(4, rel=1e-6)

    def test_outside_domain(self):
        with pytest.raises(DomainError):
            power_p(2, 0, 1)(2)

    def test_from_dict(self):
        F = ConvexFn.from_dict({"name": "power_p", "p": 3, "domain": [0, 2]})
        assert F.domain == (0, 2)
        assert F(1.5) == pytest.approx(1.5 ** 3 / 3)
        assert F.to_dict() == {"name": "power_p", "domain": [0, 2], "p": 3}
        with pytest.raises(ConfigError) as e:
            ConvexFn.from_dict({"name": "huber"}, "phi")
        assert e.value.field == "phi.name"

    def test_power_needs_p_above_one(self):
        with pytest.raises(DomainError):
            power_p(1)


class TestConjugate:
    def test_square(self):
        F_star = conjugate(power_p(2, 0, 10), (0, 3))
        for y in (0.5, 1.5, 3):
            assert F_star(y) == pytest.approx(y * y / 2, rel=1e-9)
        assert F_star.subdifferential(1.5)[1] == pytest.approx(1.5, abs=1e-6)

    def test_power_conjugate_exponent(self):
        p = 3
        q = p / (p - 1)
        F_star = power_p(p, 0, 10).conjugate((0, 4))
        assert F_star(2) == pytest.approx(2 ** q / q, rel=1e-8)

    def test_absolute_is_an_indicator(self):
        F_star = conjugate(absolute(), (-1, 1))
        for y in (-1, -0.3, 0, 0.7, 1):
            assert F_star(y) == pytest.approx(0, abs=1e-12)

    def test_entropy(self):
        F_star = conjugate(entropy(), (0, 1.5))
        assert F_star(1) == pytest.approx(1, rel=1e-9)
        assert F_star(0.5) == pytest.approx(np.exp(-0.5), rel=1e-9)

    @pytest.mark.parametrize("F,I_star,inner", [
        (power_p(2, 0, 10), (0, 3), (0.2, 2)),
        (power_p(3, 0, 10), (0, 4), (0.2, 1.8)),
        (absolute(), (-1, 1), (-0.9, 0.9)),
    ])
    def test_biconjugate(self, F, I_star, inner):
        F_star_star = conjugate(conjugate(F, I_star), inner, grid_n=256)
        xs = np.linspace(*inner, 9)
        np.testing.assert_allclose(F_star_star(xs), F(xs), atol=1e-6)

    def test_subdifferential_of_the_conjugate(self):
        F = power_p(3, 0, 10)
        F_star = conjugate(F, (0, 9))
        for x in (0.5, 1, 1.5, 2, 2.5):
            left, right = F_star.subdifferential(x * x)
            assert left - 1e-6 <= x <= right + 1e-6

    def test_subdifferential_of_the_conjugate_at_a_kink(self):
        # every y in [-1, 1] is a slope at the kink of |x|
        F_star = conjugate(absolute(), (-1, 1))
        for y in (-0.5, 0, 0.5):
            left, right = F_star.subdifferential(y)
            assert left - 1e-6 <= 0 <= right + 1e-6

    def test_unbounded(self):
        F_star = conjugate(power_p(2, 0, 10), (0, 20))
        with pytest.raises(DomainError):
            F_star(15)
        restricted = conjugate(power_p(2, 0, 10), (0, 20), strict=False)
        assert restricted(15) == pytest.approx(100)

    def test_grid(self):
        with pytest.raises(ConfigError):
            conjugate(power_p(2), (0, 1), grid_n=8)
        with pytest.raises(DomainError):
            conjugate(power_p(2), (0, np.inf))


class TestFenchelYoung:
    def test_equality_on_the_subdifferential(self):
        F = power_p(2, 0, 10)
        F_star = conjugate(F, (0, 5))
        report = check_fenchel_young(F, F_star, 1, 1)
        assert report.equality
        assert abs(report.gap) <= report.tolerance

    def test_strict(self):
        F = power_p(2, 0, 10)
        report = check_fenchel_young(F, conjugate(F, (0, 5)), 1, 2)
        assert report.lhs == 2
        assert report.rhs == pytest.approx(2.5)
        assert not report.equality

    def test_kink(self):
        F = absolute()
        F_star = conjugate(F, (-1, 1))
        for y in (-1, 0, 0.5, 1):
            report = check_fenchel_young(F, F_star, 0, y)
            assert report.equality
        assert not check_fenchel_young(F, F_star, 0.5, 0).equality

    @pytest.mark.parametrize("F,a,b", [
        (power_p(2, 0, 10), 0, 3),
        (exponential(), 0, 1),
        (absolute(), -1, 1),
        (entropy(), 0.5, 2),
    ])
    def test_integral_representation(self, F, a, b):
        result = integral_representation(F, a, b)
        assert result.value == pytest.approx(F(b) - F(a), rel=1e-8, abs=1e-10)

    def test_integral_representation_domain(self):
        with pytest.raises(DomainError):
            integral_representation(exponential(), -3, 0)


class TestExtYoung:
    def test_identity(self):
        inst = YoungInstance(ProductKernel.one(), identity(0, 2), 0, 1, 1)
        report = check_ext_young(inst, power_p(2), 1.0)
        assert report.lhs == pytest.approx(0, abs=1e-10)
        assert report.rhs == pytest.approx(1 / 3)
        assert report.details["penalty"] == pytest.approx(1)
        assert report.satisfied

    @pytest.mark.parametrize("eps", [0.5, 1.3, 2.0])
    @pytest.mark.parametrize("p", [1.5, 3.0])
    def test_holds(self, eps, p):
        f = affine(2, 0, 0, 1)
        inst = YoungInstance(ProductKernel.one(), f, 0, 0.6, 1.5)
        assert check_ext_young(inst, power_p(p), eps).satisfied

    def test_weighted(self):
        inst = YoungInstance(ProductKernel.power(1, 0), identity(0, 2), 0, 1, 1.5)
        assert check_ext_young(inst, power_p(3), 0.5).satisfied

    def test_needs_continuity(self):
        inst = YoungInstance(ProductKernel.one(), step(0.5, 0, 1, 0, 2), 0, 1, 1)
        with pytest.raises(PreconditionError):
            check_ext_young(inst, power_p(2), 1.0)

    def test_eps(self):
        inst = YoungInstance(ProductKernel.one(), identity(0, 2), 0, 1, 1)
        with pytest.raises(DomainError):
            check_ext_young(inst, power_p(2), 0)

    def test_conjugate_beyond_the_domain(self):
        # the maximizer of 5x - x^1.5/1.5 is 25, outside [0, 10]
        inst = YoungInstance(ProductKernel.one(), identity(0, 1), 0, 1, 1)
        with pytest.raises(DomainError):
            check_ext_young(inst, power_p(1.5), 0.2)

    def test_conjugate_inside_a_wider_domain(self):
        inst = YoungInstance(ProductKernel.one(), identity(0, 1), 0, 1, 1)
        report = check_ext_young(inst, power_p(1.5, 0, 30), 0.2)
        # Φ(0.2) + Φ*(5) with Φ*(v) = v³/3
        assert report.details["penalty"] == pytest.approx(0.2 ** 1.5 / 1.5 + 125 / 3, rel=1e-8)
        assert report.details["penalty"] == pytest.approx(41.7263, abs=1e-4)
        assert report.details["conjugate_term"] == pytest.approx(125 / 12, rel=1e-8)
        assert report.satisfied

    def test_gap_is_continuous_in_p(self):
        inst = YoungInstance(ProductKernel.one(), identity(0, 2), 0, 1, 1)
        for p in (3, 2, 1.5, 1.2, 1.1, 1.05):
            q = p / (p - 1)
            report = check_ext_young(inst, power_p(p), 1.0)
            # the penalty cancels the rectangle and the two terms are ∫_0^1 x^p/p and ∫_0^1 y^q/q
            assert report.gap == pytest.approx(1 / (p * (p + 1)) + 1 / (q * (q + 1)), abs=1e-6)
            assert report.gap > 0

    def test_random_instances(self):
        for description in instances.generate("extyoung", 100, 7):
            data = {key: description[key] for key in ("kernel", "f", "a", "b", "c")}
            inst = YoungInstance.from_dict(data)
            report = check_ext_young(inst, power_p(description["p"]), description["eps"])
            assert report.satisfied, description


class TestSulaiman:
    def test_identity(self):
        report = check_sulaiman(identity(0, 2), 2, 2, 2)
        assert report.lhs == 4
        assert report.rhs == pytest.approx(16 / 3)
        assert report.satisfied
        assert not report.equality

    def test_needs_origin(self):
        with pytest.raises(PreconditionError):
            check_sulaiman(affine(1, 1, 0, 2), 1, 1.5, 2)

    def test_p(self):
        with pytest.raises(DomainError):
            check_sulaiman(identity(0, 2), 1, 1, 1)
