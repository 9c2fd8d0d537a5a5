import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from youngkit.errors import ConfigError, DomainError, PreconditionError
from youngkit.monotone import (
    AffinePiece, ErfPiece, MonotoneFn, PowerPiece, StepPiece,
    eval_inverse, evaluate, from_callable, identity, power, pseudo_inverse, register_callable, step,
)


def plateau():
    """Identity on [0, 1], flat at 1 on [1, 2], then x - 1 on [2, 3]"""
    return MonotoneFn([AffinePiece(0, 1, 1, 0), StepPiece(1, 2, 1), AffinePiece(2, 3, 1, -1)])


class TestMonotoneFn:
    def test_lateral_limits_at_a_jump(self):
        f = step(1, 0, 1, 0, 2)
        assert evaluate(f, 1, "left") == 0
        assert evaluate(f, 1, "right") == 1
        # the point value is the right limit
        assert f(1) == 1
        assert f(0.5) == 0
        assert f.jumps_in(0, 2) == [1.0]
        assert not f.is_continuous_on(0, 2)
        assert f.is_continuous_on(1, 2)

    def test_left_limit_at_the_left_end(self):
        f = power(2, 0, 3)
        assert f.left(0) == f(0) == 0

    def test_vectorized_call(self):
        f = power(2, 0, 3)
        x = np.array([[0.5, 1.0], [2.0, 3.0]])
        np.testing.assert_allclose(f(x), x ** 2)

    def test_domain_and_codomain(self):
        f = plateau()
        assert f.domain == (0, 3)
        assert f.codomain == (0, 2)
        assert not f.is_strictly_increasing_on(0, 3)
        assert f.is_strictly_increasing_on(0, 1)

    def test_outside_domain(self):
        with pytest.raises(DomainError):
            identity(0, 1)(1.5)

    def test_unknown_side(self):
        with pytest.raises(ValueError):
            identity(0, 1).evaluate(0.5, "middle")

    def test_decreasing_piece(self):
        with pytest.raises(PreconditionError):
            AffinePiece(0, 1, -1, 0)

    def test_jump_down(self):
        with pytest.raises(PreconditionError):
            MonotoneFn([StepPiece(0, 1, 1), StepPiece(1, 2, 0)])

    def test_pieces_must_be_contiguous(self):
        with pytest.raises(DomainError):
            MonotoneFn([StepPiece(0, 1, 0), StepPiece(1.5, 2, 1)])

    def test_empty_piece(self):
        with pytest.raises(DomainError):
            StepPiece(1, 1, 0)


class TestPseudoInverse:
    def test_identity(self):
        g = pseudo_inverse(identity(0, 4))
        assert eval_inverse(g, 2.5) == pytest.approx(2.5)

    def test_jump_becomes_plateau(self):
        g = step(1, 0, 1, 0, 2).pseudo_inverse("sup")
        assert g(0.5) == 1
        assert g(0) == 1
        # the defining set of sup{f > 1} is empty
        assert g(1) == 2

    def test_flavours_at_a_plateau(self):
        f = plateau()
        assert f.pseudo_inverse("sup")(1) == pytest.approx(2)
        assert f.pseudo_inverse("inf")(1) == pytest.approx(1)
        assert f.pseudo_inverse("quantile")(1) == pytest.approx(1)
        # away from the plateau value the flavours agree
        for flavor in ("sup", "inf", "quantile"):
            assert f.pseudo_inverse(flavor)(0.5) == pytest.approx(0.5)
            assert f.pseudo_inverse(flavor)(1.5) == pytest.approx(2.5)

    def test_empty_sets(self):
        f = step(1, 0, 1, 0, 2)
        assert f.pseudo_inverse("inf")(0) == 0
        assert f.pseudo_inverse("quantile")(1) == 1

    def test_outside_codomain(self):
        with pytest.raises(DomainError):
            identity(0, 1).pseudo_inverse()(2)

    def test_unknown_flavor(self):
        with pytest.raises(ValueError):
            identity(0, 1).pseudo_inverse("median")

    def test_bisection_fallback(self):
        # ErfPiece has a closed form inverse, so compare it with bisection
        piece = ErfPiece(0, 2, rate=1.5, scale=0.5)
        y = float(piece(0.7))
        assert piece.sup_inverse(y) == pytest.approx(0.7, abs=1e-12)
        assert piece._bisect(lambda v: v > y) == pytest.approx(0.7, abs=1e-10)

    def test_as_monotone(self):
        g = power(2, 0, 2).pseudo_inverse().as_monotone()
        assert g.domain == (0, 4)
        assert g(2.25) == pytest.approx(1.5)
        jumpy = step(1, 0, 1, 0, 2).pseudo_inverse().as_monotone()
        assert jumpy.domain == (0, 1)
        assert jumpy(0.3) == 1

    def test_as_monotone_of_constant(self):
        with pytest.raises(DomainError):
            MonotoneFn([StepPiece(0, 1, 2)]).pseudo_inverse().as_monotone()

    def test_inverse_of_the_inverse(self):
        # a plateau at 1 on [1, 2] followed by a jump from 1 to 2 at x = 2
        f = MonotoneFn([AffinePiece(0, 1, 1, 0), StepPiece(1, 2, 1), AffinePiece(2, 3, 1, 0)])
        g = f.pseudo_inverse("sup").as_monotone()
        assert g.domain == (0, 3)
        h = g.pseudo_inverse("sup")
        xs = [x for x in np.linspace(0, 3, 61) if x != 2]
        np.testing.assert_allclose([h(x) for x in xs], f(np.array(xs)), rtol=0, atol=1e-10)

    def test_inverse_of_the_inverse_is_continuous_power(self):
        f = power(2, 0, 2)
        h = f.pseudo_inverse().as_monotone().pseudo_inverse()
        xs = np.linspace(0, 2, 41)
        np.testing.assert_allclose([h(x) for x in xs], xs ** 2, rtol=0, atol=1e-10)


class TestJson:
    def test_single_piece_defaults_to_the_domain(self):
        f = MonotoneFn.from_dict({"domain": [0, 3], "pieces": [{"kind": "power", "alpha": 2}]})
        assert isinstance(f.pieces[0], PowerPiece)
        assert f(1.5) == pytest.approx(2.25)

    def test_to_dict_is_accepted_by_from_dict(self):
        f = plateau()
        assert MonotoneFn.from_dict(f.to_dict()).breakpoints == f.breakpoints

    def test_missing_domain(self):
        with pytest.raises(ConfigError) as e:
            MonotoneFn.from_dict({"pieces": [{"kind": "affine"}]})
        assert e.value.field == "f.domain"

    def test_unknown_piece(self):
        with pytest.raises(ConfigError) as e:
            MonotoneFn.from_dict({"domain": [0, 1], "pieces": [{"kind": "spline"}]}, "phis[1]")
        assert e.value.field == "phis[1].pieces[0].kind"

    def test_exp_piece(self):
        f = MonotoneFn.from_dict({"domain": [0, 1], "pieces": [{"kind": "exp", "rate": 2}]})
        assert f(0.5) == pytest.approx(np.e)
        assert f.pseudo_inverse()(np.e) == pytest.approx(0.5)

    def test_registered_callable(self):
        register_callable("cube", lambda x: x ** 3, np.cbrt)
        f = MonotoneFn.from_dict({"domain": [0, 2], "pieces": [{"kind": "callable", "name": "cube"}]})
        assert f(2) == pytest.approx(8)
        assert f.pseudo_inverse()(8) == pytest.approx(2)
        assert MonotoneFn.from_dict(f.to_dict())(1.5) == pytest.approx(3.375)

    def test_unregistered_callable(self):
        f = from_callable(np.cbrt, 0, 8)
        # no closed form inverse, so this goes through bisection
        assert f.pseudo_inverse()(1.5) == pytest.approx(3.375, abs=1e-9)
        with pytest.raises(ConfigError):
            f.to_dict()
        with pytest.raises(ConfigError):
            MonotoneFn.from_dict({"domain": [0, 1], "pieces": [{"kind": "callable", "name": "nope"}]})

    def test_uncovered_domain(self):
        pieces = [
            {"kind": "step", "start": 0, "end": 1, "value": 0},
            {"kind": "step", "start": 1, "end": 2, "value": 1},
        ]
        with pytest.raises(ConfigError):
            MonotoneFn.from_dict({"domain": [0, 3], "pieces": pieces})


@st.composite
def piecewise_affine(draw):
    """Unit-length affine pieces, possibly flat, with nonnegative jumps between them"""
    n = draw(st.integers(1, 4))
    slopes = draw(st.lists(st.one_of(st.just(0.0), st.floats(0.1, 2)), min_size=n, max_size=n))
    jumps = draw(st.lists(st.floats(0, 1), min_size=n, max_size=n))
    level = 0.0
    pieces = []
    for k, (slope, jump) in enumerate(zip(slopes, jumps)):
        if k > 0:
            level += jump
        pieces.append(AffinePiece(k, k + 1, slope, level - slope * k))
        level = slope * (k + 1) + level - slope * k
    return MonotoneFn(pieces)


class TestInverseProperties:
    @given(piecewise_affine(), st.floats(0, 1))
    @settings(max_examples=200, deadline=None)
    def test_sup_inverse_of_value(self, f, t):
        x = f.domain[1] * t
        assert f.pseudo_inverse("sup")(f(x)) >= x - 1e-9
        assert f.pseudo_inverse("quantile")(f(x)) <= x + 1e-9

    @given(piecewise_affine(), st.floats(0, 1))
    @settings(max_examples=200, deadline=None)
    def test_value_between_lateral_limits(self, f, t):
        lo, hi = f.codomain
        y = lo + (hi - lo) * t
        x = f.pseudo_inverse("sup")(y)
        assert f.left(x) <= y + 1e-9
        assert y <= f.right(x) + 1e-9

    @given(piecewise_affine(), st.floats(0, 1), st.floats(0, 1))
    @settings(max_examples=200, deadline=None)
    def test_inverse_is_nondecreasing(self, f, s, t):
        lo, hi = f.codomain
        y1, y2 = sorted([lo + (hi - lo) * s, lo + (hi - lo) * t])
        for flavor in ("sup", "inf", "quantile"):
            g = f.pseudo_inverse(flavor)
            assert g(y1) <= g(y2) + 1e-9
