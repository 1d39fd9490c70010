from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from backend.models.curve_models import INFINITY, LegendreCurve, LegendrePoint
from backend.services.elliptic_legendre import (
    EllipticLegendreService, ec_add, ec_neg, two_torsion, x_map
)
from backend.services.exact_field import ONE, S, T, ZERO
from backend.utils.exceptions import InvalidCurveError, OffCurveError


@pytest.fixture
def service():
    return EllipticLegendreService()


@pytest.fixture
def curve_with_point():
    """y^2 = x(x-1)(x-lam) with lam = 2 - s^2/2 passes through (2, s)"""
    curve = LegendreCurve(2 - S * S / 2, name="E_s")
    return curve, LegendrePoint.affine(2, S)


@pytest.mark.unit
class TestCurve:
    @pytest.mark.parametrize("lam", [0, 1])
    def test_degenerate_parameter(self, lam):
        with pytest.raises(InvalidCurveError):
            LegendreCurve(lam)

    def test_off_curve_point(self):
        curve = LegendreCurve(S)
        with pytest.raises(OffCurveError):
            ec_add(curve, LegendrePoint.affine(2, 1), curve.origin)

    def test_off_curve_origin(self):
        with pytest.raises(OffCurveError):
            LegendreCurve(S, origin=LegendrePoint.affine(2, 2))

    def test_torsion_points_lie_on_curve(self):
        curve = LegendreCurve(T)
        assert all(curve.contains(p) for p in two_torsion(curve))

    def test_x_map(self):
        assert x_map(LegendrePoint.infinity()) is INFINITY
        assert x_map(LegendrePoint.affine(S, ZERO)) == S


@pytest.mark.unit
class TestGroupLaw:
    def test_identity(self, curve_with_point):
        curve, p = curve_with_point
        assert ec_add(curve, p, curve.origin) == p
        assert ec_add(curve, curve.origin, p) == p

    def test_inverse(self, curve_with_point):
        curve, p = curve_with_point
        assert ec_add(curve, p, ec_neg(curve, p)) == curve.origin

    def test_commutative(self, curve_with_point):
        curve, p = curve_with_point
        tau1 = two_torsion(curve)[1]
        assert ec_add(curve, p, tau1) == ec_add(curve, tau1, p)

    def test_associative(self, curve_with_point):
        curve, p = curve_with_point
        _, tau1, tau2, _ = two_torsion(curve)
        left = ec_add(curve, ec_add(curve, p, tau1), tau2)
        right = ec_add(curve, p, ec_add(curve, tau1, tau2))
        assert left == right

    def test_sums_stay_on_curve(self, curve_with_point):
        curve, p = curve_with_point
        doubled = ec_add(curve, p, p)
        assert curve.contains(doubled)
        assert curve.contains(ec_add(curve, doubled, p))

    def test_two_torsion_has_order_two(self):
        curve = LegendreCurve(S)
        for point in two_torsion(curve):
            assert ec_add(curve, point, point) == curve.origin


@pytest.mark.unit
class TestTranslationPermutation:
    @pytest.mark.parametrize("k, expected", [
        (0, (0, 1, 2, 3)),
        (1, (1, 0, 3, 2)),
        (2, (2, 3, 0, 1)),
        (3, (3, 2, 1, 0)),
    ])
    def test_symbolic_lambda(self, service, k, expected):
        assert service.translation_permutation(service.curve(S), k) == expected

    def test_klein_four(self, service):
        assert service.klein_four_holds(service.curve(T))

    def test_bad_index(self, service):
        with pytest.raises(ValueError):
            service.translation_permutation(service.curve(S), 4)

    def test_origin_at_infinity(self, service):
        curve = LegendreCurve(S, origin=LegendrePoint.infinity())
        assert service.translation_permutation(curve, 3) == (0, 1, 2, 3)
        assert service.translation_permutation(curve, 1) == (2, 3, 0, 1)


lambdas = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@pytest.mark.property
@settings(max_examples=25, deadline=None)
@given(lambdas, st.integers(0, 3))
def test_translations_are_involutions(lam, k):
    assume(lam not in (Fraction(0), Fraction(1)))
    service = EllipticLegendreService()
    curve = service.curve(lam)
    perm = service.translation_permutation(curve, k)
    assert tuple(perm[perm[i]] for i in range(4)) == (0, 1, 2, 3)
    assert service.klein_four_holds(curve)
    assert curve.a2 == -(ONE + lam)
