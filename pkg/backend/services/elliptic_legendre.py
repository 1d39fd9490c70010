"""
Legendre-form elliptic curves and their 2-torsion translations.

The chord-tangent law is written once for the origin at infinity; the
curve's own origin is handled by P [+] Q = P + Q - O.
"""

from typing import List, Tuple

from ..models.curve_models import INFINITY, Coordinate, LegendreCurve, LegendrePoint
from ..utils.logging_config import LoggingMixin, log_performance
from .exact_field import ONE, Scalar, ZERO, rf

Permutation = Tuple[int, ...]


def negate(curve: LegendreCurve, point: LegendrePoint) -> LegendrePoint:
    """Inverse in the law with origin at infinity"""
    curve.require(point)
    if point.is_infinity:
        return point
    return LegendrePoint(point.x, -point.y)


def add_at_infinity(curve: LegendreCurve, p: LegendrePoint, q: LegendrePoint) -> LegendrePoint:
    """Chord-tangent addition with the point at infinity as identity"""
    curve.require(p)
    curve.require(q)
    if p.is_infinity:
        return q
    if q.is_infinity:
        return p

    if p.x == q.x:
        if p.y + q.y == ZERO:
            return LegendrePoint.infinity()
        # doubling a point with y != 0
        slope = (3 * p.x * p.x + 2 * curve.a2 * p.x + curve.a4) / (2 * p.y)
    else:
        slope = (q.y - p.y) / (q.x - p.x)

    x3 = slope * slope - curve.a2 - p.x - q.x
    y3 = -(p.y + slope * (x3 - p.x))
    return LegendrePoint(x3, y3)


def ec_add(curve: LegendreCurve, p: LegendrePoint, q: LegendrePoint) -> LegendrePoint:
    """Group law with identity curve.origin"""
    total = add_at_infinity(curve, p, q)
    return add_at_infinity(curve, total, negate(curve, curve.origin))


def ec_neg(curve: LegendreCurve, point: LegendrePoint) -> LegendrePoint:
    """Inverse for the law with identity curve.origin: 2O - P"""
    doubled_origin = add_at_infinity(curve, curve.origin, curve.origin)
    return add_at_infinity(curve, doubled_origin, negate(curve, point))


def two_torsion(curve: LegendreCurve) -> List[LegendrePoint]:
    """[tau_0, tau_1, tau_2, tau_3] over x = 0, 1, lambda, infinity"""
    return [
        LegendrePoint(ZERO, ZERO),
        LegendrePoint(ONE, ZERO),
        LegendrePoint(curve.lam, ZERO),
        LegendrePoint.infinity(),
    ]


def x_map(point: LegendrePoint) -> Coordinate:
    """Quotient by the elliptic involution, (x, y) -> x"""
    return INFINITY if point.is_infinity else point.x


class EllipticLegendreService(LoggingMixin):
    """Induced index permutations of the 2-torsion translations"""

    def curve(self, lam: Scalar, name: str = "E") -> LegendreCurve:
        return LegendreCurve(rf(lam), name=name)

    @log_performance
    def translation_permutation(self, curve: LegendreCurve, k: int) -> Permutation:
        """i -> j where tau_i [+] tau_k = tau_j"""
        if k not in range(4):
            raise ValueError(f"2-torsion index must be in 0..3, got {k}")
        torsion = two_torsion(curve)
        shift = torsion[k]
        permutation = []
        for point in torsion:
            image = ec_add(curve, point, shift)
            permutation.append(torsion.index(image))
        self.log_operation(
            "translation_permutation",
            curve=curve.name,
            k=k,
            permutation=permutation
        )
        return tuple(permutation)

    def klein_four_holds(self, curve: LegendreCurve) -> bool:
        """Translation by tau_1 followed by tau_2 equals translation by tau_3"""
        first = self.translation_permutation(curve, 1)
        second = self.translation_permutation(curve, 2)
        third = self.translation_permutation(curve, 3)
        return tuple(second[first[i]] for i in range(4)) == third
