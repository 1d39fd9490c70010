from dataclasses import dataclass
from typing import Any, Dict, Optional, Union

from ..services.exact_field import ONE, ZERO, RationalFunction, Scalar, rf, to_text
from ..utils.exceptions import InvalidCurveError, OffCurveError


class _Infinity:
    """Marker for the point at infinity of P^1 and of a Weierstrass curve"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

Coordinate = Union[RationalFunction, _Infinity]


def coordinate_text(value) -> str:
    """Serialize a P^1 coordinate; infinity is written 'oo'"""
    return "oo" if value is INFINITY else to_text(value)


@dataclass(frozen=True)
class LegendrePoint:
    """Affine point (x, y) or the point at infinity when both are None"""
    x: Optional[RationalFunction] = None
    y: Optional[RationalFunction] = None

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("LegendrePoint needs both coordinates or neither")
        if self.x is not None:
            object.__setattr__(self, 'x', rf(self.x))
            object.__setattr__(self, 'y', rf(self.y))

    @classmethod
    def affine(cls, x: Scalar, y: Scalar) -> "LegendrePoint":
        return cls(rf(x), rf(y))

    @classmethod
    def infinity(cls) -> "LegendrePoint":
        return cls()

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def to_dict(self) -> Dict[str, Any]:
        if self.is_infinity:
            return {'x': 'oo', 'y': 'oo'}
        return {'x': to_text(self.x), 'y': to_text(self.y)}


@dataclass(frozen=True)
class LegendreCurve:
    """y^2 = x(x - 1)(x - lam) with a chosen origin (default (0, 0))"""
    lam: RationalFunction
    origin: LegendrePoint = LegendrePoint(ZERO, ZERO)
    name: str = "E"

    def __post_init__(self):
        lam = rf(self.lam)
        if lam == ZERO or lam == ONE:
            raise InvalidCurveError(
                f"Legendre parameter must avoid 0 and 1, got {lam}",
                error_code="INVALID_CURVE",
                details={'lambda': to_text(lam)}
            )
        object.__setattr__(self, 'lam', lam)
        if not self.contains(self.origin):
            raise OffCurveError(
                f"Origin {self.origin} is not on {self.name}",
                error_code="OFF_CURVE",
                details=self.origin.to_dict()
            )

    @property
    def a2(self) -> RationalFunction:
        return -(ONE + self.lam)

    @property
    def a4(self) -> RationalFunction:
        return self.lam

    def rhs(self, x: RationalFunction) -> RationalFunction:
        return x * (x - 1) * (x - self.lam)

    def contains(self, point: LegendrePoint) -> bool:
        if point.is_infinity:
            return True
        return point.y * point.y == self.rhs(point.x)

    def require(self, point: LegendrePoint) -> LegendrePoint:
        if not self.contains(point):
            raise OffCurveError(
                f"Point {point.to_dict()} is not on {self.name}: y^2 = x(x-1)(x-({self.lam}))",
                error_code="OFF_CURVE",
                details=point.to_dict()
            )
        return point

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'lambda': to_text(self.lam),
            'origin': self.origin.to_dict()
        }
