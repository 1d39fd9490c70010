from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

from ..services.exact_field import ONE, ZERO, RationalFunction, Scalar, rf, substitute, to_text
from ..utils.exceptions import DegenerateMapError, PoleError, ZeroInputError
from .curve_models import INFINITY, Coordinate, coordinate_text
from .lattice_models import CurveId

CYCLE_LENGTH = 8


@dataclass(frozen=True)
class TorsorElement:
    """Element (scalar, shift) of G_m x Z/8 acting on the smooth locus of an I8 fiber"""
    scalar: RationalFunction
    shift: int = 0

    def __post_init__(self):
        scalar = rf(self.scalar)
        if scalar.is_zero():
            raise ZeroInputError("Torsor scalar must be nonzero", error_code="ZERO_SCALAR")
        object.__setattr__(self, 'scalar', scalar)
        object.__setattr__(self, 'shift', self.shift % CYCLE_LENGTH)

    @classmethod
    def identity(cls) -> "TorsorElement":
        return cls(ONE, 0)

    def __mul__(self, other: "TorsorElement") -> "TorsorElement":
        return TorsorElement(self.scalar * other.scalar, self.shift + other.shift)

    def inverse(self) -> "TorsorElement":
        return TorsorElement(self.scalar.inverse(), -self.shift)

    def __pow__(self, exponent: int) -> "TorsorElement":
        return TorsorElement(self.scalar ** exponent, self.shift * exponent)

    def is_identity(self) -> bool:
        return self.shift == 0 and self.scalar == ONE

    def to_dict(self) -> Dict[str, Any]:
        return {'scalar': to_text(self.scalar), 'shift': self.shift}


@dataclass(frozen=True)
class MobiusMap:
    """x -> (a x + b) / (c x + d) on a P^1 coordinate"""
    a: RationalFunction
    b: RationalFunction
    c: RationalFunction
    d: RationalFunction

    def __post_init__(self):
        for name in ('a', 'b', 'c', 'd'):
            object.__setattr__(self, name, rf(getattr(self, name)))
        if self.determinant().is_zero():
            raise DegenerateMapError(
                "Fractional-linear map has zero determinant",
                error_code="DEGENERATE_MAP",
                details={'coefficients': [to_text(x) for x in self.coefficients()]}
            )

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(ONE, ZERO, ZERO, ONE)

    @classmethod
    def scaling(cls, factor: Scalar) -> "MobiusMap":
        return cls(rf(factor), ZERO, ZERO, ONE)

    @classmethod
    def _to_standard(cls, z1: Coordinate, z2: Coordinate, z3: Coordinate) -> "MobiusMap":
        """The map sending z1, z2, z3 to 0, 1, infinity"""
        if z1 is INFINITY:
            return cls(ZERO, z2 - z3, ONE, -z3)
        if z2 is INFINITY:
            return cls(ONE, -z1, ONE, -z3)
        if z3 is INFINITY:
            return cls(ONE, -z1, ZERO, z2 - z1)
        return cls(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))

    @classmethod
    def from_three_points(
        cls,
        source: Tuple[Coordinate, Coordinate, Coordinate],
        target: Tuple[Coordinate, Coordinate, Coordinate]
    ) -> "MobiusMap":
        """Unique map sending source[i] to target[i]"""
        return cls._to_standard(*target).inverse().compose(cls._to_standard(*source))

    def coefficients(self) -> Tuple[RationalFunction, ...]:
        return (self.a, self.b, self.c, self.d)

    def determinant(self) -> RationalFunction:
        return self.a * self.d - self.b * self.c

    def __call__(self, x: Coordinate) -> Coordinate:
        if x is INFINITY:
            return INFINITY if self.c.is_zero() else self.a / self.c
        x = rf(x)
        denominator = self.c * x + self.d
        if denominator.is_zero():
            return INFINITY
        return (self.a * x + self.b) / denominator

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other"""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def power(self, n: int) -> "MobiusMap":
        base = self if n >= 0 else self.inverse()
        result = MobiusMap.identity()
        for _ in range(abs(n)):
            result = base.compose(result)
        return result

    def normalized(self) -> "MobiusMap":
        """Scale so the last nonzero of d, c is 1"""
        pivot = self.d if not self.d.is_zero() else self.c
        return MobiusMap(self.a / pivot, self.b / pivot, self.c / pivot, self.d / pivot)

    def same_map(self, other: "MobiusMap") -> bool:
        """Equality in PGL2: all 2x2 minors of the coefficient rows vanish"""
        mine, theirs = self.coefficients(), other.coefficients()
        for i in range(4):
            for j in range(i + 1, 4):
                if not (mine[i] * theirs[j] - mine[j] * theirs[i]).is_zero():
                    return False
        return True

    def is_identity(self) -> bool:
        return self.same_map(MobiusMap.identity())

    def translation_amount(self) -> Optional[RationalFunction]:
        """k when the map is x -> x + k, else None"""
        if not self.c.is_zero() or self.a != self.d:
            return None
        return self.b / self.d

    def substitute(self, **values: Scalar) -> "MobiusMap":
        return MobiusMap(*(substitute(x, **values) for x in self.coefficients()))

    def to_dict(self) -> Dict[str, Any]:
        a, b, c, d = self.normalized().coefficients()
        return {'a': to_text(a), 'b': to_text(b), 'c': to_text(c), 'd': to_text(d)}


@dataclass(frozen=True)
class MarkedPoint:
    """Intersection of a section with a fiber component, in the component's raw coordinate"""
    section: CurveId
    raw: Coordinate

    def to_dict(self) -> Dict[str, Any]:
        return {'section': self.section.label, 'raw': coordinate_text(self.raw)}


@dataclass(frozen=True)
class ComponentChart:
    """
    Normalization of one fiber component onto G_m.

    The node toward the previous cycle position goes to 0 and the next one to
    infinity when orientation is 0, the other way round when it is 1; the
    result is multiplied by scale.
    """
    component: CurveId
    position: int
    nodes: Tuple[Tuple[CurveId, Coordinate], Tuple[CurveId, Coordinate]]
    marked: Tuple[MarkedPoint, ...]
    scale: RationalFunction = ONE
    orientation: int = 0

    def __post_init__(self):
        if self.orientation not in (0, 1):
            raise ValueError("orientation bit must be 0 or 1")
        object.__setattr__(self, 'scale', rf(self.scale))

    def _zero_and_pole(self) -> Tuple[Coordinate, Coordinate]:
        (_, previous), (_, following) = self.nodes
        return (previous, following) if self.orientation == 0 else (following, previous)

    def normalize(self, raw: Coordinate) -> RationalFunction:
        zero, pole = self._zero_and_pole()
        if raw is INFINITY:
            if pole is INFINITY or zero is INFINITY:
                raise PoleError(f"{self.component.label}: infinity is a node")
            return self.scale
        raw = rf(raw)
        if zero is INFINITY:
            value = ONE / (raw - pole)
        elif pole is INFINITY:
            value = raw - zero
        else:
            value = (raw - zero) / (raw - pole)
        if value.is_zero():
            raise PoleError(f"{self.component.label}: marked point sits on a node")
        return self.scale * value

    def raw_of(self, section: CurveId) -> Optional[Coordinate]:
        for point in self.marked:
            if point.section is section:
                return point.raw
        return None

    def with_calibration(self, scale: Scalar, orientation: int) -> "ComponentChart":
        return replace(self, scale=rf(scale), orientation=orientation)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'component': self.component.label,
            'position': self.position,
            'nodes': [{'curve': c.label, 'raw': coordinate_text(v)} for c, v in self.nodes],
            'marked': [p.to_dict() for p in self.marked],
            'scale': to_text(self.scale),
            'orientation': self.orientation
        }


@dataclass(frozen=True)
class MarkedPointTable:
    """Charts of the even-position components of the D1 cycle"""
    cycle: Tuple[CurveId, ...]
    charts: Tuple[ComponentChart, ...]
    zero_component: CurveId
    mode: str = "general"

    def chart(self, component: CurveId) -> ComponentChart:
        for chart in self.charts:
            if chart.component is component:
                return chart
        raise KeyError(component)

    def chart_of_section(self, section: CurveId) -> Optional[ComponentChart]:
        for chart in self.charts:
            if chart.raw_of(section) is not None:
                return chart
        return None

    def shift_of(self, chart: ComponentChart) -> int:
        return (chart.position - self.chart(self.zero_component).position) % len(self.cycle)

    def with_chart(self, chart: ComponentChart) -> "MarkedPointTable":
        charts = tuple(chart if c.component is chart.component else c for c in self.charts)
        return replace(self, charts=charts)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mode': self.mode,
            'cycle': [c.label for c in self.cycle],
            'zero_component': self.zero_component.label,
            'charts': [c.to_dict() for c in self.charts]
        }


@dataclass(frozen=True)
class CalibrationSolution:
    """Chosen scales and orientations plus the parameters the constraints leave free"""
    mode: str
    table: MarkedPointTable
    residual: Tuple[str, ...] = ()
    residual_values: Dict[str, List[str]] = field(default_factory=dict, compare=False, hash=False)
    solution_count: int = 1

    @property
    def scales(self) -> Dict[CurveId, RationalFunction]:
        return {c.component: c.scale for c in self.table.charts}

    @property
    def orientations(self) -> Dict[CurveId, int]:
        return {c.component: c.orientation for c in self.table.charts}

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mode': self.mode,
            'scales': {c.label: to_text(v) for c, v in sorted(self.scales.items())},
            'orientations': {c.label: v for c, v in sorted(self.orientations.items())},
            'residual': list(self.residual),
            'residual_values': {k: list(v) for k, v in sorted(self.residual_values.items())},
            'solution_count': self.solution_count
        }
