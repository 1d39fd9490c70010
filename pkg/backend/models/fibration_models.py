from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from .lattice_models import CurveId, DivisorClass

KODAIRA_EULER = {"I1": 1, "I8": 8}


@dataclass(frozen=True)
class FiberConfiguration:
    """Singular fiber; I8 fibers carry their cyclically ordered components"""
    kodaira_type: str
    components: Tuple[CurveId, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.kodaira_type not in KODAIRA_EULER:
            raise ValueError(f"Unsupported fiber type {self.kodaira_type!r}")
        if self.kodaira_type == "I8" and len(self.components) != 8:
            raise ValueError(f"I8 fiber needs 8 components, got {len(self.components)}")
        if self.kodaira_type == "I1" and self.components:
            raise ValueError("I1 fibers carry no component data")
        object.__setattr__(self, 'components', tuple(self.components))

    @property
    def euler_number(self) -> int:
        return KODAIRA_EULER[self.kodaira_type]

    @property
    def component_count(self) -> int:
        return len(self.components) or 1

    def position_of(self, curve: CurveId) -> int:
        return self.components.index(curve)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'kodaira_type': self.kodaira_type,
            'components': [c.label for c in self.components]
        }


@dataclass(frozen=True)
class EllipticFibrationData:
    """Elliptic fibration given by a fiber class, its zero section and reducible fibers"""
    name: str
    fiber_class: DivisorClass
    zero_section: CurveId
    reducible_fibers: Tuple[FiberConfiguration, ...]
    i1_count: int
    chi: int = 2

    @property
    def euler_census(self) -> int:
        return sum(f.euler_number for f in self.reducible_fibers) + self.i1_count

    def cycle(self, index: int = 0) -> Tuple[CurveId, ...]:
        return self.reducible_fibers[index].components

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'fiber_class': self.fiber_class.to_dict(),
            'zero_section': self.zero_section.label,
            'cycles': [f.to_dict() for f in self.reducible_fibers],
            'i1_count': self.i1_count
        }


@dataclass(frozen=True)
class SectionRecord:
    """Fiber components met by a section, with positions counted from the zero component"""
    section: CurveId
    placements: Tuple[Tuple[CurveId, int], ...]

    @property
    def components(self) -> List[CurveId]:
        return [component for component, _ in self.placements]

    @property
    def positions(self) -> List[int]:
        return [position for _, position in self.placements]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'section': self.section.label,
            'placements': [
                {'component': component.label, 'position': position}
                for component, position in self.placements
            ]
        }


@dataclass(frozen=True)
class HeightBreakdown:
    """Summands of the self-height 2chi + 2(P.O) - sum of fiber corrections"""
    section: CurveId
    chi_term: int
    intersection_term: int
    fiber_terms: Tuple[Fraction, ...] = field(default_factory=tuple)

    @property
    def total(self) -> Fraction:
        return Fraction(self.chi_term + self.intersection_term) - sum(self.fiber_terms, Fraction(0))

    def summands(self) -> List[Fraction]:
        return [Fraction(self.chi_term), Fraction(self.intersection_term)] + [-t for t in self.fiber_terms]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'section': self.section.label,
            'summands': [str(term) for term in self.summands()],
            'total': str(self.total)
        }


@dataclass(frozen=True)
class MWProfile:
    """Mordell-Weil group shape Z^rank + (Z/exponent)"""
    rank: int
    torsion_exponent_claim: int = 1

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("Mordell-Weil rank cannot be negative")
        if self.torsion_exponent_claim < 1:
            raise ValueError("Torsion exponent must be positive")

    def describe(self) -> str:
        parts = [f"Z^{self.rank}"] if self.rank else []
        if self.torsion_exponent_claim > 1:
            parts.append(f"Z/{self.torsion_exponent_claim}")
        return " + ".join(parts) or "0"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rank': self.rank,
            'torsion_exponent_claim': self.torsion_exponent_claim,
            'group': self.describe()
        }
