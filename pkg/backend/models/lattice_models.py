from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..utils.exceptions import UnknownCurveError


class CurveId(Enum):
    """The 24 smooth rational curves of the double Kummer pencil, in report order"""
    E0 = 0
    E1 = 1
    E2 = 2
    E3 = 3
    F0 = 4
    F1 = 5
    F2 = 6
    F3 = 7
    C00 = 8
    C01 = 9
    C02 = 10
    C03 = 11
    C10 = 12
    C11 = 13
    C12 = 14
    C13 = 15
    C20 = 16
    C21 = 17
    C22 = 18
    C23 = 19
    C30 = 20
    C31 = 21
    C32 = 22
    C33 = 23

    @property
    def index(self) -> int:
        return self.value

    @property
    def kind(self) -> str:
        return self.name[0]

    @property
    def label(self) -> str:
        return self.name

    @property
    def indices(self) -> Tuple[int, ...]:
        """(i,) for E_i and F_i, (i, j) for C_ij"""
        return tuple(int(ch) for ch in self.name[1:])

    @classmethod
    def E(cls, i: int) -> "CurveId":
        return cls[f"E{i}"]

    @classmethod
    def F(cls, j: int) -> "CurveId":
        return cls[f"F{j}"]

    @classmethod
    def C(cls, i: int, j: int) -> "CurveId":
        return cls[f"C{i}{j}"]

    @classmethod
    def parse(cls, label: str) -> "CurveId":
        try:
            return cls[label.strip().upper()]
        except (KeyError, AttributeError):
            raise UnknownCurveError(f"Unknown curve label {label!r}", details={'label': label}) from None

    @classmethod
    def ordered(cls) -> List["CurveId"]:
        return sorted(cls, key=lambda c: c.value)

    def __lt__(self, other: "CurveId") -> bool:
        return self.value < other.value


CURVE_COUNT = len(CurveId)


def expected_pairing(a: CurveId, b: CurveId) -> int:
    """Incidence rule of the double Kummer pencil"""
    if a is b:
        return -2
    kinds = {a.kind, b.kind}
    if kinds == {"E", "C"}:
        e, c = (a, b) if a.kind == "E" else (b, a)
        return 1 if c.indices[0] == e.indices[0] else 0
    if kinds == {"F", "C"}:
        f, c = (a, b) if a.kind == "F" else (b, a)
        return 1 if c.indices[1] == f.indices[0] else 0
    return 0


@dataclass(frozen=True, eq=False)
class IntersectionTable:
    """Symmetric 24x24 integer pairing indexed by CurveId"""
    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=np.int64)
        if matrix.shape != (CURVE_COUNT, CURVE_COUNT):
            raise ValueError(f"Intersection table must be {CURVE_COUNT}x{CURVE_COUNT}, got {matrix.shape}")
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    def __getitem__(self, pair: Tuple[CurveId, CurveId]) -> int:
        a, b = pair
        return int(self.matrix[a.index, b.index])

    def __eq__(self, other) -> bool:
        return isinstance(other, IntersectionTable) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def validate(self) -> List[str]:
        """Return every violated table invariant; empty when the table is sound"""
        violations = []
        if not np.array_equal(self.matrix, self.matrix.T):
            violations.append("table is not symmetric")
        for a in CurveId.ordered():
            for b in CurveId.ordered():
                if b.index < a.index:
                    continue
                actual = self[a, b]
                wanted = expected_pairing(a, b)
                if actual != wanted:
                    violations.append(f"{a.label}.{b.label} = {actual}, expected {wanted}")
                elif self[b, a] != actual:
                    violations.append(f"{b.label}.{a.label} differs from {a.label}.{b.label}")
        return violations

    def submatrix(self, ids: Sequence[CurveId]) -> np.ndarray:
        index = [c.index for c in ids]
        return self.matrix[np.ix_(index, index)]

    def neighbors(self, curve: CurveId, within: Iterable[CurveId]) -> List[CurveId]:
        return [other for other in within if other is not curve and self[curve, other] == 1]

    def with_entry(self, a: CurveId, b: CurveId, value: int, symmetric: bool = True) -> "IntersectionTable":
        """Copy with one entry replaced (used to build corrupted fixtures)"""
        matrix = self.matrix.copy()
        matrix[a.index, b.index] = value
        if symmetric:
            matrix[b.index, a.index] = value
        return IntersectionTable(matrix)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ids': [c.label for c in CurveId.ordered()],
            'matrix': self.matrix.tolist()
        }


@dataclass(frozen=True)
class DivisorClass:
    """Integer combination of the 24 curve classes"""
    coefficients: Tuple[int, ...]
    name: Optional[str] = None

    def __post_init__(self):
        coefficients = tuple(int(c) for c in self.coefficients)
        if len(coefficients) != CURVE_COUNT:
            raise ValueError(f"DivisorClass needs {CURVE_COUNT} coefficients, got {len(coefficients)}")
        object.__setattr__(self, 'coefficients', coefficients)

    @classmethod
    def from_components(cls, components: Iterable[CurveId], name: Optional[str] = None) -> "DivisorClass":
        coefficients = [0] * CURVE_COUNT
        for curve in components:
            coefficients[curve.index] += 1
        return cls(tuple(coefficients), name)

    @classmethod
    def of(cls, curve: CurveId) -> "DivisorClass":
        return cls.from_components([curve], curve.label)

    def components(self) -> List[CurveId]:
        return [c for c in CurveId.ordered() if self.coefficients[c.index] != 0]

    def component_set(self) -> frozenset:
        return frozenset(self.components())

    def vector(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=np.int64)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __contains__(self, curve: CurveId) -> bool:
        return self.coefficients[curve.index] != 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'coefficients': {c.label: self.coefficients[c.index] for c in self.components()}
        }


@dataclass(frozen=True)
class ConfigAutomorphism:
    """Permutation of the 24 curves together with its action on the 2-form"""
    name: str
    permutation: Tuple[int, ...]
    character: int = 1

    def __post_init__(self):
        permutation = tuple(int(i) for i in self.permutation)
        if sorted(permutation) != list(range(CURVE_COUNT)):
            raise ValueError(f"{self.name}: not a permutation of the {CURVE_COUNT} curves")
        if self.character not in (1, -1):
            raise ValueError(f"{self.name}: character must be +1 or -1, got {self.character}")
        object.__setattr__(self, 'permutation', permutation)

    @classmethod
    def from_mapping(cls, name: str, mapping: Mapping[CurveId, CurveId], character: int) -> "ConfigAutomorphism":
        return cls(name, tuple(mapping[c].index for c in CurveId.ordered()), character)

    @classmethod
    def identity(cls) -> "ConfigAutomorphism":
        return cls("id", tuple(range(CURVE_COUNT)), 1)

    def __call__(self, curve: CurveId) -> CurveId:
        return CurveId(self.permutation[curve.index])

    def apply_divisor(self, divisor: DivisorClass) -> DivisorClass:
        coefficients = [0] * CURVE_COUNT
        for i, c in enumerate(divisor.coefficients):
            coefficients[self.permutation[i]] += c
        return DivisorClass(tuple(coefficients))

    def permutation_matrix(self) -> np.ndarray:
        """P with P[p(i), i] = 1, so that P e_i = e_{p(i)}"""
        matrix = np.zeros((CURVE_COUNT, CURVE_COUNT), dtype=np.int64)
        matrix[list(self.permutation), list(range(CURVE_COUNT))] = 1
        return matrix

    def same_action(self, other: "ConfigAutomorphism") -> bool:
        return self.permutation == other.permutation and self.character == other.character

    def is_identity(self) -> bool:
        return self.permutation == tuple(range(CURVE_COUNT))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'permutation': {c.label: CurveId(self.permutation[c.index]).label for c in CurveId.ordered()},
            'character': self.character
        }


@dataclass(frozen=True)
class PartialAction:
    """Automorphism known only on a few curves"""
    name: str
    mapping: Tuple[Tuple[CurveId, CurveId], ...]
    character: int

    def as_dict(self) -> Dict[CurveId, CurveId]:
        return dict(self.mapping)

    def __call__(self, curve: CurveId) -> CurveId:
        try:
            return self.as_dict()[curve]
        except KeyError:
            raise UnknownCurveError(
                f"{self.name} is not determined on {curve.label}",
                details={'curve': curve.label}
            ) from None

    def domain(self) -> List[CurveId]:
        return sorted(self.as_dict())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'mapping': {a.label: b.label for a, b in self.mapping},
            'character': self.character
        }


@dataclass(frozen=True)
class AutomorphismData:
    """Index permutations of {0,1,2,3} feeding make_automorphism"""
    e_permutation: Tuple[int, ...] = ()
    f_permutation: Tuple[int, ...] = ()
    e_equals_f: bool = False
    source: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)
