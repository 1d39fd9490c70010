from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

from ..utils.exceptions import InvalidGroupError, NonInvolutiveMatrixError

MAX_GROUP_ORDER = 512


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.int64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class FiniteInvolutiveGroup:
    """
    Finite group given by its multiplication table, with an involutive automorphism theta.

    Elements are the indices 0..order-1; table[a, b] is the index of a*b.
    """
    table: np.ndarray
    theta: np.ndarray
    name: str = "G"

    def __post_init__(self):
        table = _readonly(self.table)
        order = table.shape[0] if table.ndim == 2 else 0
        if table.ndim != 2 or table.shape != (order, order) or order == 0:
            raise InvalidGroupError(
                f"{self.name}: multiplication table must be a non-empty square",
                error_code="INVALID_GROUP",
                details={'shape': list(table.shape)}
            )
        if order > MAX_GROUP_ORDER:
            raise InvalidGroupError(
                f"{self.name}: order {order} exceeds {MAX_GROUP_ORDER}",
                error_code="GROUP_TOO_LARGE"
            )
        object.__setattr__(self, 'table', table)
        theta = _readonly(self.theta if self.theta is not None else np.arange(order))
        object.__setattr__(self, 'theta', theta)
        problems = self.validate()
        if problems:
            raise InvalidGroupError(
                f"{self.name}: {problems[0]}",
                error_code="INVALID_GROUP",
                details={'problems': problems}
            )

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_table(
        cls,
        table: Sequence[Sequence[int]],
        theta: Optional[Sequence[int]] = None,
        name: str = "G"
    ) -> "FiniteInvolutiveGroup":
        table = np.asarray(table, dtype=np.int64)
        if theta is None:
            theta = np.arange(len(table))
        return cls(table, np.asarray(theta, dtype=np.int64), name)

    @classmethod
    def from_json(cls, payload: Dict[str, Any], name: str = "input") -> "FiniteInvolutiveGroup":
        """{order, table, theta}; theta defaults to the identity"""
        group = cls.from_table(payload['table'], payload.get('theta'), name)
        if group.order != payload.get('order', group.order):
            raise InvalidGroupError(
                f"{name}: declared order {payload['order']} does not match the table",
                error_code="INVALID_GROUP"
            )
        return group

    @classmethod
    def from_permutation_group(
        cls,
        group: PermutationGroup,
        automorphism: Optional[Callable[[Permutation], Permutation]] = None,
        name: str = "G"
    ) -> "FiniteInvolutiveGroup":
        """Tabulate a sympy permutation group; automorphism defaults to the identity"""
        elements = sorted(group.generate(), key=lambda p: p.array_form)
        index = {tuple(p.array_form): i for i, p in enumerate(elements)}
        table = [[index[tuple((a * b).array_form)] for b in elements] for a in elements]
        if automorphism is None:
            theta = list(range(len(elements)))
        else:
            theta = [index[tuple(automorphism(p).array_form)] for p in elements]
        return cls.from_table(table, theta, name)

    def with_theta(self, theta: Sequence[int], name: Optional[str] = None) -> "FiniteInvolutiveGroup":
        return FiniteInvolutiveGroup(self.table, np.asarray(theta), name or self.name)

    def trivialized(self) -> "FiniteInvolutiveGroup":
        return self.with_theta(np.arange(self.order))

    # -- structure ------------------------------------------------------------

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def identity(self) -> int:
        rows = np.flatnonzero((self.table == np.arange(self.order)).all(axis=1))
        return int(rows[0])

    @property
    def inverses(self) -> np.ndarray:
        return np.argmax(self.table == self.identity, axis=1)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def has_trivial_theta(self) -> bool:
        return bool((self.theta == np.arange(self.order)).all())

    def validate(self) -> List[str]:
        """Group axioms and theta conditions; empty when everything holds"""
        table, theta, n = self.table, self.theta, self.order
        everything = np.arange(n)
        if table.min() < 0 or table.max() >= n:
            return ["table entries out of range"]
        # Latin square: every row and every column is a permutation
        if not (np.sort(table, axis=1) == everything).all() or not (np.sort(table, axis=0).T == everything).all():
            return ["table is not a Latin square"]
        identities = np.flatnonzero((table == everything).all(axis=1))
        if len(identities) != 1 or not (table[:, identities[0]] == everything).all():
            return ["no two-sided identity"]
        problems = []
        for a in range(n):
            # (a b) c against a (b c) for every b, c
            if not (table[table[a]] == table[a][table]).all():
                problems.append(f"associativity fails for element {a}")
                break
        if theta.shape != (n,) or not (np.sort(theta) == everything).all():
            problems.append("theta is not a permutation of the elements")
            return problems
        if not (theta[table] == table[np.ix_(theta, theta)]).all():
            problems.append("theta is not a homomorphism")
        if not (theta[theta] == everything).all():
            problems.append("theta is not an involution")
        return problems

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'order': self.order,
            'table': self.table.tolist(),
            'theta': self.theta.tolist()
        }


@dataclass(frozen=True)
class CocycleClassSet:
    """Classes of 1-cocycles; each class is a sorted tuple of elements, led by its representative"""
    group_name: str
    classes: Tuple[Tuple[int, ...], ...]

    @property
    def representatives(self) -> List[int]:
        return [members[0] for members in self.classes]

    @property
    def count(self) -> int:
        return len(self.classes)

    def class_of(self, element: int) -> Optional[int]:
        for members in self.classes:
            if element in members:
                return members[0]
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'group': self.group_name,
            'count': self.count,
            'representatives': self.representatives,
            'class_sizes': [len(members) for members in self.classes]
        }


@dataclass(frozen=True, eq=False)
class TorusActionSpec:
    """Integer matrix g with g^2 = I acting on R^n / Z^n"""
    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        matrix = _readonly(self.matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
            raise NonInvolutiveMatrixError(
                "Torus action needs a non-empty square integer matrix",
                error_code="NON_SQUARE_MATRIX",
                details={'shape': list(matrix.shape)}
            )
        if not (matrix @ matrix == np.eye(matrix.shape[0], dtype=np.int64)).all():
            raise NonInvolutiveMatrixError(
                "Torus action matrix does not square to the identity",
                error_code="NON_INVOLUTIVE",
                details={'matrix': matrix.tolist()}
            )
        object.__setattr__(self, 'matrix', matrix)

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]], name: str = "") -> "TorusActionSpec":
        return cls(np.asarray(rows, dtype=np.int64), name)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'n': self.n, 'matrix': self.matrix.tolist()}


@dataclass(frozen=True)
class TorusColimitResult:
    """H^1 sizes along the doubling chain and the images of each level in the next"""
    spec_name: str
    levels: Tuple[int, ...]
    h1_sizes: Tuple[int, ...]
    image_sizes: Tuple[int, ...] = field(default_factory=tuple)

    @property
    def value(self) -> int:
        return self.image_sizes[-1]

    @property
    def stabilized(self) -> bool:
        return len(self.image_sizes) >= 2 and self.image_sizes[-1] == self.image_sizes[-2]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'spec': self.spec_name,
            'levels': list(self.levels),
            'h1_sizes': list(self.h1_sizes),
            'image_sizes': list(self.image_sizes),
            'value': self.value,
            'stabilized': self.stabilized
        }
