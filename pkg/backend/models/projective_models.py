from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Sequence, Tuple

from sympy.polys.rings import PolyElement

from ..services.exact_field import ONE, ZERO, RationalFunction, Scalar, rf, to_text
from ..utils.exceptions import ZeroInputError

Matrix4 = Tuple[Tuple[RationalFunction, ...], ...]

HALF = Fraction(1, 2)


def lift(value: RationalFunction, like: Any) -> Any:
    """Move a field element into the coordinate ring of `like`"""
    if isinstance(like, PolyElement):
        return like.ring.ground_new(value.frac)
    return value


def _is_zero(value: Any) -> bool:
    return not value


@dataclass(frozen=True)
class ProjPoint3:
    """Homogeneous coordinates [w1 : w2 : w3 : w4]; entries in Q(s,t,r) or a polynomial ring over it"""
    coords: Tuple[Any, ...]

    def __post_init__(self):
        coords = tuple(
            c if isinstance(c, PolyElement) else rf(c) for c in self.coords
        )
        if len(coords) != 4:
            raise ValueError(f"ProjPoint3 needs 4 coordinates, got {len(coords)}")
        if all(_is_zero(c) for c in coords):
            raise ValueError("[0:0:0:0] is not a projective point")
        object.__setattr__(self, 'coords', coords)

    def __getitem__(self, index: int):
        return self.coords[index]

    def same_point(self, other: "ProjPoint3") -> bool:
        """Equality up to a global scalar, by cross-multiplication"""
        for i in range(4):
            for j in range(i + 1, 4):
                if not _is_zero(self.coords[i] * other.coords[j] - self.coords[j] * other.coords[i]):
                    return False
        return True

    def is_standard(self, k: int) -> bool:
        """True iff the point is the k-th coordinate point (k = 1..4)"""
        return all(_is_zero(c) == (i != k - 1) for i, c in enumerate(self.coords))

    def to_dict(self) -> Dict[str, Any]:
        return {'coords': [to_text(c) if isinstance(c, RationalFunction) else str(c) for c in self.coords]}


@dataclass(frozen=True)
class AlphaTriple:
    """Coefficients of the quadric template"""
    a1: RationalFunction
    a2: RationalFunction
    a3: RationalFunction

    def __post_init__(self):
        for name in ('a1', 'a2', 'a3'):
            value = rf(getattr(self, name))
            if value.is_zero():
                raise ZeroInputError(f"Template coefficient {name} must be nonzero", error_code="ZERO_ALPHA")
            object.__setattr__(self, name, value)

    @classmethod
    def of(cls, a1: Scalar, a2: Scalar, a3: Scalar) -> "AlphaTriple":
        return cls(rf(a1), rf(a2), rf(a3))

    def as_tuple(self) -> Tuple[RationalFunction, RationalFunction, RationalFunction]:
        return (self.a1, self.a2, self.a3)

    def product(self) -> RationalFunction:
        return self.a1 * self.a2 * self.a3

    def to_dict(self) -> Dict[str, Any]:
        return {'alpha1': to_text(self.a1), 'alpha2': to_text(self.a2), 'alpha3': to_text(self.a3)}


@dataclass(frozen=True)
class QuadricForm:
    """q(w) = w^T A w with A symmetric over Q(s,t,r)"""
    matrix: Matrix4

    def __post_init__(self):
        rows = tuple(tuple(rf(x) for x in row) for row in self.matrix)
        if len(rows) != 4 or any(len(row) != 4 for row in rows):
            raise ValueError("QuadricForm needs a 4x4 matrix")
        for i in range(4):
            for j in range(i + 1, 4):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("QuadricForm matrix must be symmetric")
        if all(x.is_zero() for row in rows for x in row):
            raise ValueError("QuadricForm must be nonzero")
        object.__setattr__(self, 'matrix', rows)

    @classmethod
    def from_monomials(cls, coefficients: Dict[Tuple[int, int], Scalar]) -> "QuadricForm":
        """Build from {(i, j): coefficient of w_i w_j} with 1-based i <= j"""
        rows = [[ZERO] * 4 for _ in range(4)]
        for (i, j), coefficient in coefficients.items():
            value = rf(coefficient)
            if i == j:
                rows[i - 1][i - 1] = rows[i - 1][i - 1] + value
            else:
                rows[i - 1][j - 1] = rows[i - 1][j - 1] + value * HALF
                rows[j - 1][i - 1] = rows[j - 1][i - 1] + value * HALF
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def template(cls, alpha: AlphaTriple) -> "QuadricForm":
        """a1 w2 w3 + a2 w1 w3 + a3 w1 w2 + (w1 + w2 + w3) w4"""
        return cls.from_monomials({
            (2, 3): alpha.a1, (1, 3): alpha.a2, (1, 2): alpha.a3,
            (1, 4): ONE, (2, 4): ONE, (3, 4): ONE,
        })

    @classmethod
    def segre(cls) -> "QuadricForm":
        """w1 w4 - w2 w3, the image of P^1 x P^1"""
        return cls.from_monomials({(1, 4): ONE, (2, 3): -ONE})

    def __add__(self, other: "QuadricForm") -> "QuadricForm":
        return QuadricForm(tuple(
            tuple(a + b for a, b in zip(row_a, row_b)) for row_a, row_b in zip(self.matrix, other.matrix)
        ))

    def evaluate(self, w: Sequence[Any]) -> Any:
        total = None
        for i in range(4):
            for j in range(4):
                entry = self.matrix[i][j]
                if entry.is_zero():
                    continue
                term = lift(entry, w[i]) * w[i] * w[j]
                total = term if total is None else total + term
        return total

    def polar(self, p: Sequence[Any], q: Sequence[Any]) -> Any:
        """q(p + q) - q(p) - q(q)"""
        total = ZERO
        for i in range(4):
            for j in range(4):
                total = total + 2 * self.matrix[i][j] * p[i] * q[j]
        return total

    def coefficient(self, i: int, j: int) -> RationalFunction:
        """Coefficient of w_i w_j (1-based)"""
        if i == j:
            return self.matrix[i - 1][i - 1]
        return 2 * self.matrix[i - 1][j - 1]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'coefficients': {
                f"w{i}w{j}": to_text(self.coefficient(i, j))
                for i in range(1, 5) for j in range(i, 5)
                if not self.coefficient(i, j).is_zero()
            }
        }


@dataclass(frozen=True)
class MukaiFrame:
    """Projective frame sending p00, p11, p22, p33 to the coordinate points"""
    s: RationalFunction
    t: RationalFunction
    points: Tuple[Tuple[Tuple[int, int], ProjPoint3], ...]
    determinant: RationalFunction
    matrix: Matrix4
    inverse: Matrix4
    alphas: AlphaTriple

    def point(self, i: int, j: int) -> ProjPoint3:
        return dict(self.points)[(i, j)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            's': to_text(self.s),
            't': to_text(self.t),
            'determinant': to_text(self.determinant),
            'matrix': [[to_text(x) for x in row] for row in self.matrix],
            'alphas': self.alphas.to_dict()
        }
