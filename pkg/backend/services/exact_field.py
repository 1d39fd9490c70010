"""
Exact arithmetic in Q(s, t, r).

Elements are canonical reduced fractions of integer polynomials in s, t and the
formal indeterminate r, ordered graded-lexicographically with s > t > r. The
heavy lifting (gcd, cancellation) is done by sympy's sparse polynomial rings;
this module pins down canonical form, specialization and the text codec.
"""

import operator
from fractions import Fraction
from functools import reduce
from typing import Callable, Dict, Iterable, Mapping, Tuple, Union

from sympy import Poly, Symbol, together
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.domains import QQ, ZZ
from sympy.polys.fields import FracElement, field
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement

from config import config
from ..utils.exceptions import (
    DegreeLimitError, ExpressionParseError, FieldDivisionByZeroError,
    IndeterminatePresentError, PoleError,
    ValidationError, ZeroDenominatorError, ZeroInputError, ErrorHandler
)
from ..utils.validation import InputValidator

GENERATOR_NAMES: Tuple[str, ...] = ("s", "t", "r")

FIELD, _S, _T, _R = field(",".join(GENERATOR_NAMES), ZZ, grlex)
RING = FIELD.ring
RING_QQ = RING.clone(domain=QQ)
# sympy domain view of the field, used for DomainMatrix and polynomial rings over it
DOMAIN = FIELD.to_domain()

Scalar = Union["RationalFunction", FracElement, PolyElement, Fraction, int]
Exponents = Tuple[int, ...]
Poly2 = PolyElement

_SYMBOLS = {name: Symbol(name) for name in GENERATOR_NAMES}
_TRANSFORMATIONS = standard_transformations + (convert_xor,)


def total_degree(poly: PolyElement) -> int:
    """Total degree of a polynomial; 0 for constants and for zero"""
    return max((sum(monom) for monom in poly.itermonoms()), default=0)


def _check_degree(frac: FracElement) -> None:
    cap = config.arithmetic.max_degree
    degree = max(total_degree(frac.numer), total_degree(frac.denom))
    if degree > cap:
        raise DegreeLimitError(
            f"Rational function of degree {degree} exceeds KUMMER_MAX_DEGREE={cap}",
            error_code="DEGREE_LIMIT",
            details={'degree': degree, 'max_degree': cap}
        )


class RationalFunction:
    """Immutable canonical element of Q(s, t, r)"""

    __slots__ = ("_frac",)

    def __init__(self, frac: FracElement):
        if frac.denom.LC < 0:
            # only negative powers leave the sign of the denominator loose
            frac = frac.raw_new(-frac.numer, -frac.denom)
        _check_degree(frac)
        object.__setattr__(self, "_frac", frac)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    # -- construction -------------------------------------------------

    @classmethod
    def coerce(cls, value: Scalar) -> "RationalFunction":
        """Lift integers, Fractions, sympy fractions and polynomials into the field"""
        if isinstance(value, RationalFunction):
            return value
        return cls(_to_frac(value))

    @property
    def frac(self) -> FracElement:
        """Underlying sympy fraction, canonical"""
        return self._frac

    @property
    def numerator(self) -> PolyElement:
        return self._frac.numer

    @property
    def denominator(self) -> PolyElement:
        return self._frac.denom

    # -- queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._frac.numer

    def is_constant(self) -> bool:
        return self._frac.numer.is_ground and self._frac.denom.is_ground

    def degree_in(self, name: str) -> Tuple[int, int]:
        """(numerator degree, denominator degree) in one generator"""
        index = GENERATOR_NAMES.index(name)
        gen = RING.gens[index]
        return max(self.numerator.degree(gen), 0), max(self.denominator.degree(gen), 0)

    def involves(self, name: str) -> bool:
        return self.degree_in(name) != (0, 0)

    def to_fraction(self) -> Fraction:
        """Value of a constant element"""
        if not self.is_constant():
            raise IndeterminatePresentError(
                f"{self} is not a constant",
                error_code="NOT_CONSTANT"
            )
        return Fraction(int(self.numerator.LC or 0), int(self.denominator.LC))

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        try:
            return RationalFunction(self._frac + _to_frac(other))
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return RationalFunction(self._frac - _to_frac(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        try:
            return RationalFunction(_to_frac(other) - self._frac)
        except TypeError:
            return NotImplemented

    def __mul__(self, other):
        try:
            return RationalFunction(self._frac * _to_frac(other))
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            divisor = _to_frac(other)
        except TypeError:
            return NotImplemented
        if not divisor:
            raise FieldDivisionByZeroError(
                f"Division of {self} by zero",
                error_code="DIVISION_BY_ZERO"
            )
        return RationalFunction(self._frac / divisor)

    def __rtruediv__(self, other):
        try:
            dividend = _to_frac(other)
        except TypeError:
            return NotImplemented
        return RationalFunction.coerce(dividend) / self

    def __neg__(self):
        return RationalFunction(-self._frac)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0 and self.is_zero():
            raise FieldDivisionByZeroError("Negative power of zero", error_code="DIVISION_BY_ZERO")
        return RationalFunction(self._frac ** exponent)

    def inverse(self) -> "RationalFunction":
        return self ** -1

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            return self._frac == _to_frac(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self._frac.numer, self._frac.denom))

    def __repr__(self):
        return f"RationalFunction({self._frac.as_expr()})"

    def __str__(self):
        return str(self._frac.as_expr())

    def __reduce__(self):
        return (rf_normalize, (_term_map(self.numerator), _term_map(self.denominator)))


def _term_map(poly: PolyElement) -> Dict[Tuple[int, ...], Fraction]:
    return {monom: Fraction(int(c.numerator), int(c.denominator)) for monom, c in poly.terms()}


def _to_frac(value: Scalar) -> FracElement:
    if isinstance(value, RationalFunction):
        return value.frac
    if isinstance(value, FracElement) and value.field == FIELD:
        return value
    if isinstance(value, PolyElement) and value.ring == RING:
        return FIELD.new(value)
    if isinstance(value, bool):
        raise TypeError("booleans are not field elements")
    if isinstance(value, int):
        return FIELD(value)
    if isinstance(value, Fraction):
        return FIELD.new(RING(value.numerator), RING(value.denominator))
    raise TypeError(f"cannot coerce {type(value).__name__} into Q(s,t,r)")


S = RationalFunction(_S)
T = RationalFunction(_T)
R = RationalFunction(_R)
ZERO = RationalFunction(FIELD.zero)
ONE = RationalFunction(FIELD.one)

GENERATORS: Dict[str, RationalFunction] = {"s": S, "t": T, "r": R}


def rf(value: Scalar) -> RationalFunction:
    """Shorthand constructor"""
    return RationalFunction.coerce(value)


def _poly_from_terms(terms: Mapping[Exponents, Union[Fraction, int]]) -> Tuple[PolyElement, Fraction]:
    """Integer polynomial plus the rational factor cleared from its coefficients"""
    padded = {}
    for monom, coeff in terms.items():
        monom = tuple(monom) + (0,) * (len(GENERATOR_NAMES) - len(monom))
        if any(e < 0 for e in monom):
            raise ValueError(f"negative exponent in {monom}")
        if coeff:
            padded[monom] = QQ(Fraction(coeff).numerator, Fraction(coeff).denominator)
    poly_qq = RING_QQ.from_dict(padded) if padded else RING_QQ.zero
    multiplier, cleared = poly_qq.clear_denoms()
    return cleared.set_ring(RING), Fraction(int(multiplier.numerator), int(multiplier.denominator))


def _as_poly(value) -> Tuple[PolyElement, Fraction]:
    if isinstance(value, PolyElement):
        if value.ring == RING:
            return value, Fraction(1)
        if value.ring == RING_QQ:
            multiplier, cleared = value.clear_denoms()
            return cleared.set_ring(RING), Fraction(int(multiplier.numerator), int(multiplier.denominator))
    if isinstance(value, Mapping):
        return _poly_from_terms(value)
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return _poly_from_terms({(0, 0, 0): value})
    raise TypeError(f"expected a polynomial, got {type(value).__name__}")


def rf_normalize(num, den) -> RationalFunction:
    """
    Canonical reduced fraction num/den.

    Polynomials may be given as sympy ring elements or as sparse maps from
    exponent tuples (s, t[, r]) to rational coefficients.

    Raises:
        ZeroDenominatorError: if den is the zero polynomial
    """
    num_poly, num_scale = _as_poly(num)
    den_poly, den_scale = _as_poly(den)
    if not den_poly:
        raise ZeroDenominatorError("Denominator is zero", error_code="ZERO_DENOMINATOR")
    # p / c1 over q / c2 equals (p * c2) / (q * c1)
    scale = den_scale / num_scale
    numer = num_poly * scale.numerator
    denom = den_poly * scale.denominator
    return RationalFunction(FIELD.new(numer, denom))


_ARITH_OPS: Dict[str, Callable] = {
    "+": operator.add,
    "-": operator.sub,
    "−": operator.sub,
    "*": operator.mul,
    "×": operator.mul,
    "/": operator.truediv,
    "÷": operator.truediv,
}


def rf_arith(a: Scalar, b: Scalar, op: str) -> RationalFunction:
    """Field operation selected by its symbol"""
    try:
        func = _ARITH_OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return func(rf(a), rf(b))


def _evaluate_poly(poly: PolyElement, values: Mapping[int, Fraction]) -> Fraction:
    total = Fraction(0)
    for monom, coeff in poly.terms():
        term = Fraction(int(coeff))
        for index, exponent in enumerate(monom):
            if exponent:
                term *= values[index] ** exponent
        total += term
    return total


def specialize(f: Scalar, s0, t0, construction: bool = False) -> Fraction:
    """
    Evaluate f at (s, t) = (s0, t0).

    Raises:
        IndeterminatePresentError: if f involves r
        ForbiddenParameterError: construction flag set and s0, t0 in {0, 1} or s0 = t0
        PoleError: if the denominator vanishes at the point
    """
    f = rf(f)
    s0, t0 = Fraction(s0), Fraction(t0)
    if f.involves("r"):
        raise IndeterminatePresentError(
            f"Cannot specialize {f}: it involves the indeterminate r",
            error_code="R_PRESENT"
        )
    if construction:
        ErrorHandler.validate_construction_parameters(s0, t0)
    point = {0: s0, 1: t0, 2: Fraction(0)}
    denominator = _evaluate_poly(f.denominator, point)
    if denominator == 0:
        raise PoleError(
            f"{f} has a pole at (s, t) = ({s0}, {t0})",
            error_code="POLE",
            details={'s': str(s0), 't': str(t0)}
        )
    return _evaluate_poly(f.numerator, point) / denominator


def _substitute_poly(poly: PolyElement, images: Mapping[int, RationalFunction]) -> RationalFunction:
    gens = [images.get(i, GENERATORS[name]) for i, name in enumerate(GENERATOR_NAMES)]
    total = ZERO
    for monom, coeff in poly.terms():
        term = rf(int(coeff))
        for gen, exponent in zip(gens, monom):
            if exponent:
                term = term * gen ** exponent
        total = total + term
    return total


def substitute(f: Scalar, **values: Scalar) -> RationalFunction:
    """
    Replace generators by field elements, e.g. substitute(f, t=S) or substitute(f, r=-1).

    Raises:
        PoleError: if the denominator becomes zero
    """
    f = rf(f)
    images = {}
    for name, value in values.items():
        if name not in GENERATOR_NAMES:
            raise ValueError(f"unknown generator {name!r}")
        images[GENERATOR_NAMES.index(name)] = rf(value)
    denominator = _substitute_poly(f.denominator, images)
    if denominator.is_zero():
        raise PoleError(
            f"{f} has a pole under {values}",
            error_code="POLE",
            details={name: str(value) for name, value in values.items()}
        )
    return _substitute_poly(f.numerator, images) / denominator


def torsion_unit_test(f: Scalar) -> bool:
    """True iff f is a root of unity in Q(s,t,r), i.e. f = 1 or f = -1"""
    f = rf(f)
    if f.is_zero():
        raise ZeroInputError("torsion_unit_test requires a nonzero element", error_code="ZERO_INPUT")
    return f == ONE or f == -ONE


# -- text codec ---------------------------------------------------------

def _monomial_text(monom: Exponents) -> str:
    factors = []
    for name, exponent in zip(GENERATOR_NAMES, monom):
        if exponent == 1:
            factors.append(name)
        elif exponent > 1:
            factors.append(f"{name}^{exponent}")
    return "*".join(factors)


def _poly_text(poly: PolyElement) -> str:
    if not poly:
        return "(0)"
    terms = []
    for monom, coeff in poly.terms():
        mono = _monomial_text(monom)
        terms.append(f"({int(coeff)}*{mono})" if mono else f"({int(coeff)})")
    return "(" + "+".join(terms) + ")"


def to_text(f: Scalar) -> str:
    """Fully parenthesized canonical serialization: (numerator)/(denominator)"""
    f = rf(f)
    return f"{_poly_text(f.numerator)}/{_poly_text(f.denominator)}"


def from_text(text: str) -> RationalFunction:
    """
    Parse an expression over s, t, r, integers and + - * / ^.

    Raises:
        ExpressionParseError: on foreign tokens, syntax errors or division by zero
    """
    try:
        text = InputValidator.validate_expression(text)
    except ValidationError as e:
        raise ExpressionParseError(e.message, error_code="BAD_EXPRESSION", cause=e) from e
    try:
        expr = parse_expr(text, local_dict=dict(_SYMBOLS), transformations=_TRANSFORMATIONS)
        numer, denom = together(expr).as_numer_denom()
        gens = [_SYMBOLS[name] for name in GENERATOR_NAMES]
        num_terms = {monom: Fraction(int(c.p), int(c.q)) for monom, c in Poly(numer, *gens, domain=QQ).terms()}
        den_terms = {monom: Fraction(int(c.p), int(c.q)) for monom, c in Poly(denom, *gens, domain=QQ).terms()}
    except Exception as e:
        raise ExpressionParseError(
            f"Cannot parse expression {text!r}: {e}",
            error_code="BAD_EXPRESSION",
            cause=e
        ) from e
    try:
        return rf_normalize(num_terms, den_terms)
    except ZeroDenominatorError as e:
        raise ExpressionParseError(f"Expression {text!r} divides by zero", cause=e) from e


def product(values: Iterable[Scalar]) -> RationalFunction:
    return reduce(operator.mul, (rf(v) for v in values), ONE)
