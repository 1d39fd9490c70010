import pickle
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from backend.services.exact_field import (
    ONE, R, S, T, ZERO, from_text, product, rf, rf_arith, rf_normalize, specialize,
    substitute, to_text, torsion_unit_test
)
from backend.utils.exceptions import (
    DegreeLimitError, ExpressionParseError, FieldDivisionByZeroError, ForbiddenParameterError,
    IndeterminatePresentError, PoleError, ValidationError, ZeroDenominatorError, ZeroInputError
)
from backend.utils.validation import InputValidator


@pytest.mark.unit
class TestNormalize:
    def test_cancels_common_factor(self):
        assert rf_normalize({(2, 0): 1, (1, 0): -1}, {(1, 0): 1}) == S - 1

    def test_sign_is_canonical(self):
        num = ((S - T) ** 2).numerator
        den = (T - S).numerator
        assert rf_normalize(num, den) == T - S

    def test_zero_numerator(self):
        assert rf_normalize({(0, 0): 0}, {(0, 0): 5}).is_zero()

    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominatorError):
            rf_normalize({(1, 0): 1}, {})

    def test_rational_coefficients_are_cleared(self):
        assert rf_normalize({(1, 0): Fraction(1, 2)}, {(0, 1): Fraction(1, 3)}) == Fraction(3, 2) * S / T

    def test_equal_fractions_share_text(self):
        a = rf_normalize({(1, 0): 2}, {(0, 1): 4})
        b = rf_normalize({(1, 0): 1}, {(0, 1): 2})
        assert to_text(a) == to_text(b)


@pytest.mark.unit
class TestArithmetic:
    def test_examples(self):
        assert rf_arith(S, S, "÷") == ONE
        assert rf_arith(1 / (S - T), 1 / (T - S), "+") == ZERO
        assert rf_arith(S * T, T * S, "−") == ZERO

    def test_division_by_zero(self):
        with pytest.raises(FieldDivisionByZeroError):
            S / ZERO

    def test_unknown_operator(self):
        with pytest.raises(ValueError):
            rf_arith(S, T, "%")

    def test_immutable(self):
        with pytest.raises(AttributeError):
            S.foo = 1

    def test_product(self):
        assert product([S, T, 2]) == 2 * S * T
        assert product([]) == ONE

    def test_degree_cap(self):
        with pytest.raises(DegreeLimitError):
            S ** 65


@pytest.mark.unit
class TestSpecialize:
    def test_examples(self):
        assert specialize(S / T, 2, 3) == Fraction(2, 3)
        assert specialize(S ** 4, Fraction(7, 3), 5) == Fraction(2401, 81)

    def test_pole(self):
        with pytest.raises(PoleError):
            specialize(1 / (S - T), 2, 2)

    def test_r_is_formal(self):
        with pytest.raises(IndeterminatePresentError):
            specialize(R + S, 2, 3)

    def test_construction_guard(self):
        with pytest.raises(ForbiddenParameterError):
            specialize(S, 1, 3, construction=True)
        with pytest.raises(ForbiddenParameterError):
            specialize(S, 2, 2, construction=True)

    def test_substitute(self):
        assert substitute(S - T, t=S).is_zero()
        assert substitute(R ** 2 + 1, r=-1) == 2
        with pytest.raises(PoleError):
            substitute(1 / (S - T), t=S)
        with pytest.raises(ValueError):
            substitute(S, x=1)


@pytest.mark.unit
class TestTorsionUnit:
    def test_units(self):
        assert torsion_unit_test(ONE)
        assert torsion_unit_test(-ONE)

    @pytest.mark.parametrize("n", [1, 2, -1, -3, 8])
    def test_powers_of_r(self, n):
        assert not torsion_unit_test(R ** n)

    def test_other_constants(self):
        assert not torsion_unit_test(rf(2))

    def test_zero(self):
        with pytest.raises(ZeroInputError):
            torsion_unit_test(ZERO)


@pytest.mark.unit
class TestTextCodec:
    def test_round_trip(self):
        value = (S ** 2 - T) / (R + 3)
        assert from_text(to_text(value)) == value

    def test_parse(self):
        assert from_text("s^2 - s") / from_text("s") == S - 1
        assert from_text("(1 - s)*(1 - t)") == (1 - S) * (1 - T)

    @pytest.mark.parametrize("text", ["x + 1", "s +", "import os"])
    def test_rejects(self, text):
        with pytest.raises(ExpressionParseError):
            from_text(text)

    def test_rejects_overlong_expression(self):
        text = " + ".join(["s"] * InputValidator.MAX_EXPRESSION_LENGTH)
        with pytest.raises(ExpressionParseError) as info:
            from_text(text)
        assert info.value.error_code == "BAD_EXPRESSION"
        assert isinstance(info.value.cause, ValidationError)

    def test_pickle_keeps_large_values(self):
        value = (1 + S + T + R) ** 12 / (S - T)
        assert len(to_text(value)) > InputValidator.MAX_EXPRESSION_LENGTH
        assert pickle.loads(pickle.dumps(value)) == value


small_ints = st.integers(min_value=-5, max_value=5)


@st.composite
def elements(draw):
    """Small random elements of Q(s, t, r)"""
    terms = draw(st.dictionaries(
        st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1)), small_ints, max_size=3
    ))
    numerator = rf_normalize(terms or {(0, 0, 0): 0}, {(0, 0, 0): 1})
    denominator = draw(st.sampled_from([ONE, S, T + 1, S - T, R]))
    return numerator / denominator


@pytest.mark.property
class TestFieldAxioms:
    @settings(max_examples=40, deadline=None)
    @given(elements(), elements(), elements())
    def test_ring_laws(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a

    @settings(max_examples=40, deadline=None)
    @given(elements())
    def test_inverse(self, a):
        if not a.is_zero():
            assert a * a.inverse() == ONE

    @settings(max_examples=40, deadline=None)
    @given(elements())
    def test_text_is_canonical(self, a):
        assert to_text(from_text(to_text(a))) == to_text(a)

    @settings(max_examples=40, deadline=None)
    @given(elements(), elements())
    def test_specialize_is_multiplicative(self, a, b):
        a, b = substitute(a, r=1), substitute(b, r=1)
        try:
            left = specialize(a * b, 2, 5)
            right = specialize(a, 2, 5) * specialize(b, 2, 5)
        except PoleError:
            return
        assert left == right
