import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from conftest import CBRT2, SQRT2, SQRT3, field_elements, polys, rationals
from oracles import algebraic_sign
from nctorus.errors import (
    DivisionByZero,
    InvalidFieldSpec,
    ModeMismatch,
    ReducibleFieldSpec,
    UnsupportedInSymbolicMode,
)
from nctorus.exact_arith import (
    FieldElement,
    NumberField,
    Poly,
    from_coordinates,
    scalar_arith,
    scalar_coordinates,
    scalar_invert,
    scalar_sign,
)


def test_rational_add():
    assert scalar_arith(Fraction(1, 3), Fraction(1, 6), "add") == Fraction(1, 2)


def test_field_square_reduces(alpha):
    sq = scalar_arith(alpha, alpha, "mul")
    assert sq == FieldElement(SQRT2, [2, 0])
    assert sq.is_rational()


def test_symbolic_product_is_monomial():
    p = scalar_arith(Poly.var(1, 2), Poly.var(3, 4), "mul")
    assert p.terms == (((((1, 2), 1), ((3, 4), 1)), Fraction(1)),)
    assert str(p) == "t1_2*t3_4"


def test_mixed_fields_rejected(alpha):
    with pytest.raises(ModeMismatch):
        scalar_arith(alpha, SQRT3.gen, "add")
    with pytest.raises(ModeMismatch):
        scalar_arith(alpha, Poly.var(1, 2), "mul")


def test_invert_examples(alpha):
    assert scalar_invert(Fraction(2, 3)) == Fraction(3, 2)
    assert scalar_invert(alpha) == alpha / 2
    with pytest.raises(UnsupportedInSymbolicMode):
        scalar_invert(Poly.var(1, 2))
    with pytest.raises(DivisionByZero):
        scalar_invert(Fraction(0))
    with pytest.raises(DivisionByZero):
        scalar_invert(FieldElement(SQRT2, [0, 0]))


def test_sign_examples(alpha):
    assert scalar_sign(Fraction(-5, 7)) == -1
    assert scalar_sign(alpha - 1) == 1
    assert scalar_sign(FieldElement(SQRT2, [0])) == 0
    with pytest.raises(UnsupportedInSymbolicMode):
        scalar_sign(Poly.var(1, 2))


def test_sign_close_to_zero():
    # 99/70 is a convergent of sqrt(2): the difference is about 7e-5
    a = SQRT2.gen
    assert scalar_sign(a - Fraction(99, 70)) == -1
    assert scalar_sign(a - Fraction(8119, 5741)) == 1


def test_coordinates():
    c = scalar_coordinates(Fraction(3, 4))
    assert c.coords == (Fraction(3, 4),) and c.label_strings() == ["1"]
    c = scalar_coordinates(FieldElement(SQRT2, [1, 2]))
    assert c.coords == (1, 2) and c.label_strings() == ["1", "a"]
    p = 5 - Poly.var(1, 2) * Poly.var(3, 4)
    c = scalar_coordinates(p)
    assert c.label_strings() == ["1", "t1_2*t3_4"]
    assert c.coords == (5, -1)
    assert from_coordinates(c) == p


def test_field_spec_validation():
    with pytest.raises(InvalidFieldSpec):
        NumberField((-2, 0, 2), (1, 2))  # not monic
    with pytest.raises(InvalidFieldSpec):
        NumberField((-2, 0, 1), (2, 3))  # no sign change
    with pytest.raises(InvalidFieldSpec):
        NumberField((0, -1, 0, 1), (-2, 2))  # three roots inside
    with pytest.raises(ReducibleFieldSpec):
        NumberField((-4, 0, 1), (1, 3))  # x^2 - 4 has rational roots
    with pytest.raises(ReducibleFieldSpec):
        NumberField((-3, 7, -5, 1), (2, 4))  # (x - 1)^2 (x - 3), not square-free


def test_reducible_quartic_detected_on_inversion():
    # (x^2 - 2)(x^2 - 3) is accepted as declared; inverting x^2 - 2 exposes the factor
    fld = NumberField((6, 0, -5, 0, 1), (1, Fraction(3, 2)))
    a = fld.gen
    with pytest.raises(ReducibleFieldSpec):
        (a * a - 2).inverse()


@given(field_elements(SQRT2), field_elements(SQRT2), field_elements(SQRT2))
def test_field_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(field_elements(CBRT2), field_elements(CBRT2), field_elements(CBRT2))
def test_cubic_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(polys(), polys(), polys())
def test_poly_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


def test_inverse_times_self_is_one():
    rng = random.Random(7)
    for _ in range(1000):
        a = FieldElement(CBRT2, [Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(3)])
        if a.is_zero():
            continue
        assert a * a.inverse() == 1


@given(field_elements(SQRT2), field_elements(SQRT2))
def test_sign_multiplicative(a, b):
    assert scalar_sign(a) * scalar_sign(b) == scalar_sign(a * b)


@given(field_elements(SQRT3, bound=30, den=30))
def test_sign_matches_sympy(a):
    assert scalar_sign(a) == algebraic_sign(SQRT3, a.coeffs)


@given(field_elements(CBRT2, bound=5, den=5))
def test_cubic_sign_matches_sympy(a):
    assert scalar_sign(a) == algebraic_sign(CBRT2, a.coeffs)


@given(st.integers(0, 60))
def test_bisection_width_halves(k):
    lo, hi = SQRT2.root_bounds(k)
    assert hi - lo <= Fraction(1, 2 ** k)
    assert lo * lo <= 2 <= hi * hi


@given(rationals(), rationals())
def test_rational_sign_multiplicative(a, b):
    assume(a != 0 or b != 0)
    assert scalar_sign(a) * scalar_sign(b) == scalar_sign(a * b)


@given(field_elements(SQRT2))
def test_coordinates_round_trip(a):
    assert from_coordinates(scalar_coordinates(a)) == a


@given(polys())
def test_poly_coordinates_round_trip(p):
    assert from_coordinates(scalar_coordinates(p)) == p


def test_float_value(alpha):
    assert abs(float(alpha) - 2 ** 0.5) < 1e-15
    assert abs(float(CBRT2.gen) - 2 ** (1 / 3)) < 1e-15


@given(field_elements(SQRT3, bound=30, den=30))
def test_quadratic_inverse(a):
    if a.is_zero():
        return
    assert a * a.inverse() == 1
    assert a.inverse().inverse() == a
