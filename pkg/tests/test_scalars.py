from fractions import Fraction

from hypothesis import given, strategies as st

from twogauge.scalars import Phase, Scalar, parse_phase


def test_phase_arithmetic():
    assert Phase(Fraction(1, 2)) + Phase(Fraction(1, 2)) == Phase(0)
    assert Phase(Fraction(3, 4)).order == 4
    assert -Phase(Fraction(1, 3)) == Phase(Fraction(2, 3))
    assert parse_phase("5/4") == Phase(Fraction(1, 4))


def test_order_two_support_is_exact_rational():
    s = Scalar.from_phase(Phase(Fraction(1, 2)), 3) + Scalar.rational(5)
    assert s.is_rational()
    assert s.as_rational() == Fraction(2)


def test_half_turn_folding():
    # e^{2 pi i 3/4} = -e^{2 pi i 1/4}: the pair cancels exactly
    s = Scalar.from_phase(Phase(Fraction(1, 4))) + Scalar.from_phase(Phase(Fraction(3, 4)))
    assert s.is_zero()
    assert not s._terms


def test_numeric_zero_fallback():
    third = Phase(Fraction(1, 3))
    s = Scalar.one() + Scalar.from_phase(third) + Scalar.from_phase(third + third)
    assert not s.is_rational()
    assert s.is_zero()
    assert s == Scalar.zero()


def test_multiplication_convolves_phases():
    a = Scalar.from_phase(Phase(Fraction(1, 4)))
    assert a * a == Scalar.from_phase(Phase(Fraction(1, 2)))
    assert (a * a).as_rational() == Fraction(-1)


def test_scalar_identity_element():
    s = Scalar.from_phase(Phase(Fraction(1, 8)), Fraction(3, 7))
    assert s * Scalar.one() == s


small_fractions = st.fractions(
    min_value=Fraction(-3), max_value=Fraction(3), max_denominator=8
)


@given(small_fractions, small_fractions, small_fractions)
def test_addition_associative(a, b, c):
    x = Scalar.from_phase(Phase(a))
    y = Scalar.from_phase(Phase(b), 2)
    z = Scalar.rational(c)
    assert (x + y) + z == x + (y + z)


@given(small_fractions, small_fractions)
def test_multiplication_commutes(a, b):
    x = Scalar.from_phase(Phase(a))
    y = Scalar.from_phase(Phase(b), Fraction(1, 2))
    assert x * y == y * x


def test_json_forms():
    assert Scalar.rational(Fraction(1, 2)).to_json() == {"value": "1/2", "exact": True}
    payload = Scalar.from_phase(Phase(Fraction(1, 3))).to_json()
    assert payload["exact"] is False and abs(payload["re"] + 0.5) < 1e-9
