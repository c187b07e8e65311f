from flint import fmpq as Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbrst.parse import ParseError, parse_scalar
from qbrst.scalar import Field, PoleError, Scalar, ScalarZeroDivision, series_at_one

q = Scalar.q()


def test_basic_arithmetic():
    assert q + (-q) == 0
    assert (q - 1 / q) * q == q**2 - 1
    assert (q**2 - 1) / (q - 1) == q + 1
    assert (1 / q) ** -2 == q**2


def test_evaluation_and_poles():
    lam = q - 1 / q
    assert lam.evaluate(2) == Fraction(3, 2)
    assert lam.evaluate(1) == 0
    with pytest.raises(PoleError):
        (1 / (q - 1)).evaluate(1)
    with pytest.raises(ScalarZeroDivision):
        q / (q - q)


def test_series_at_one():
    assert series_at_one(q - 1 / q, 1) == [0, 2]
    assert series_at_one(q, 1) == [1, 1]
    assert series_at_one(1 / q, 2) == [1, -1, 1]
    with pytest.raises(PoleError):
        series_at_one(1 / (q - 1), 1)
    v, coeffs = (1 / (q - 1)).series_at_one(1, laurent=True)
    assert v == -1 and coeffs[0] == 1


def test_parse_literals():
    assert parse_scalar("(q^2-1)/q") == q - 1 / q
    assert parse_scalar("3/2") == Scalar(Fraction(3, 2))
    assert parse_scalar("-q^-2") == -(q ** -2)
    with pytest.raises(ParseError) as exc:
        parse_scalar("q+/2")
    assert exc.value.column == 3


def test_field_modes():
    num = Field(Fraction(3, 2))
    assert num.lam == Fraction(5, 6)
    assert num("q^2") == Fraction(9, 4)
    sym = Field()
    assert sym.symbolic and sym("q") == q


polys = st.lists(st.integers(-5, 5), min_size=1, max_size=4)


def _mk(cs, shift):
    out = Scalar(0)
    for k, c in enumerate(cs):
        out = out + c * q ** (k - shift)
    return out


scalars = st.builds(_mk, polys, st.integers(0, 2))
nonzero = scalars.filter(lambda s: not s.is_zero())


@settings(max_examples=60, deadline=None)
@given(scalars, scalars, scalars)
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@settings(max_examples=60, deadline=None)
@given(scalars, nonzero)
def test_division_inverts_multiplication(a, b):
    assert (a * b) / b == a


@settings(max_examples=60, deadline=None)
@given(scalars)
def test_printed_form_parses_back(a):
    assert parse_scalar(str(a)) == a


@settings(max_examples=40, deadline=None)
@given(scalars, scalars, st.sampled_from([Fraction(3, 2), Fraction(-2, 5), Fraction(7)]))
def test_evaluation_is_a_homomorphism(a, b, x):
    assert (a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x)
    assert (a + b).evaluate(x) == a.evaluate(x) + b.evaluate(x)
