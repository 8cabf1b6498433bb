import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frobound.errors import InvalidRadicandError, RadicandMismatchError
from frobound.exactnum import QField, parse_qfield, qf_make, qf_sign, rational_between, squarefree_decompose

SQRT2 = QField.sqrt(2)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=60)


def elems(d=2):
    return st.builds(lambda a, b: QField(a, b, d), rationals, rationals)


def test_make_examples():
    assert qf_make(1, 0, 2) == 1
    assert qf_make(0, 1, 1) == 1
    assert qf_make(0, Fraction(1, 2), 2) == 1 / SQRT2


@pytest.mark.parametrize("d", [-1, 4, 8, 12, 18])
def test_bad_radicand(d):
    with pytest.raises(InvalidRadicandError):
        qf_make(1, 1, d)


def test_lowest_terms():
    x = QField(Fraction(6, -4), Fraction(10, 20), 3)
    assert (x.a, x.b) == (Fraction(-3, 2), Fraction(1, 2))
    assert x.a.denominator > 0


def test_ops_examples():
    assert (1 + SQRT2) * (1 - SQRT2) == -1
    assert SQRT2.inverse() == QField(0, Fraction(1, 2), 2)
    assert QField(0, Fraction(7, 10), 2) * SQRT2.inverse() == Fraction(7, 10)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        SQRT2 / QField(0)
    with pytest.raises(ZeroDivisionError):
        QField(0, 0, 5).inverse()


def test_mixed_radicands():
    with pytest.raises(RadicandMismatchError):
        QField.sqrt(2) + QField.sqrt(3)
    # rationals are welcome in every field
    assert QField.sqrt(3) + Fraction(1, 2) == QField(Fraction(1, 2), 1, 3)


def test_sign_examples():
    assert qf_sign(QField(0, 0, 2)) == 0
    assert qf_sign(QField(-2, 1, 2)) == -1
    assert qf_sign(QField(8, -2, 2)) == 1


def test_sqrt_and_squarefree():
    assert squarefree_decompose(72) == (6, 2)
    assert QField.sqrt(8) == 2 * SQRT2
    assert QField.sqrt(9) == 3
    assert QField.sqrt(0) == 0


def test_floor_and_str():
    assert (1 + 4 * SQRT2).floor() == 6
    assert QField(-1, 0, 0).floor() == -1
    assert str(QField(Fraction(8, 7), Fraction(-2, 7), 2)) == "8/7 - (2/7)√2"


def test_json_roundtrip():
    x = QField(Fraction(-3, 7), Fraction(5, 2), 3)
    assert QField.from_json(x.to_json()) == x
    assert QField.from_json("5/4") == Fraction(5, 4)


@pytest.mark.parametrize(
    "text, value",
    [
        ("1/2", QField(Fraction(1, 2))),
        ("-sqrt(2)/2", -SQRT2 / 2),
        ("3*sqrt(2)", 3 * SQRT2),
        ("1/2 - sqrt(2)/4", Fraction(1, 2) - SQRT2 / 4),
        ("-√3/2", -QField.sqrt(3) / 2),
    ],
)
def test_parse(text, value):
    assert parse_qfield(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1 2", "sqrt(x)"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_qfield(text)


def test_rational_between_stays_central():
    lo, hi = QField(0), QField(1)
    x = rational_between(lo, hi)
    assert Fraction(3, 8) <= x <= Fraction(5, 8)
    y = rational_between(-SQRT2 / 2, SQRT2 / 2)
    assert -SQRT2 / 2 < y < SQRT2 / 2


@given(elems(), elems(), elems())
def test_associative_distributive(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) - y == x


@given(elems(3))
def test_inverse(x):
    if x:
        assert x * x.inverse() == 1
        assert x / x == 1


@given(elems(5))
def test_normalization_idempotent(x):
    assert qf_make(x.a, x.b, x.d) == x
    assert QField(x.a, x.b, x.d).to_json() == x.to_json()


@given(elems(), elems())
def test_total_order(x, y):
    assert (x < y) + (x == y) + (x > y) == 1
    assert (x < y) == ((y - x).sign() > 0)


def test_sign_agrees_with_float():
    rng = random.Random(1)
    mpmath.mp.prec = 64
    checked = 0
    while checked < 10_000:
        d = rng.choice([2, 3, 5, 6, 7])
        a = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4))
        b = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4))
        x = QField(a, b, d)
        approx = x.to_mpf()
        if abs(approx) <= 1e-6:
            continue
        assert x.sign() == (1 if approx > 0 else -1)
        checked += 1


def test_rational_bounds_bracket():
    lo, hi = SQRT2.rational_bounds(40)
    assert lo <= math.sqrt(2) <= hi
    assert hi - lo <= Fraction(1, 2**40)
