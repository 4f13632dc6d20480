from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from poissonkit import QQ, DomainError, FieldSpec, InputError, Scalar, parse_scalar
from poissonkit.scalars import field_add, field_inv, field_mul, field_neg

PRIMES = [2, 3, 5, 7, 101]


def test_parse_field_names():
    assert FieldSpec.parse("Q") == QQ
    assert FieldSpec.parse("F7") == FieldSpec(7)
    assert str(FieldSpec(3)) == "F3"
    for bad in ["F4", "F1", "R", "F", "Fx"]:
        with pytest.raises(InputError):
            FieldSpec.parse(bad)


def test_non_prime_rejected():
    with pytest.raises(InputError):
        FieldSpec(9)


def test_parse_scalar_rational():
    assert parse_scalar("-3/7", QQ).value == Fraction(-3, 7)
    assert parse_scalar("4/2", QQ).value == 2
    with pytest.raises(InputError, match="zero denominator"):
        parse_scalar("1/0", QQ)
    for bad in ["1.5", "", "a", "1//2", "--1"]:
        with pytest.raises(InputError):
            parse_scalar(bad, QQ)


def test_parse_scalar_prime_field():
    assert parse_scalar("7", FieldSpec(5)).value == 2
    with pytest.raises(InputError):
        parse_scalar("-1", FieldSpec(5))
    with pytest.raises(InputError):
        parse_scalar("1/2", FieldSpec(5))


def test_fraction_maps_into_prime_field():
    f = FieldSpec(7)
    assert f.raw(Fraction(1, 2)) == 4
    with pytest.raises(DomainError):
        f.raw(Fraction(1, 7))


def test_inverse_of_zero():
    for f in [QQ, FieldSpec(3)]:
        with pytest.raises(DomainError):
            field_inv(Scalar.of(0, f))
        with pytest.raises(DomainError):
            Scalar.of(1, f) / 0


def test_mixed_fields_rejected():
    with pytest.raises(InputError):
        Scalar.of(1, FieldSpec(3)) + Scalar.of(1, FieldSpec(5))


def test_arrays_are_canonical():
    f = FieldSpec(5)
    arr = f.array(np.array([[7, -1], [5, 3]]))
    assert arr.dtype == np.int64
    assert arr.tolist() == [[2, 4], [0, 3]]
    q = QQ.array([Fraction(4, 2), Fraction(1, 3)])
    assert type(q[0]) is int and q[1] == Fraction(1, 3)


def test_fermat_inverse_matches_pow():
    for p in PRIMES:
        f = FieldSpec(p)
        for a in range(1, p):
            assert f.inv(a) == pow(a, p - 2, p)


rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 10**6)


@given(rationals, rationals, rationals)
def test_rational_field_laws(a, b, c):
    x, y, z = (Scalar.of(v) for v in (a, b, c))
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == Scalar.of(0)
    if a != 0:
        assert x * field_inv(x) == Scalar.of(1)


@given(st.sampled_from(PRIMES), st.integers(), st.integers(), st.integers())
def test_prime_field_laws(p, a, b, c):
    f = FieldSpec(p)
    x, y, z = (Scalar.of(v, f) for v in (a, b, c))
    assert field_add(field_add(x, y), z) == field_add(x, field_add(y, z))
    assert field_mul(field_mul(x, y), z) == field_mul(x, field_mul(y, z))
    assert field_add(x, field_neg(x)).value == 0
    assert (x * (y + z)).value == ((a * (b + c)) % p)
    if a % p:
        assert field_mul(x, field_inv(x)).value == 1


@given(st.sampled_from(PRIMES), st.integers(min_value=0, max_value=10**6))
def test_format_parse_round_trip(p, v):
    f = FieldSpec(p)
    s = Scalar.of(v, f)
    assert parse_scalar(str(s), f) == s


@given(rationals)
def test_rational_format_round_trip(q):
    s = Scalar.of(q)
    assert parse_scalar(str(s), QQ) == s
