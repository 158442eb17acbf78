from fractions import Fraction

import pytest

from quasiarr.cyclotomic import CyclotomicField
from quasiarr.errors import ConductorMismatchError
from quasiarr.polynomial import parse_scalar

CONDUCTORS = (3, 4, 5, 6, 8, 12)


def _random_element(rng, field):
    return field.from_coeffs([Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4))) for _ in range(field.degree)])


def test_degree_is_totient():
    assert CyclotomicField.of(12).degree == 4
    assert CyclotomicField.of(5).degree == 4
    assert CyclotomicField.of(6).degree == 2
    assert CyclotomicField.of(2).is_rational


def test_field_is_cached():
    assert CyclotomicField.of(12) is CyclotomicField.of(12)


def test_root_has_order_conductor():
    for M in CONDUCTORS:
        field = CyclotomicField.of(M)
        assert field.root(M) == field.one
        assert field.root(1) ** M == 1
        assert all(field.root(k) != 1 for k in range(1, M))


def test_root_exponents_add(rng):
    for _ in range(200):
        M = int(rng.choice(CONDUCTORS))
        field = CyclotomicField.of(M)
        j, k = (int(v) for v in rng.integers(-20, 20, size=2))
        assert field.root(j) * field.root(k) == field.root(j + k)


def test_inverse_and_division(rng):
    for _ in range(200):
        field = CyclotomicField.of(int(rng.choice(CONDUCTORS)))
        x = _random_element(rng, field)
        if not x:
            continue
        assert x * x.inverse() == 1
        y = _random_element(rng, field)
        assert (y / x) * x == y


def test_zero_division():
    field = CyclotomicField.of(12)
    with pytest.raises(ZeroDivisionError):
        field.zero.inverse()
    with pytest.raises(ZeroDivisionError):
        field.one / 0


def test_imaginary_unit():
    field = CyclotomicField.of(12)
    i = field.root_of_unity(4)
    assert i * i == -1
    assert i.conjugate() == -i


def test_conjugate_inverts_roots():
    field = CyclotomicField.of(12)
    for k in range(12):
        assert field.root(k).conjugate() == field.root(-k)


def test_norm_is_real(rng):
    for _ in range(50):
        field = CyclotomicField.of(int(rng.choice(CONDUCTORS)))
        x = _random_element(rng, field)
        norm = x * x.conjugate()
        assert norm.conjugate() == norm


def test_root_of_unity_requires_divisor():
    field = CyclotomicField.of(12)
    assert field.root_of_unity(3) == field.root(4)
    with pytest.raises(ConductorMismatchError):
        field.root_of_unity(5)


def test_mixed_fields_rejected():
    with pytest.raises(ConductorMismatchError):
        CyclotomicField.of(3).root(1) + CyclotomicField.of(4).root(1)


def test_rational_queries():
    field = CyclotomicField.of(6)
    half = field(Fraction(1, 2))
    assert half.is_rational()
    assert half.rational() == Fraction(1, 2)
    with pytest.raises(ValueError):
        field.root(1).rational()


def test_text_round_trip(rng):
    for M in CONDUCTORS:
        field = CyclotomicField.of(M)
        for _ in range(5):
            x = _random_element(rng, field)
            assert parse_scalar(x.to_text(), field) == x


def test_text_form():
    field = CyclotomicField.of(3)
    assert field.root(1).to_text() == "(z)"
    assert (field.root(1) + 1).to_text() == "(1 + z)"
    assert (field.root(1) / 2).to_text() == "(z)/2"
    assert field(Fraction(-3, 4)).to_text() == "-3/4"
