from fractions import Fraction

import pytest

from quasiarr.errors import DeltaChainError, UnsupportedGroupError
from quasiarr.groups import BCMult, MultFn
from quasiarr.polynomial import MPoly, parse_poly
from quasiarr.quasi import quasi_graded
from quasiarr.reproduce import B2_QUASI, B2_TRIG, BC2_TRIG
from quasiarr.trig import (
    bc_conditions,
    bc_delta_parameters,
    bc_trig_quasi_space,
    delta_chain_check,
    direct_shift_check,
    is_trig_quasi_invariant,
    leading_term_derivative_check,
    leading_term_space,
    trig_conditions,
    trig_quasi_space,
)

from conftest import random_poly

PATTERNS = [(1, 0), (2, 0), (3, 0), (1, 1), (2, 1)]


def _shifts(l, r):
    return list(range(1, l + 1)) + [l + 2 * s for s in range(1, r + 1)]


def _symmetric_in_x1(rng, field, shifts, scale=Fraction(1)):
    """E(x1², x2) + x1·Π(x1² - (s·scale)²)·G(x1², x2): equal at ±s·scale for every listed s."""
    x1, x2 = MPoly.var(field, 2, 0), MPoly.var(field, 2, 1)
    even = random_poly(rng, field, 2, int(rng.integers(0, 4))).substitute([x1 * x1, x2])
    odd = x1 * random_poly(rng, field, 2, int(rng.integers(0, 2)), terms=2).substitute([x1 * x1, x2])
    for s in shifts:
        odd = odd * (x1 * x1 - MPoly.constant(field, 2, (s * scale) ** 2))
    return even + odd


def test_delta_chain_equals_direct_shifts(q, rng):
    alpha = (1, 0)
    for _ in range(200):
        l, r = PATTERNS[int(rng.integers(0, len(PATTERNS)))]
        if rng.random() < 0.5:
            p = _symmetric_in_x1(rng, q, _shifts(l, r))
            assert direct_shift_check(p, alpha, l, r)
        else:
            p = random_poly(rng, q, 2, int(rng.integers(1, 6))) + random_poly(rng, q, 2, 1)
        for ll, rr in PATTERNS:
            assert delta_chain_check(p, alpha, ll, rr) == direct_shift_check(p, alpha, ll, rr)


def test_delta_chain_needs_l(q):
    p = parse_poly("x1^2", q, 2)
    assert delta_chain_check(p, (1, 0), 0, 0)
    with pytest.raises(DeltaChainError):
        delta_chain_check(p, (1, 0), 0, 1)


@pytest.mark.parametrize(
    "m1, m2, expected",
    [
        (1, 0, (Fraction(1), 1, 0)),
        (3, 0, (Fraction(1), 3, 0)),
        (1, 1, (Fraction(1, 2), 2, 0)),
        (2, 1, (Fraction(1, 2), 2, 1)),
        (1, 2, (Fraction(1, 2), 3, 0)),
        (0, 2, (Fraction(1, 2), 1, 1)),
    ],
)
def test_bc_delta_parameters(m1, m2, expected):
    assert bc_delta_parameters(m1, m2) == expected


def test_bc_conditions_follow_delta_pattern(q, rng):
    x1 = MPoly.var(q, 2, 0)
    triples = [BCMult(1, 0, 0), BCMult(1, 1, 0), BCMult(2, 1, 0), BCMult(1, 2, 0), BCMult(0, 2, 0)]
    for _ in range(200):
        m = triples[int(rng.integers(0, len(triples)))]
        scale, l, r = bc_delta_parameters(m.m1, m.m2)
        if rng.random() < 0.5:
            p = _symmetric_in_x1(rng, q, _shifts(l, r), scale)
        else:
            p = random_poly(rng, q, 2, int(rng.integers(1, 6))) + random_poly(rng, q, 2, 0)
        along_x1 = [c for c in bc_conditions(q, 2, m) if c.form == x1]
        assert is_trig_quasi_invariant(p, along_x1) == delta_chain_check(p, (scale, 0), l, r)


def test_condition_counts(b2, a2):
    assert len(trig_conditions(b2, MultFn((2, 1)))) == 6
    assert len(trig_conditions(a2, MultFn.constant(a2, 2))) == 6
    assert len(bc_conditions(b2.field, 2, BCMult(1, 1, 1))) == 6


def test_weyl_group_required(g312, i26):
    for group in (g312, i26):
        with pytest.raises(UnsupportedGroupError):
            trig_conditions(group, MultFn.constant(group, 1))


def test_worked_polynomials(b2):
    m = MultFn((2, 1))
    conds = trig_conditions(b2, m)
    for text in B2_TRIG.values():
        p = parse_poly(text, b2.field, 2)
        assert is_trig_quasi_invariant(p, conds)
        assert leading_term_derivative_check(p.top_form(), (1, 0), 2)
    bc = bc_conditions(b2.field, 2, BCMult(1, 1, 1))
    for text in BC2_TRIG.values():
        assert is_trig_quasi_invariant(parse_poly(text, b2.field, 2), bc)
    p1 = parse_poly(B2_QUASI["p1"], b2.field, 2)
    assert not is_trig_quasi_invariant(p1, conds)


def test_filtered_basis_satisfies_conditions(a2):
    m = MultFn.constant(a2, 1)
    conds = trig_conditions(a2, m)
    filtered = trig_quasi_space(a2, m, 5)
    assert filtered.filtered
    assert all(is_trig_quasi_invariant(p, conds) for p in filtered.basis(5))
    for d in range(5):
        assert all(p.degree() <= d for p in filtered.basis(d))


@pytest.mark.parametrize("name, values, cutoff", [("a2", (1,), 6), ("b2", (2, 1), 8), ("b2", (1, 1), 8)])
def test_associated_graded_matches_rational(name, values, cutoff, request):
    group = request.getfixturevalue(name)
    m = MultFn(values)
    gr = leading_term_space(trig_quasi_space(group, m, cutoff))
    assert gr.dims() == quasi_graded(group, m, cutoff).dims()


def test_bc_associated_graded_matches_tilde(b2):
    bc = BCMult(1, 1, 1)
    gr = leading_term_space(bc_trig_quasi_space(2, bc, 9, b2.field))
    assert gr.dims() == quasi_graded(b2, bc.tilde(), 9).dims()
