from fractions import Fraction

import pytest

from quasiarr.errors import PrimitiveDerivationError
from quasiarr.groups import Family, MultFn, build_group
from quasiarr.invariants import basic_invariants
from quasiarr.logder import derivation_member, group_arrangement, invariant_derivations, is_invariant_derivation
from quasiarr.polynomial import MPoly, parse_poly
from quasiarr.primitive import (
    PrimitiveDerivation,
    basic_invariants_from,
    coroot_derivative_check,
    dihedral_index_set,
    dihedral_invariants,
    dihedral_q,
    graded_bijectivity,
    lowering_check,
    nabla_D,
    nabla_D_inverse,
    primitive_apply,
)
from quasiarr.quasi import quasi_space


@pytest.fixture(scope="module")
def D_b2(ctx_b2):
    return PrimitiveDerivation.of(ctx_b2.basic)


def test_basic_degrees(ctx_b2, ctx_g312):
    assert ctx_b2.basic.degrees == (2, 4)
    assert ctx_g312.basic.degrees == (3, 6)


def test_normalised_on_basic_invariants(D_b2, ctx_b2):
    y1, y2 = ctx_b2.basic.polys
    assert D_b2.weight == 4
    assert D_b2.apply(y2) == MPoly.constant(y2.field, 2, 1)
    assert D_b2.apply(y1).is_zero()
    assert primitive_apply(ctx_b2.basic, y2) == MPoly.constant(y2.field, 2, 1)


def test_repeated_top_degree_rejected():
    group = build_group(Family.I2, (2,))
    with pytest.raises(PrimitiveDerivationError):
        PrimitiveDerivation.of(basic_invariants(group))


def test_non_polynomial_image(D_b2, b2):
    assert not D_b2.apply(parse_poly("x1", b2.field, 2))


def test_lowering(D_b2):
    assert all(lowering_check(D_b2, MultFn((1, 1)), 8).values())


def test_graded_bijectivity(D_b2):
    rows = graded_bijectivity(D_b2, MultFn((1, 1)), 10)
    assert rows
    assert all(row.ok for row in rows)


def test_coroot_derivatives(g312):
    m = MultFn.constant(g312, 1)
    for d in (6, 7):
        assert all(coroot_derivative_check(g312, p) for p in quasi_space(g312, m, d))
    assert not coroot_derivative_check(g312, parse_poly("x1", g312.field, 2))


def test_choice_of_invariants_scales_D(b2):
    y = [parse_poly("x1^2 + x2^2", b2.field, 2), parse_poly("x1^2*x2^2", b2.field, 2)]
    y_alt = [y[0], parse_poly("x1^4 + x2^4", b2.field, 2)]
    D = PrimitiveDerivation.of(basic_invariants_from(b2, y))
    D_alt = PrimitiveDerivation.of(basic_invariants_from(b2, y_alt))
    m = MultFn((1, 1))
    for d in range(4, 8):
        for p in quasi_space(b2, m, d):
            assert D_alt.apply(p) == D.apply(p).scale(Fraction(-1, 2))


def test_connection_lowers_multiplicity(D_b2, ctx_b2):
    b2 = ctx_b2.group
    m0, m1 = MultFn((0, 0)), MultFn((1, 1))
    fields = invariant_derivations(ctx_b2, m1, 5)
    assert len(fields) == 1
    L = fields[0]
    lowered = nabla_D(D_b2, L)
    assert lowered.degree() == 1
    assert derivation_member(lowered, group_arrangement(b2, m0, 1))
    assert is_invariant_derivation(b2, lowered)
    assert nabla_D_inverse(D_b2, ctx_b2, m0, lowered) == L
    y1 = ctx_b2.basic.polys[0]
    assert nabla_D(D_b2, L * y1) == nabla_D(D_b2, L) * y1


def test_dihedral_index_set():
    assert dihedral_index_set(3, (1, 1)).indices == (1, 5)
    assert dihedral_index_set(3, (1, 0)).indices == (2, 4)
    assert dihedral_index_set(4, (2, 1)).indices == (3, 5)
    assert dihedral_index_set(4, (2, 2)).indices == (1, 7)


@pytest.mark.parametrize(
    "ell, m, matched",
    [
        (3, (1, 1), ("ends",)),
        (3, (2, 1), ("middle",)),
        (2, (1, 1), ("ends", "middle")),
        (2, (2, 1), ("ends", "middle")),
    ],
)
def test_dihedral_convention_is_checked(ell, m, matched):
    admissible = dihedral_index_set(ell, m)
    assert admissible.matched == matched
    assert admissible.convention == "/".join(matched)
    assert [name for name, ok in admissible.checks.items() if ok] == list(matched)


@pytest.mark.parametrize("ell", [2, 3])
@pytest.mark.parametrize("m", [(1, 1), (2, 1), (2, 2)])
def test_dihedral_eigen_relation(ell, m):
    group = build_group(Family.I2C, (2 * ell,))
    D = PrimitiveDerivation.of(dihedral_invariants(group))
    lower_m = (m[0] - 1, m[1] - 1)
    for i in dihedral_index_set(ell, m, group).indices:
        q, p = dihedral_q(ell, m, i, group)
        q_lower, p_lower = dihedral_q(ell, lower_m, i, group)
        assert D.apply(q) == q_lower.scale(sum(m) * ell + i)
        assert D.apply(p) == p_lower.scale(sum(m) * ell + i)


@pytest.mark.parametrize("i, expected", [(1, 7), (5, 11)])
def test_dihedral_q_lowers_to_monomial(i2c6, i, expected):
    D = PrimitiveDerivation.of(dihedral_invariants(i2c6))
    q, p = dihedral_q(3, (1, 1), i, i2c6)
    z = i2c6.var(0)
    assert q.coeff((6 + i, 0)) == 1
    assert q.coeff((3 + i, 3)) == 0
    assert q.coeff((i, 6)) == Fraction(6 + i, 6 - i)
    assert D.apply(q) == (z**i).scale(expected)
    assert p.coeff((0, 6 + i)) == 1


def test_dihedral_q_rejects(i2c6):
    with pytest.raises(PrimitiveDerivationError):
        dihedral_q(3, (1, 1), 2, i2c6)
    with pytest.raises(ValueError):
        dihedral_q(3, (0, 1), 1, i2c6)


def test_dihedral_invariants_need_complex_model(i26):
    with pytest.raises(PrimitiveDerivationError):
        dihedral_invariants(i26)
