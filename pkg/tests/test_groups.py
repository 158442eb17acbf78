from pathlib import Path

import pytest

from quasiarr import config
from quasiarr.errors import GroupOrderExceededError, ParseError, UnsupportedGroupError
from quasiarr.group_loader import load_group_file, parse_group_spec, resolve_group
from quasiarr.groups import (
    BCMult,
    Family,
    MultFn,
    act_on_poly,
    build_group,
    c_v,
    invariant_space,
    molien_dimension,
    reynolds,
    vstar_character,
)
from quasiarr.linalg import scalar_det
from quasiarr.polynomial import parse_poly

from conftest import random_poly

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.mark.parametrize(
    "family, params, order, hyperplanes",
    [
        (Family.A, (2,), 6, 3),
        (Family.A, (3,), 24, 6),
        (Family.B, (2,), 8, 4),
        (Family.B, (3,), 48, 9),
        (Family.D, (3,), 24, 6),
        (Family.I2, (6,), 12, 6),
        (Family.I2C, (6,), 12, 6),
        (Family.G, (3, 1, 2), 18, 5),
    ],
)
def test_orders_and_hyperplane_counts(family, params, order, hyperplanes):
    group = build_group(family, params)
    assert group.order == order
    assert len(group.hyperplanes) == hyperplanes


def test_g312_hyperplanes(g312):
    assert [len(o) for o in g312.orbits] == [2, 3]
    assert g312.conductor == 6
    by_orbit = {h.orbit_id: h.n_H for h in g312.hyperplanes}
    assert by_orbit == {0: 3, 1: 2}
    assert g312.reflection_count == 2 * 2 + 3 * 1


def test_orbit_order_follows_generators(b2, i26):
    x1 = parse_poly("x1", b2.field, 2)
    assert next(h for h in b2.hyperplanes if h.alpha == x1).orbit_id == 0
    assert [len(o) for o in i26.orbits] == [3, 3]
    assert next(h for h in i26.hyperplanes if h.alpha == parse_poly("x1", i26.field, 2)).orbit_id == 0


def test_reflection_matrix_matches_coroot(g312, i26, b2):
    for group in (g312, i26, b2):
        n = group.rank
        for h in group.hyperplanes:
            mat = group.elements[h.s_H]
            alpha = [h.alpha.coeff(tuple(int(i == j) for j in range(n))) for i in range(n)]
            for i in range(n):
                for j in range(n):
                    assert mat[i, j] == int(i == j) - alpha[j] * h.alpha_check[i]
            assert scalar_det(group.field, mat) == h.det
            assert h.det**h.n_H == 1


def test_c_v(g312, b2):
    assert c_v(g312, MultFn.constant(g312, 1)) == 6
    assert c_v(b2, MultFn((2, 1))) == 6


def test_action_is_a_left_action(g312, rng):
    for _ in range(200):
        a, b = (int(v) for v in rng.integers(0, g312.order, size=2))
        p = random_poly(rng, g312.field, 2, int(rng.integers(1, 4)), terms=2)
        left = act_on_poly(g312, a, act_on_poly(g312, b, p))
        assert left == act_on_poly(g312, g312.multiply(a, b), p)


def test_reynolds_output_is_invariant(g312, rng):
    for _ in range(10):
        p = reynolds(g312, random_poly(rng, g312.field, 2, int(rng.integers(1, 7))))
        assert all(act_on_poly(g312, g, p) == p for g in g312.generators)


@pytest.mark.parametrize("name", ["b2", "g312", "i26"])
def test_molien_counts_invariants(name, request):
    group = request.getfixturevalue(name)
    for d in range(7):
        assert molien_dimension(group, d) == len(invariant_space(group, d))


def test_vstar_character_of_identity(g312):
    assert vstar_character(g312)[0] == g312.rank


def test_order_cap():
    with pytest.raises(GroupOrderExceededError):
        build_group(Family.B, (3,), order_cap=10)


@pytest.mark.parametrize(
    "family, params",
    [(Family.I2C, (5,)), (Family.G, (3, 2, 2)), ("X", (1,)), (Family.A, (0,)), (Family.I2, (1,))],
)
def test_unsupported_groups(family, params):
    with pytest.raises(UnsupportedGroupError):
        build_group(family, params)


def test_mult_fn_parsing(b2):
    assert MultFn.parse("2,1", b2) == MultFn((2, 1))
    assert MultFn.parse("1", b2) == MultFn((1, 1))
    assert MultFn.parse("1", b2).shifted(1) == MultFn((2, 2))
    with pytest.raises(ValueError):
        MultFn.parse("1,2,3", b2)
    with pytest.raises(ValueError):
        MultFn((-1, 0))


def test_bc_mult():
    m = BCMult.parse("1,1,1")
    assert m == BCMult(1, 1, 1)
    assert BCMult.parse("2") == BCMult(2, 2, 2)
    assert BCMult(2, 1, 3).tilde() == MultFn((3, 3))
    with pytest.raises(ValueError):
        BCMult.parse("1,2")


@pytest.mark.parametrize(
    "spec, kwargs, expected",
    [
        ("B2", {}, (Family.B, (2,))),
        ("B", {"rank": 3}, (Family.B, (3,))),
        ("I2", {"k": 6}, (Family.I2, (6,))),
        ("I2(6)", {}, (Family.I2, (6,))),
        ("I2C_6", {}, (Family.I2C, (6,))),
        ("G3_1_2", {}, (Family.G, (3, 1, 2))),
        ("G(3,1,2)", {}, (Family.G, (3, 1, 2))),
    ],
)
def test_parse_group_spec(spec, kwargs, expected):
    assert parse_group_spec(spec, **kwargs) == expected


@pytest.mark.parametrize("spec", ["B", "I2", "Q7", "G3"])
def test_parse_group_spec_rejects(spec):
    with pytest.raises(UnsupportedGroupError):
        parse_group_spec(spec)


def test_group_files():
    custom = resolve_group(str(FIXTURES / "g312.grp"))
    assert custom.order == 18
    assert custom.label == "custom"
    assert sorted(len(o) for o in custom.orbits) == [2, 3]
    assert resolve_group(str(FIXTURES / "b2.grp")).order == 8


def test_group_file_errors(tmp_path):
    with pytest.raises(ParseError):
        load_group_file(tmp_path / "missing.grp")
    bad = tmp_path / "bad.grp"
    bad.write_text("family custom\nconductor 4\nbogus 1\n")
    with pytest.raises(ParseError):
        load_group_file(bad)
    ragged = tmp_path / "ragged.grp"
    ragged.write_text("family custom\nconductor 4\ngenerator 1, 0; 0\n")
    with pytest.raises(ParseError):
        load_group_file(ragged)


def test_element_cache_round_trip(tmp_path):
    config.settings.cache_dir = str(tmp_path)
    first = build_group(Family.B, (2,))
    assert (tmp_path / "B_2_M2.json").is_file()
    second = build_group(Family.B, (2,))
    assert second.order == first.order
    assert [h.alpha for h in second.hyperplanes] == [h.alpha for h in first.hyperplanes]
