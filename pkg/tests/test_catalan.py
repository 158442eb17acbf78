from pathlib import Path

import pytest

from quasiarr.catalan import (
    affine_free_check,
    bc_catalan,
    catalan_arrangement,
    catalan_pipeline,
    cone,
    cone_derivation,
    coned_free_check,
    decone_derivation,
    diagram_check,
    euler_field,
    load_arrangement_file,
    top_part,
    trig_hom_space,
)
from quasiarr.errors import ParseError, UnsupportedGroupError
from quasiarr.groups import BCMult, MultFn
from quasiarr.linalg import spans_equal
from quasiarr.logder import Derivation, GroupContext, derivation_member, is_invariant_derivation
from quasiarr.polynomial import MPoly, parse_poly
from quasiarr.quasi import is_quasi_invariant
from quasiarr.reproduce import B2_QUASI

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_arrangement_sizes(a2, b2):
    assert len(catalan_arrangement(a2, MultFn((1,))).forms) == 9
    assert len(catalan_arrangement(b2, MultFn((2, 1))).forms) == 16
    bc = bc_catalan(2, BCMult(1, 1, 1))
    assert len(bc.forms) == 16
    assert bc.total() == 16
    assert not bc.central


def test_catalan_needs_roots(g312):
    with pytest.raises(UnsupportedGroupError):
        catalan_arrangement(g312, MultFn.constant(g312, 1))


def test_cone_adds_hyperplane(b2):
    arr = catalan_arrangement(b2, MultFn((1, 1)))
    coned = cone(arr)
    assert len(coned.forms) == len(arr.forms) + 1
    assert coned.nvars == 3
    assert coned.central
    assert coned.forms[-1] == MPoly.var(b2.field, 3, 2)


def test_cone_and_decone_fields(q):
    theta = Derivation((parse_poly("x1^2 + 3*x2 + 1", q, 2), parse_poly("x1*x2 - 2", q, 2)))
    coned = cone_derivation(theta)
    assert coned.components[0] == parse_poly("x1^2 + 3*x2*x3 + x3^2", q, 3)
    assert coned.components[2].is_zero()
    assert coned.is_homogeneous()
    assert decone_derivation(coned) == theta
    assert top_part(theta) == Derivation((parse_poly("x1^2", q, 2), parse_poly("x1*x2", q, 2)))
    assert euler_field(q, 3).apply(parse_poly("x1*x3", q, 3)) == parse_poly("2*x1*x3", q, 3)


def test_deconing_fixture():
    arr, fields = load_arrangement_file(FIXTURES / "deconing.arr")
    assert arr.name == "deconing"
    assert len(arr.forms) == 3 and len(fields) == 2
    affine = affine_free_check(arr, fields)
    assert affine.passed
    assert affine.scalar == 1
    coned = coned_free_check(arr, fields)
    assert not coned.passed
    assert coned.residual == MPoly.var(arr.field, 3, 2)


def test_arrangement_file_errors(tmp_path):
    with pytest.raises(ParseError):
        load_arrangement_file(tmp_path / "none.arr")
    early = tmp_path / "early.arr"
    early.write_text("form x1\nnvars 1\n")
    with pytest.raises(ParseError):
        load_arrangement_file(early)
    short = tmp_path / "short.arr"
    short.write_text("nvars 2\nform x1\nfield x1\n")
    with pytest.raises(ParseError):
        load_arrangement_file(short)


def test_arrangement_file_multiplicities(tmp_path):
    path = tmp_path / "double.arr"
    path.write_text("nvars 2\nform x1; 2\nform x2\nfield x1^2, 0\nfield 0, x2\n")
    arr, fields = load_arrangement_file(path)
    assert arr.mults == (2, 1)
    assert affine_free_check(arr, fields).passed


def test_invariant_catalan_fields(ctx_b2):
    b2 = ctx_b2.group
    m = MultFn((1, 1))
    arr = catalan_arrangement(b2, m)
    filtered = trig_hom_space(ctx_b2, m, 6)
    assert filtered.filtered
    fields = filtered.basis(6)
    assert fields
    for L in fields:
        assert derivation_member(L, arr)
        assert is_invariant_derivation(b2, L)


def test_diagram_commutes(ctx_b2):
    report = diagram_check(ctx_b2, MultFn((1, 1)), 6)
    assert report.rows
    assert report.commutes
    assert report.delta == (1, 0)
    assert len(report.tops) == len(report.rows)
    for top in report.tops:
        assert is_quasi_invariant(ctx_b2.group, top, MultFn((1, 1)))


def test_diagram_commutes_a2(a2):
    m = MultFn((1,))
    report = diagram_check(GroupContext.of(a2), m, 8)
    assert report.rows
    assert report.commutes
    for top in report.tops:
        assert top.is_homogeneous()
        assert is_quasi_invariant(a2, top, m)


def test_diagram_top_form_b2(ctx_b2):
    b2 = ctx_b2.group
    m = MultFn((2, 1))
    report = diagram_check(ctx_b2, m, 9)
    assert report.commutes
    assert sorted(d for d, _ in report.rows) == [7, 9, 9]
    (top,) = [t for (d, _), t in zip(report.rows, report.tops) if d == 7]
    assert spans_equal(b2.field, [top], [parse_poly(B2_QUASI["p1"], b2.field, 2)])
    assert is_quasi_invariant(b2, top, m)


def test_b2_catalan_pipeline(ctx_b2):
    result = catalan_pipeline(ctx_b2, MultFn((2, 1)), 9)
    assert result.affine.passed
    assert result.coned.passed
    assert result.leading.passed
    assert result.leading.exponents == (7, 9)
    assert result.coned.exponents == (1, 7, 9)
