import pytest

from quasiarr import config
from quasiarr.groups import MultFn, invariant_space
from quasiarr.linalg import in_span, spans_equal
from quasiarr.polynomial import MPoly, monomials_of_degree, parse_poly
from quasiarr.quasi import (
    VectorQuasiElement,
    is_quasi_invariant,
    is_quasi_invariant_idempotent,
    is_vector_quasi_invariant,
    isotypic_graded,
    quasi_graded,
    quasi_space,
    vector_quasi_space,
    vector_quasi_space_reduced,
)

from conftest import random_combination, random_poly


def test_zero_multiplicity_is_everything(b2):
    m0 = MultFn.constant(b2, 0)
    for d in range(5):
        assert len(quasi_space(b2, m0, d)) == len(monomials_of_degree(2, d))


def test_witness_names_failing_hyperplane(b2):
    x1 = parse_poly("x1", b2.field, 2)
    w = is_quasi_invariant(b2, x1, MultFn.constant(b2, 1))
    assert not w
    assert w.achieved < w.required == 2
    assert 0 <= w.hyperplane < len(b2.hyperplanes)


def test_quasi_spaces_decrease_with_m(b2):
    for d in range(1, 8):
        for p in quasi_space(b2, MultFn((2, 1)), d):
            assert is_quasi_invariant(b2, p, MultFn((1, 1)))
            assert is_quasi_invariant(b2, p, MultFn((2, 0)))


@pytest.mark.parametrize("name", ["b2", "g312"])
def test_invariants_are_quasi_invariant(name, request):
    group = request.getfixturevalue(name)
    m = MultFn.constant(group, 2)
    for d in range(1, 7):
        basis = quasi_space(group, m, d)
        assert all(in_span(group.field, basis, p) for p in invariant_space(group, d))


def test_basis_elements_pass_membership(g312):
    m = MultFn.constant(g312, 1)
    for d in range(8):
        assert all(is_quasi_invariant(g312, p, m) for p in quasi_space(g312, m, d))


def test_g312_isotypic_degrees(g312):
    graded = isotypic_graded(g312, MultFn.constant(g312, 1), 10)
    assert graded.first_nonzero() == 7
    assert graded.dimension(7) == 2
    assert graded.dimension(10) == 4


def test_idempotent_form_agrees(g312, rng):
    m = MultFn.constant(g312, 1)
    pools = {d: quasi_space(g312, m, d) for d in range(3, 8)}
    for _ in range(200):
        d = int(rng.integers(3, 8))
        if pools[d] and rng.random() < 0.5:
            p = random_combination(rng, g312.field, pools[d])
        else:
            p = random_poly(rng, g312.field, 2, d)
        assert bool(is_quasi_invariant(g312, p, m)) == is_quasi_invariant_idempotent(g312, p, m)


def test_ring_closure(b2, rng):
    m = MultFn.constant(b2, 1)
    graded = quasi_graded(b2, m, 5)
    pool = [p for d in graded.degrees() for p in graded.basis(d)]
    for _ in range(200):
        i, j = (int(v) for v in rng.integers(0, len(pool), size=2))
        assert is_quasi_invariant(b2, pool[i] * pool[j], m)


def test_threads_do_not_change_bases(g312):
    m = MultFn.constant(g312, 1)
    serial = [quasi_space(g312, m, d) for d in range(8)]
    config.settings.threads = 3
    assert [quasi_space(g312, m, d) for d in range(8)] == serial


@pytest.mark.parametrize(
    "name, values, degree",
    [("g312", (1, 1), 6), ("b2", (2, 1), 5), ("i26", (1, 1), 6), ("i26", (2, 1), 9)],
)
def test_vector_space_matches_reduced_condition(name, values, degree, request):
    group = request.getfixturevalue(name)
    m = MultFn(values)
    full = [phi.components for phi in vector_quasi_space(group, m, degree)]
    reduced = [phi.components for phi in vector_quasi_space_reduced(group, m, degree)]
    assert full
    assert spans_equal(group.field, full, reduced)


def test_vector_membership(b2):
    m = MultFn.constant(b2, 1)
    for phi in vector_quasi_space(b2, m, 5):
        assert is_vector_quasi_invariant(b2, phi, m)
    x1 = parse_poly("x1", b2.field, 2)
    assert not is_vector_quasi_invariant(b2, VectorQuasiElement((x1, MPoly.zero(b2.field, 2))), m)
