import pytest

from quasiarr.cyclotomic import CyclotomicField
from quasiarr.errors import DimensionMismatchError
from quasiarr.linalg import (
    Echelon,
    PolyMatrix,
    bareiss_det,
    cofactor_det,
    identity,
    in_span,
    independent_subset,
    nullspace,
    polymat_det,
    polymat_rank,
    rank_of_vectors,
    scalar_det,
    scalar_inverse,
    scalar_matrix,
    solve_combination,
    spans_equal,
)
from quasiarr.polynomial import parse_poly

from conftest import random_poly

Q = CyclotomicField.of(2)


def P(text, nvars=2):
    return parse_poly(text, Q, nvars)


def test_nullspace_canonical_basis():
    one = Q.one
    basis = nullspace(Q, [{0: one, 1: one}], 3)
    assert basis == [[-one, one, Q.zero], [Q.zero, Q.zero, one]]


def test_nullspace_independent_of_row_order(rng):
    rows = [{0: Q(1), 2: Q(2)}, {1: Q(1), 2: Q(-1)}, {0: Q(1), 1: Q(1), 2: Q(1)}]
    for _ in range(5):
        order = rng.permutation(len(rows))
        assert nullspace(Q, [rows[i] for i in order], 4) == nullspace(Q, rows, 4)


def test_echelon_rank_and_membership():
    ech = Echelon(Q)
    assert ech.add({0: Q(1), 1: Q(2)})
    assert not ech.add({0: Q(2), 1: Q(4)})
    assert ech.add({1: Q(1)})
    assert ech.rank == 2
    assert ech.contains({0: Q(3)})


def test_solve_combination():
    vectors = [{"a": Q(1)}, {"b": Q(1)}, {"a": Q(1), "b": Q(1)}]
    sol, unique = solve_combination(Q, vectors[:2], {"a": Q(2), "b": Q(3)})
    assert unique and sol == [Q(2), Q(3)]
    sol, unique = solve_combination(Q, vectors, {"a": Q(1)})
    assert not unique
    assert solve_combination(Q, vectors[:1], {"b": Q(1)}) is None


def test_scalar_inverse_and_det():
    field = CyclotomicField.of(3)
    z = field.root(1)
    mat = scalar_matrix(field, [[z, 1], [0, 2]])
    assert (scalar_inverse(field, mat) @ mat == identity(field, 2)).all()
    assert scalar_det(field, mat) == z * 2
    with pytest.raises(ZeroDivisionError):
        scalar_inverse(field, scalar_matrix(field, [[1, 1], [1, 1]]))


def test_cofactor_and_bareiss_agree(rng):
    for _ in range(200):
        n = int(rng.integers(2, 4))
        rows = [[random_poly(rng, Q, 2, int(rng.integers(0, 3)), terms=2) for _ in range(n)] for _ in range(n)]
        assert cofactor_det(rows) == bareiss_det(rows)


def test_five_by_five_goes_through_bareiss(rng):
    rows = [[random_poly(rng, Q, 2, 1, terms=2) for _ in range(5)] for _ in range(5)]
    assert polymat_det(PolyMatrix.from_rows(rows)) == cofactor_det(rows)


def test_det_of_product_structure():
    rows = [[P("x1"), P("x2")], [P("x2"), P("x1")]]
    assert polymat_det(PolyMatrix.from_rows(rows)) == P("(x1 - x2)*(x1 + x2)")


def test_polymat_rank():
    dependent = PolyMatrix.from_rows([[P("x1"), P("x2")], [P("x1^2"), P("x1*x2")]])
    assert polymat_rank(dependent) == 1
    assert polymat_rank(PolyMatrix.from_rows([[P("x1"), P("0")], [P("0"), P("x2")]])) == 2


def test_polymat_shape_errors():
    with pytest.raises(DimensionMismatchError):
        PolyMatrix.from_rows([[P("x1"), P("x2")], [P("x1")]])
    with pytest.raises(DimensionMismatchError):
        polymat_det(PolyMatrix.from_rows([[P("x1"), P("x2")]]))
    with pytest.raises(DimensionMismatchError):
        polymat_det(PolyMatrix.from_rows([]))


def test_spans_of_polynomials():
    a = [P("x1 + x2"), P("x1 - x2")]
    b = [P("x1"), P("x2")]
    assert spans_equal(Q, a, b)
    assert not spans_equal(Q, a[:1], b)
    assert in_span(Q, b, P("3*x1 - x2"))
    assert not in_span(Q, b, P("x1^2"))
    assert independent_subset(Q, [P("x1"), P("2*x1"), P("x2")]) == [P("x1"), P("x2")]


def test_spans_of_tuples():
    assert spans_equal(Q, [(P("x1"), P("x2"))], [(P("2*x1"), P("2*x2"))])
    assert rank_of_vectors(Q, [[Q(1), Q(2)], [Q(2), Q(4)]]) == 1
