"""
Exact linear algebra over Q(ζ_M) and over polynomial rings.

Scalar systems are kept as sparse rows (``dict`` column -> CycScalar) in an
incrementally maintained echelon form.  Pivots are always the leftmost
nonzero column, so the reduced row echelon form, and every nullspace basis
read off from it, depends only on the row space and the column order.
"""

from __future__ import annotations

import logging
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .cyclotomic import CycScalar, CyclotomicField
from .errors import DimensionMismatchError, NotPolynomial
from .polynomial import MPoly

logger = logging.getLogger(__name__)

Row = dict[int, CycScalar]


class Echelon:
    """Row echelon form with leftmost pivots, rows stored sparsely."""

    def __init__(self, field: CyclotomicField):
        self.field = field
        self.pivots: dict[int, Row] = {}
        self._reduced = True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce_leading(self, row: Row) -> Row:
        row = {c: v for c, v in row.items() if v}
        while row:
            c = min(row)
            piv = self.pivots.get(c)
            if piv is None:
                break
            f = row[c]
            for k, v in piv.items():
                nv = row.get(k)
                nv = -f * v if nv is None else nv - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return row

    def add(self, row: Row) -> bool:
        """Insert a row; returns True when the rank grew."""
        row = self._reduce_leading(row)
        if not row:
            return False
        c = min(row)
        inv = row[c].inverse()
        self.pivots[c] = {k: v * inv for k, v in row.items()}
        self._reduced = False
        return True

    def extend(self, rows: Iterable[Row]) -> int:
        return sum(1 for r in rows if self.add(r))

    def contains(self, row: Row) -> bool:
        return not self._reduce_full(row)

    def _reduce_full(self, row: Row) -> Row:
        row = {c: v for c, v in row.items() if v}
        changed = True
        while changed:
            changed = False
            for c in sorted(k for k in row if k in self.pivots):
                f = row.get(c)
                if not f:
                    continue
                for k, v in self.pivots[c].items():
                    nv = row.get(k)
                    nv = -f * v if nv is None else nv - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
                changed = True
                break
        return row

    def rref(self) -> dict[int, Row]:
        """Fully reduced pivot rows (each pivot column zero in all other rows)."""
        if self._reduced:
            return self.pivots
        for c in sorted(self.pivots, reverse=True):
            row = self.pivots[c]
            for d in sorted(k for k in row if k != c and k in self.pivots):
                f = row.get(d)
                if not f:
                    continue
                for k, v in self.pivots[d].items():
                    nv = row.get(k)
                    nv = -f * v if nv is None else nv - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
        self._reduced = True
        return self.pivots


def nullspace(field: CyclotomicField, rows: Iterable[Row], ncols: int) -> list[list[CycScalar]]:
    """Canonical nullspace basis: one vector per free column, in column order.

    The vector for free column f has a 1 at f, zeros at the other free
    columns, and is supported on columns ≤ f.
    """
    ech = Echelon(field)
    ech.extend(rows)
    red = ech.rref()
    zero = field.zero
    basis = []
    for f in range(ncols):
        if f in red:
            continue
        vec = [zero] * ncols
        vec[f] = field.one
        for c, row in red.items():
            v = row.get(f)
            if v:
                vec[c] = -v
        basis.append(vec)
    logger.debug("nullspace: %d columns, rank %d, dimension %d", ncols, ech.rank, len(basis))
    return basis


def row_reduce_vectors(field: CyclotomicField, vectors: Iterable[Sequence[CycScalar]]) -> list[list[CycScalar]]:
    """RREF basis of the span of dense vectors (canonical for the span)."""
    vectors = list(vectors)
    if not vectors:
        return []
    ncols = len(vectors[0])
    ech = Echelon(field)
    ech.extend({i: v for i, v in enumerate(vec) if v} for vec in vectors)
    red = ech.rref()
    zero = field.zero
    out = []
    for c in sorted(red):
        vec = [zero] * ncols
        for k, v in red[c].items():
            vec[k] = v
        out.append(vec)
    return out


def rank_of_vectors(field: CyclotomicField, vectors: Iterable[Sequence[CycScalar]]) -> int:
    ech = Echelon(field)
    return ech.extend({i: v for i, v in enumerate(vec) if v} for vec in vectors)


class KeyIndex:
    """Assigns consecutive column numbers to hashable coordinate keys."""

    def __init__(self, keys: Iterable[Hashable] = ()):
        self.index: dict[Hashable, int] = {}
        for k in keys:
            self(k)

    def __call__(self, key: Hashable) -> int:
        i = self.index.get(key)
        if i is None:
            i = self.index[key] = len(self.index)
        return i

    def row(self, sparse: dict) -> Row:
        return {self(k): v for k, v in sparse.items() if v}


def solve_combination(field: CyclotomicField, vectors: Sequence[dict], target: dict):
    """Coefficients c with Σ c_j·vectors[j] = target.

    Vectors are sparse maps from coordinate keys to scalars.  Returns
    ``(solution, unique)`` or ``None`` when the system is inconsistent.
    """
    k = len(vectors)
    coords: dict[Hashable, Row] = {}
    for j, vec in enumerate(vectors):
        for key, v in vec.items():
            if v:
                coords.setdefault(key, {})[j] = v
    for key, v in target.items():
        if v:
            coords.setdefault(key, {})[k] = v
    ech = Echelon(field)
    ech.extend(coords.values())
    red = ech.rref()
    if k in red:
        return None
    sol = [field.zero] * k
    for c, row in red.items():
        sol[c] = row.get(k, field.zero)
    return sol, len(red) == k


# -- scalar matrices -----------------------------------------------------------


def scalar_matrix(field: CyclotomicField, rows: Sequence[Sequence]) -> np.ndarray:
    """numpy object array of CycScalar."""
    out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            out[i, j] = field(v)
    return out


def identity(field: CyclotomicField, n: int) -> np.ndarray:
    return scalar_matrix(field, [[int(i == j) for j in range(n)] for i in range(n)])


def scalar_inverse(field: CyclotomicField, mat: np.ndarray) -> np.ndarray:
    n = mat.shape[0]
    if mat.shape != (n, n):
        raise DimensionMismatchError("inverse of a non-square matrix")
    rows = [[mat[i, j] for j in range(n)] + [field(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = rows[c][c].inverse()
        rows[c] = [v * inv for v in rows[c]]
        for r in range(n):
            if r != c and rows[r][c]:
                f = rows[r][c]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[c])]
    return scalar_matrix(field, [row[n:] for row in rows])


def scalar_det(field: CyclotomicField, mat: np.ndarray) -> CycScalar:
    n = mat.shape[0]
    rows = [[mat[i, j] for j in range(n)] for i in range(n)]
    det = field.one
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            return field.zero
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = rows[c][c].inverse()
        for r in range(c + 1, n):
            if rows[r][c]:
                f = rows[r][c] * inv
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[c])]
    return det


def matrix_key(mat: np.ndarray) -> tuple:
    """Hashable canonical serialization of a scalar matrix."""
    return tuple(v.coeffs for v in mat.flat)


# -- polynomial matrices -------------------------------------------------------


@dataclass(frozen=True)
class PolyMatrix:
    """Row-major matrix of polynomials sharing one variable count."""

    rows: int
    cols: int
    entries: tuple[MPoly, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError("entry count does not match the shape")
        if self.entries and len({e.nvars for e in self.entries}) != 1:
            raise DimensionMismatchError("entries must share nvars")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[MPoly]]) -> PolyMatrix:
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatchError("ragged matrix")
        return cls(len(rows), ncols, tuple(e for r in rows for e in r))

    def entry(self, i: int, j: int) -> MPoly:
        return self.entries[i * self.cols + j]

    def as_rows(self) -> list[list[MPoly]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def det(self) -> MPoly:
        return polymat_det(self)

    def rank(self) -> int:
        return polymat_rank(self)


def cofactor_det(rows: list[list[MPoly]]) -> MPoly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = None
    for j in range(n):
        a = rows[0][j]
        if not a.terms:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * cofactor_det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        return MPoly(rows[0][0].field, rows[0][0].nvars)
    return acc


def _exact(num: MPoly, den: MPoly) -> MPoly:
    if den.is_constant():
        return num / den.constant_value()
    q = num.exact_divide(den)
    if isinstance(q, NotPolynomial):
        raise ArithmeticError("fraction-free elimination produced a non-exact division")
    return q


def bareiss_det(rows: list[list[MPoly]]) -> MPoly:
    """Fraction-free elimination; every division is exact."""
    m = [list(r) for r in rows]
    n = len(m)
    field, nvars = m[0][0].field, m[0][0].nvars
    sign = 1
    prev = MPoly.constant(field, nvars, 1)
    for k in range(n - 1):
        if not m[k][k].terms:
            swap = next((i for i in range(k + 1, n) if m[i][k].terms), None)
            if swap is None:
                return MPoly(field, nvars)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = _exact(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def polymat_det(mat: PolyMatrix) -> MPoly:
    if mat.rows != mat.cols:
        raise DimensionMismatchError(f"determinant of a {mat.rows}x{mat.cols} matrix")
    if mat.rows == 0:
        raise DimensionMismatchError("empty matrix")
    rows = mat.as_rows()
    if mat.rows <= 4:
        return cofactor_det(rows)
    return bareiss_det(rows)


def polymat_rank(mat: PolyMatrix) -> int:
    """Rank over the fraction field, by fraction-free elimination with column skipping."""
    m = mat.as_rows()
    if not m:
        return 0
    field, nvars = m[0][0].field, m[0][0].nvars
    prev = MPoly.constant(field, nvars, 1)
    r = 0
    for c in range(mat.cols):
        piv = next((i for i in range(r, mat.rows) if m[i][c].terms), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, mat.rows):
            for j in range(c + 1, mat.cols):
                m[i][j] = _exact(m[r][c] * m[i][j] - m[i][c] * m[r][j], prev)
            m[i][c] = MPoly(field, nvars)
        prev = m[r][c]
        r += 1
        if r == mat.rows:
            break
    return r


# -- spans of polynomials and polynomial tuples --------------------------------


def sparse_of(obj) -> dict:
    """Coordinates of an MPoly (by exponent) or of a tuple of MPoly (by slot, exponent)."""
    if isinstance(obj, MPoly):
        return obj.terms
    out = {}
    for k, comp in enumerate(obj):
        for e, c in comp.terms.items():
            out[(k, e)] = c
    return out


def span_rank(field: CyclotomicField, items: Iterable) -> int:
    index = KeyIndex()
    ech = Echelon(field)
    return ech.extend(index.row(sparse_of(x)) for x in items)


def in_span(field: CyclotomicField, basis: Sequence, item) -> bool:
    return solve_combination(field, [sparse_of(b) for b in basis], sparse_of(item)) is not None


def spans_equal(field: CyclotomicField, a: Sequence, b: Sequence) -> bool:
    ra = span_rank(field, a)
    return ra == span_rank(field, b) == span_rank(field, list(a) + list(b))


def independent_subset(field: CyclotomicField, items: Iterable, base: Iterable = ()) -> list:
    """Greedy selection of items independent modulo span(base) and the earlier picks."""
    index = KeyIndex()
    ech = Echelon(field)
    ech.extend(index.row(sparse_of(x)) for x in base)
    return [x for x in items if ech.add(index.row(sparse_of(x)))]
