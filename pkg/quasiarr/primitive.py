"""
K. Saito's primitive derivation D = ∂/∂y_N and the maps it induces.

D p = det S(p) / J where S(p) stacks the gradients of y_1..y_{N-1} over the
gradient of p.  The cofactors of the last row do not depend on p, so they are
computed once; applying D is then one first-order operator and one exact
division by the Jacobian.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

from .config import parallel_map
from .cyclotomic import CycScalar
from .errors import NotPolynomial, PrimitiveDerivationError
from .groups import Family, MultFn, ReflectionGroupData, build_group
from .invariants import BasicInvariants, basic_invariants, basic_invariants_from
from .linalg import PolyMatrix, in_span, nullspace, polymat_det, rank_of_vectors, solve_combination, sparse_of
from .logder import Derivation, GroupContext, invariant_derivations
from .polynomial import MPoly, monomials_of_degree
from .quasi import _low_order_rows, is_quasi_invariant, quasi_isotypic, quasi_space

__all__ = [
    "BasicInvariants",
    "basic_invariants",
    "basic_invariants_from",
    "PrimitiveDerivation",
    "primitive_apply",
    "nabla_D",
    "nabla_D_inverse",
    "graded_bijectivity",
    "lowering_check",
    "coroot_derivative_check",
    "dihedral_invariants",
    "DihedralIndexSet",
    "dihedral_index_set",
    "dihedral_q",
]

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class PrimitiveDerivation:
    """D = J⁻¹ Σ_j C_j ∂_j with C_j the last-row cofactors of S."""

    basic: BasicInvariants
    cofactors: tuple[MPoly, ...]

    @classmethod
    def of(cls, basic: BasicInvariants) -> PrimitiveDerivation:
        if not basic.top_unique:
            raise PrimitiveDerivationError(
                f"the highest degree {basic.degrees[-1]} of {basic.group.label} is repeated; "
                "the primitive derivation is not unique up to scalar"
            )
        n = basic.group.rank
        grads = [[y.diff(j) for j in range(n)] for y in basic.polys[:-1]]

        def cofactor(j: int) -> MPoly:
            if n == 1:
                return MPoly.constant(basic.group.field, 1, 1)
            minor = [[row[c] for c in range(n) if c != j] for row in grads]
            sign = 1 if (n - 1 + j) % 2 == 0 else -1
            return polymat_det(PolyMatrix.from_rows(minor)).scale(sign)

        cofactors = tuple(parallel_map(cofactor, range(n)))
        return cls(basic, cofactors)

    @property
    def weight(self) -> int:
        """deg y_N, the degree drop of D."""
        return self.basic.degrees[-1]

    def numerator(self, p: MPoly) -> MPoly:
        """det S(p) by expansion along the last row."""
        acc = MPoly(p.field, p.nvars)
        for j, c in enumerate(self.cofactors):
            if c.terms:
                acc = acc + c * p.diff(j)
        return acc

    def apply(self, p: MPoly) -> MPoly | NotPolynomial:
        return self.numerator(p).exact_divide(self.basic.jacobian)

    __call__ = apply


def primitive_apply(basic: BasicInvariants, p: MPoly) -> MPoly | NotPolynomial:
    return PrimitiveDerivation.of(basic).apply(p)


def _apply_strict(D: PrimitiveDerivation, p: MPoly) -> MPoly:
    q = D.apply(p)
    if not isinstance(q, MPoly):
        raise PrimitiveDerivationError(f"J does not divide det S({p.to_text()})")
    return q


# -- the connection ∇_D ---------------------------------------------------------


def nabla_D(D: PrimitiveDerivation, theta: Derivation) -> Derivation:
    """∇_D(Σ f_i ∂_i) = Σ D(f_i) ∂_i."""
    return Derivation(tuple(_apply_strict(D, f) for f in theta.components))


def nabla_D_inverse(D: PrimitiveDerivation, ctx: GroupContext, m: MultFn, target: Derivation) -> Derivation:
    """The unique θ ∈ D_{m+1}^W of degree deg(target) + deg y_N with ∇_D θ = target.

    ``target`` is a homogeneous field of D_m^W.
    """
    if target.is_zero():
        return target
    degree = int(target.degree()) + D.weight
    sources = invariant_derivations(ctx, m.shifted(1), degree)
    images = [nabla_D(D, L) for L in sources]
    solved = solve_combination(ctx.group.field, [sparse_of(L.components) for L in images], sparse_of(target.components))
    if solved is None:
        raise PrimitiveDerivationError(f"∇_D does not reach the target from degree {degree}")
    coeffs, unique = solved
    if not unique:
        raise PrimitiveDerivationError(f"∇_D is not injective on D_(m+1)^W in degree {degree}")
    acc = Derivation.zero(ctx.group.field, ctx.group.rank)
    for c, L in zip(coeffs, sources):
        if c:
            acc = acc + L.scale(c)
    return acc


# -- degreewise checks ----------------------------------------------------------


@dataclass
class BijectivityRow:
    degree: int
    source_dim: int
    target_dim: int
    rank: int
    contained: bool

    @property
    def ok(self) -> bool:
        return self.contained and self.source_dim == self.target_dim == self.rank


def graded_bijectivity(D: PrimitiveDerivation, m: MultFn, cutoff: int) -> list[BijectivityRow]:
    """Rank table of D: (Q_m^{V*})_d → (Q_{m-1}^{V*})_{d - deg y_N} for d ≤ cutoff."""
    group = D.basic.group
    lower = m.shifted(-1)
    rows = []
    for d in range(D.weight, cutoff + 1):
        source = quasi_isotypic(group, m, d)
        target = quasi_isotypic(group, lower, d - D.weight)
        images = [_apply_strict(D, p) for p in source]
        monos = monomials_of_degree(group.rank, d - D.weight)
        rank = rank_of_vectors(group.field, [q.coeff_vector(monos) for q in images])
        both = rank_of_vectors(group.field, [q.coeff_vector(monos) for q in images + target])
        row = BijectivityRow(d, len(source), len(target), rank, both == len(target))
        logger.debug("D on (Q^V*)_%d: %d -> %d, rank %d", d, row.source_dim, row.target_dim, row.rank)
        rows.append(row)
    return rows


def lowering_check(D: PrimitiveDerivation, m: MultFn, cutoff: int) -> dict[int, bool]:
    """D(Q_m)_d ⊆ Q_{m-1} for every basis element of degree d ≤ cutoff."""
    group = D.basic.group
    lower = m.shifted(-1)
    return {
        d: all(is_quasi_invariant(group, _apply_strict(D, p), lower) for p in quasi_space(group, m, d))
        for d in range(cutoff + 1)
    }


def coroot_derivative_check(group: ReflectionGroupData, p: MPoly) -> bool:
    """α_H^{n_H-1} divides ∂_{α_H^∨} p for every hyperplane."""
    for h in group.hyperplanes:
        if h.n_H < 2:
            continue
        if not isinstance(p.partial(h.alpha_check).div_linear_power(h.alpha, h.n_H - 1), MPoly):
            return False
    return True


# -- the dihedral family in complex coordinates ---------------------------------


def dihedral_invariants(group: ReflectionGroupData) -> BasicInvariants:
    """y_1 = z z̄ and y_2 = (z^{2l} + z̄^{2l}) / 2l for I2C(2l)."""
    if group.family is not Family.I2C:
        raise PrimitiveDerivationError(f"complex dihedral invariants need an I2C group, not {group.label}")
    k = group.params[0]
    z, zbar = group.var(0), group.var(1)
    return basic_invariants_from(group, [z * zbar, (z**k + zbar**k) / k])


CONVENTIONS = {
    "ends": lambda ell: (1, 2 * ell - 1),
    "middle": lambda ell: (ell - 1, ell + 1),
}


@dataclass(frozen=True)
class DihedralIndexSet:
    """Admissible i for (l, m), with the convention that passed the checks.

    A candidate set passes when every q_i^{(m)} exists with a_0 = 1, lies in
    (Q_m^{V*}) together with its conjugate, and, when m - 1 is defined,
    satisfies D q_i^{(m)} = (|m|l + i) q_i^{(m-1)}.
    """

    ell: int
    m: tuple[int, int]
    indices: tuple[int, int]
    matched: tuple[str, ...]
    checks: dict = dc_field(default_factory=dict, compare=False)

    @property
    def convention(self) -> str:
        return "/".join(self.matched)


_INDEX_SETS: dict[tuple[int, tuple[int, int]], DihedralIndexSet] = {}


def _check_m(m: tuple[int, int]) -> tuple[int, int]:
    m1, m2 = (int(v) for v in m)
    if m1 < m2 or m2 < 0:
        raise ValueError(f"need m1 >= m2 >= 0, got {tuple(m)}")
    return m1, m2


def _conjugate(p: MPoly) -> MPoly:
    return p.permute([1, 0]).map_coeffs(CycScalar.conjugate)


def _dihedral_kernel(group: ReflectionGroupData, ell: int, m: tuple[int, int], i: int) -> MPoly | None:
    """q = Σ_s a_s z^{(|m|-s)l+i} z̄^{ls} with a_0 = 1, or None when not unique."""
    total = m[0] + m[1]
    fld = group.field
    support = [MPoly.monomial(fld, ((total - s) * ell + i, ell * s)) for s in range(total + 1)]
    rows = _low_order_rows(group, MultFn(tuple(m)), support)
    kernel = nullspace(fld, rows, len(support))
    if len(kernel) != 1 or not kernel[0][0]:
        return None
    vec = kernel[0]
    inv = 1 / vec[0]
    q = MPoly(fld, 2)
    for c, mono in zip(vec, support):
        if c:
            q = q + mono.scale(c * inv)
    return q


def _index_passes(group: ReflectionGroupData, D: PrimitiveDerivation, ell: int, m: tuple[int, int], i: int) -> bool:
    q = _dihedral_kernel(group, ell, m, i)
    if q is None:
        return False
    p = _conjugate(q)
    degree = int(q.degree())
    monos = monomials_of_degree(2, degree)
    if rank_of_vectors(group.field, [q.coeff_vector(monos), p.coeff_vector(monos)]) != 2:
        return False
    isotypic = quasi_isotypic(group, MultFn(tuple(m)), degree)
    if not (in_span(group.field, isotypic, q) and in_span(group.field, isotypic, p)):
        return False
    if m[1] == 0:
        return True
    lower = _dihedral_kernel(group, ell, (m[0] - 1, m[1] - 1), i)
    if lower is None:
        return False
    return D.apply(q) == lower.scale((m[0] + m[1]) * ell + i)


def dihedral_index_set(ell: int, m: tuple[int, int], group: ReflectionGroupData | None = None) -> DihedralIndexSet:
    """Pick (1, 2l-1) or (l-1, l+1) for this |m| by checking both candidates."""
    m = _check_m(m)
    key = (ell, m)
    cached = _INDEX_SETS.get(key)
    if cached is not None:
        return cached
    group = group or build_group(Family.I2C, (2 * ell,))
    D = PrimitiveDerivation.of(dihedral_invariants(group))
    checks = {}
    for name, make in CONVENTIONS.items():
        checks[name] = all(_index_passes(group, D, ell, m, i) for i in make(ell))
    matched = tuple(name for name, ok in checks.items() if ok)
    sets = {CONVENTIONS[name](ell) for name in matched}
    if len(sets) != 1:
        raise PrimitiveDerivationError(f"no single admissible index set for l = {ell}, m = {m}: {checks}")
    result = DihedralIndexSet(ell, m, sets.pop(), matched, checks)
    logger.info(
        "dihedral l=%d m=%s (|m| %s): index set %s from convention %s",
        ell,
        m,
        "even" if sum(m) % 2 == 0 else "odd",
        result.indices,
        result.convention,
    )
    _INDEX_SETS[key] = result
    return result


def dihedral_q(ell: int, m: tuple[int, int], i: int, group: ReflectionGroupData | None = None) -> tuple[MPoly, MPoly]:
    """(q_i^{(m)}, p_i^{(m)}) with q = Σ_s a_s z^{(|m|-s)l+i} z̄^{ls}, a_0 = 1.

    The a_s solve the quasi-invariance conditions for m on I2C(2l); p is the
    conjugate of q.
    """
    m = _check_m(m)
    group = group or build_group(Family.I2C, (2 * ell,))
    admissible = dihedral_index_set(ell, m, group)
    if i not in admissible.indices:
        raise PrimitiveDerivationError(f"i = {i} is not admissible for l = {ell}, |m| = {sum(m)}")
    q = _dihedral_kernel(group, ell, m, i)
    if q is None:
        raise PrimitiveDerivationError(f"no unique q_{i}^{m} with a_0 = 1")
    return q, _conjugate(q)
