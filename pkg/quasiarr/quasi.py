"""
Quasi-invariants of a complex reflection group.

A polynomial p is m-quasi-invariant when α_H^{m_H n_H} divides (1 - s_H)p for
every reflecting hyperplane H.  Each degree is handled as one exact linear
system over the monomial basis: in the coordinates of ``AlphaFrame`` the
divisibility says that every coefficient with a small α-exponent vanishes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

from .config import parallel_map
from .groups import (
    MultFn,
    ReflectionGroupData,
    act_on_poly,
    idempotent_apply,
    isotypic_project,
)
from .linalg import nullspace, row_reduce_vectors
from .polynomial import AlphaFrame, MPoly, monomials_of_degree

logger = logging.getLogger(__name__)


@dataclass
class QuasiWitness:
    """Outcome of a membership test; on failure names the offending hyperplane."""

    ok: bool
    hyperplane: int | None = None
    achieved: int | None = None
    required: int | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class GradedSubspace:
    """Per-degree bases of a graded or filtered subspace.

    For a filtered space the degree-d list is a basis of F_d (total degree ≤ d),
    adapted so that it extends the basis of F_{d-1}.
    """

    nvars: int
    pieces: dict[int, list] = dc_field(default_factory=dict)
    filtered: bool = False

    def basis(self, degree: int) -> list:
        return self.pieces.get(degree, [])

    def dimension(self, degree: int) -> int:
        return len(self.basis(degree))

    def degrees(self) -> list[int]:
        return sorted(self.pieces)

    def dims(self) -> dict[int, int]:
        return {d: len(b) for d, b in sorted(self.pieces.items())}

    def gr_dims(self) -> dict[int, int]:
        """dim F_d - dim F_{d-1} (equal to dims() for a graded space)."""
        if not self.filtered:
            return self.dims()
        out, prev = {}, 0
        for d in self.degrees():
            out[d] = self.dimension(d) - prev
            prev = self.dimension(d)
        return out

    def first_nonzero(self) -> int | None:
        return next((d for d in self.degrees() if self.pieces[d]), None)


@dataclass(frozen=True)
class VectorQuasiElement:
    """φ = Σ f_i ⊗ e_i in SV* ⊗ V."""

    components: tuple[MPoly, ...]

    @property
    def degree(self):
        return max(c.degree() for c in self.components)

    def is_zero(self) -> bool:
        return not any(c.terms for c in self.components)


# -- membership ----------------------------------------------------------------


def is_quasi_invariant(group: ReflectionGroupData, p: MPoly, m: MultFn) -> QuasiWitness:
    """α_H^{m_H n_H} | (1 - s_H)p for every H, with a witness on failure."""
    for idx, h in enumerate(group.hyperplanes):
        need = m.of(h) * h.n_H
        if need == 0:
            continue
        diff = p - act_on_poly(group, h.s_H, p)
        q = diff.div_linear_power(h.alpha, need)
        if not isinstance(q, MPoly):
            return QuasiWitness(False, idx, q.max_exponent, need)
    return QuasiWitness(True)


def is_quasi_invariant_idempotent(group: ReflectionGroupData, p: MPoly, m: MultFn) -> bool:
    """The idempotent form: α_H^{m_H n_H} | e_{H,i}(p) for i = 1..n_H - 1."""
    for h in group.hyperplanes:
        need = m.of(h) * h.n_H
        if need == 0:
            continue
        for i in range(1, h.n_H):
            if not isinstance(idempotent_apply(group, h, i, p).div_linear_power(h.alpha, need), MPoly):
                return False
    return True


def _low_order_rows(group: ReflectionGroupData, m: MultFn, polys: list[MPoly]) -> list[dict]:
    """Linear conditions on Σ c_j polys[j] for quasi-invariance, one row per low coefficient."""

    def per_hyperplane(idx: int) -> list[dict]:
        h = group.hyperplanes[idx]
        need = m.of(h) * h.n_H
        if need == 0:
            return []
        frame = AlphaFrame(h.alpha)
        i0 = frame.index
        rows: dict = {}
        for j, p in enumerate(polys):
            diff = frame.to_frame(p - act_on_poly(group, h.s_H, p))
            for e, c in diff.terms.items():
                if e[i0] < need:
                    rows.setdefault(e, {})[j] = c
        return list(rows.values())

    out: list[dict] = []
    for rows in parallel_map(per_hyperplane, range(len(group.hyperplanes))):
        out.extend(rows)
    return out


def quasi_space(group: ReflectionGroupData, m: MultFn, degree: int) -> list[MPoly]:
    """Canonical basis of (Q_m)_d."""
    n, fld = group.rank, group.field
    monos = monomials_of_degree(n, degree)
    polys = [MPoly.monomial(fld, e) for e in monos]
    rows = _low_order_rows(group, m, polys)
    basis = [MPoly.from_vector(fld, n, monos, v) for v in nullspace(fld, rows, len(monos))]
    logger.debug("(Q_%s)_%d: %d monomials, dimension %d", m, degree, len(monos), len(basis))
    return basis


def quasi_graded(group: ReflectionGroupData, m: MultFn, cutoff: int) -> GradedSubspace:
    return GradedSubspace(group.rank, {d: quasi_space(group, m, d) for d in range(cutoff + 1)})


def quasi_isotypic(
    group: ReflectionGroupData,
    m: MultFn,
    degree: int,
    character=None,
    dim: int | None = None,
) -> list[MPoly]:
    """Basis of the τ-isotypic component of (Q_m)_d; τ = V* by default."""
    n, fld = group.rank, group.field
    monos = monomials_of_degree(n, degree)
    projected = [isotypic_project(group, p, character, dim) for p in quasi_space(group, m, degree)]
    vectors = [p.coeff_vector(monos) for p in projected if p.terms]
    return [MPoly.from_vector(fld, n, monos, v) for v in row_reduce_vectors(fld, vectors)]


def isotypic_graded(group: ReflectionGroupData, m: MultFn, cutoff: int) -> GradedSubspace:
    return GradedSubspace(group.rank, {d: quasi_isotypic(group, m, d) for d in range(cutoff + 1)})


# -- quasi-invariants with values in V -----------------------------------------


def _tau_idempotent(group: ReflectionGroupData, h, j: int):
    """Σ_u λ^{ju} s_H^u as a matrix on V."""
    mat = group.elements[h.s_H]
    lam = h.det**j
    acc = mat * 0
    power = group.elements[0]
    weight = group.field.one
    for _ in range(h.n_H):
        acc = acc + power * weight
        power = power @ mat
        weight = weight * lam
    return acc


def vector_quasi_space(group: ReflectionGroupData, m: MultFn, degree: int) -> list[VectorQuasiElement]:
    """Basis of Q_m(V)_d: (1 ⊗ e_{H,j})φ ≡ 0 mod α_H^{m_H n_H} for all H, j."""
    n, fld = group.rank, group.field
    monos = monomials_of_degree(n, degree)
    ncols = n * len(monos)
    rows: dict = {}
    for idx, h in enumerate(group.hyperplanes):
        need = m.of(h) * h.n_H
        if need == 0:
            continue
        frame = AlphaFrame(h.alpha)
        i0 = frame.index
        low = []
        for e in monos:
            image = frame.to_frame(MPoly.monomial(fld, e))
            low.append({t: c for t, c in image.terms.items() if t[i0] < need})
        for j in range(1, h.n_H):
            proj = _tau_idempotent(group, h, j)
            for k in range(n):
                for col_mono, terms in enumerate(low):
                    col = k * len(monos) + col_mono
                    for l in range(n):
                        f = proj[l, k]
                        if not f:
                            continue
                        for t, c in terms.items():
                            rows.setdefault((idx, j, l, t), {})[col] = f * c
    vecs = nullspace(fld, rows.values(), ncols)
    out = []
    for v in vecs:
        comps = tuple(
            MPoly.from_vector(fld, n, monos, v[k * len(monos):(k + 1) * len(monos)]) for k in range(n)
        )
        out.append(VectorQuasiElement(comps))
    logger.debug("Q_%s(V)_%d: dimension %d", m, degree, len(out))
    return out


def vector_quasi_space_reduced(group: ReflectionGroupData, m: MultFn, degree: int) -> list[VectorQuasiElement]:
    """Same space from the reduced condition α_H^{m_H n_H} | Σ_i ∂_i(α_H) f_i."""
    n, fld = group.rank, group.field
    monos = monomials_of_degree(n, degree)
    rows: dict = {}
    for idx, h in enumerate(group.hyperplanes):
        need = m.of(h) * h.n_H
        if need == 0:
            continue
        frame = AlphaFrame(h.alpha)
        i0 = frame.index
        coeffs = [h.alpha.coeff(tuple(int(i == j) for j in range(n))) for i in range(n)]
        for col_mono, e in enumerate(monos):
            image = frame.to_frame(MPoly.monomial(fld, e))
            for k in range(n):
                if not coeffs[k]:
                    continue
                col = k * len(monos) + col_mono
                for t, c in image.terms.items():
                    if t[i0] < need:
                        rows.setdefault((idx, t), {})[col] = coeffs[k] * c
    vecs = nullspace(fld, rows.values(), n * len(monos))
    return [
        VectorQuasiElement(
            tuple(MPoly.from_vector(fld, n, monos, v[k * len(monos):(k + 1) * len(monos)]) for k in range(n))
        )
        for v in vecs
    ]


def is_vector_quasi_invariant(group: ReflectionGroupData, phi: VectorQuasiElement, m: MultFn) -> bool:
    for h in group.hyperplanes:
        need = m.of(h) * h.n_H
        if need == 0:
            continue
        for j in range(1, h.n_H):
            proj = _tau_idempotent(group, h, j)
            for l in range(group.rank):
                comp = group.zero()
                for k, f in enumerate(phi.components):
                    if proj[l, k]:
                        comp = comp + f.scale(proj[l, k])
                if not isinstance(comp.div_linear_power(h.alpha, need), MPoly):
                    return False
    return True
