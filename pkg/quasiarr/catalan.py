"""
Catalan arrangements, their cones, and freeness through trigonometric quasi-invariants.

Cat consists of the affine hyperplanes (α, x) = j, α a positive root and
|j| ≤ m_α; BCCat is the analogue for the non-reduced system BC_N.  Invariant
logarithmic fields of these arrangements are found over the invariant field
module filtered by degree, and certified with the affine Saito criterion and
again after coning.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

from .cyclotomic import CyclotomicField
from .errors import ParseError, UnsupportedGroupError
from .groups import BCMult, MultFn, ReflectionGroupData
from .linalg import Echelon, KeyIndex, nullspace, sparse_of
from .logder import (
    Derivation,
    FreenessCertificate,
    GroupContext,
    MultiArrangement,
    derivation_member,
    group_arrangement,
    is_invariant_derivation,
    saito_check,
)
from .polynomial import AlphaFrame, MPoly, parse_poly
from .quasi import GradedSubspace, is_quasi_invariant

logger = logging.getLogger(__name__)


# -- construction --------------------------------------------------------------


def catalan_arrangement(group: ReflectionGroupData, m: MultFn) -> MultiArrangement:
    """Cat: (α, x) - j for α ∈ R_+ and -m_α ≤ j ≤ m_α, each with multiplicity 1."""
    if not group.roots:
        raise UnsupportedGroupError(f"Catalan arrangements need a root system, not {group.label}")
    forms = []
    for root in group.roots:
        mult = m.of(group.hyperplanes[root.hyperplane])
        for j in range(-mult, mult + 1):
            forms.append(root.form - MPoly.constant(group.field, group.rank, j))
    return MultiArrangement(tuple(forms), (1,) * len(forms), f"Cat {group.label} m={m}")


def _bc_forms(field: CyclotomicField, n: int, m: BCMult) -> list[MPoly]:
    def const(v):
        return MPoly.constant(field, n, v)

    forms = []
    for i in range(n):
        xi = MPoly.var(field, n, i)
        forms.append(xi)
        for j in range(1, m.m1 + 1):
            forms.extend([xi - const(j), xi + const(j)])
        for j in range(1, m.m2 + 1):
            h = Fraction(2 * j - 1, 2)
            forms.extend([xi - const(h), xi + const(h)])
    for i in range(n):
        for j in range(i + 1, n):
            for eps in (1, -1):
                base = MPoly.var(field, n, i) - MPoly.var(field, n, j).scale(eps)
                forms.append(base)
                for k in range(1, m.m3 + 1):
                    forms.extend([base - const(k), base + const(k)])
    return forms


def bc_catalan(n: int, m: BCMult, field: CyclotomicField | None = None) -> MultiArrangement:
    """BCCat, the zero set of P(x) for the triple (m1, m2, m3)."""
    field = field or CyclotomicField.of(2)
    forms = _bc_forms(field, n, m)
    return MultiArrangement(tuple(forms), (1,) * len(forms), f"BCCat BC{n} m={m}")


def cone(arr: MultiArrangement) -> MultiArrangement:
    """Homogenize every form with a new last variable z and add z = 0."""
    forms = [f.homogenize(1) for f in arr.forms]
    forms.append(MPoly.var(arr.field, arr.nvars + 1, arr.nvars))
    mults = tuple(arr.mults) + (1,)
    return MultiArrangement(tuple(forms), mults, f"cone of {arr.name}".strip())


def cone_derivation(theta: Derivation) -> Derivation:
    """θ′ = z^{deg θ} Σ f_i(x/z) ∂_i, with no ∂_z component."""
    deg = theta.degree()
    deg = 0 if deg == float("-inf") else int(deg)
    comps = [f.homogenize(deg) for f in theta.components]
    comps.append(MPoly(theta.field, theta.nvars + 1))
    return Derivation(tuple(comps))


def euler_field(field: CyclotomicField, nvars: int) -> Derivation:
    return Derivation(tuple(MPoly.var(field, nvars, i) for i in range(nvars)))


def decone_derivation(theta: Derivation) -> Derivation:
    """Set z = 1 and drop the ∂_z component."""
    return Derivation(tuple(f.evaluate_var(theta.nvars - 1, 1) for f in theta.components[:-1]))


def top_part(theta: Derivation) -> Derivation:
    """Φ: keep the highest order terms of the components."""
    deg = theta.degree()
    if deg == float("-inf"):
        return theta
    return Derivation(tuple(f.homogeneous_part(int(deg)) for f in theta.components))


# -- invariant fields of Catalan arrangements ----------------------------------


def _orbit_representative_forms(group: ReflectionGroupData, m: MultFn) -> list[MPoly]:
    """(α, x) - j for one positive root α per hyperplane orbit; enough for W-invariant fields."""
    seen = set()
    forms = []
    for root in group.roots:
        h = group.hyperplanes[root.hyperplane]
        if h.orbit_id in seen:
            continue
        seen.add(h.orbit_id)
        mult = m.of(h)
        forms.extend(root.form - MPoly.constant(group.field, group.rank, j) for j in range(-mult, mult + 1))
    return forms


def invariant_affine_fields(
    ctx: GroupContext, arr: MultiArrangement, cutoff: int, forms: list[MPoly] | None = None
) -> GradedSubspace:
    """D(arr)^W filtered by degree, from the invariant fields of degree ≤ cutoff.

    ``forms`` restricts the membership conditions (the arrangement must be
    W-stable for the restriction to be valid).
    """
    group = ctx.group
    columns: list[tuple[MPoly, ...]] = []
    for e in range(cutoff + 1):
        columns.extend(ctx.fields.span(e))
    forms = forms if forms is not None else list(arr.forms)
    rows: dict = {}
    n = group.rank
    for idx, form in enumerate(forms):
        frame = AlphaFrame(form)
        i0 = frame.index
        coeffs = frame.linear
        for col, L in enumerate(columns):
            value = MPoly(group.field, n)
            for c, f in zip(coeffs, L):
                if c:
                    value = value + f.scale(c)
            for t, c in frame.to_frame(value).terms.items():
                if t[i0] == 0:
                    rows.setdefault((idx, t), {})[col] = c
    basis = []
    for v in nullspace(group.field, rows.values(), len(columns)):
        comps = [MPoly(group.field, n) for _ in range(n)]
        for c, L in zip(v, columns):
            if c:
                comps = [a + b.scale(c) for a, b in zip(comps, L)]
        basis.append(Derivation(tuple(comps)))
    pieces = {d: [L for L in basis if L.degree() <= d] for d in range(cutoff + 1)}
    logger.debug("invariant fields of %s up to degree %d: %s", arr.name, cutoff, [len(p) for p in pieces.values()])
    return GradedSubspace(n, pieces, filtered=True)


def trig_hom_space(ctx: GroupContext, m: MultFn, cutoff: int) -> GradedSubspace:
    """D(Cat)^W, isomorphic to Hom_W(V, Q_m^{tr,V}), filtered by degree."""
    arr = catalan_arrangement(ctx.group, m)
    return invariant_affine_fields(ctx, arr, cutoff, _orbit_representative_forms(ctx.group, m))


def bc_trig_hom_space(ctx: GroupContext, m: BCMult, cutoff: int) -> GradedSubspace:
    """D(BCCat)^W for the B_N group in ``ctx``."""
    arr = bc_catalan(ctx.group.rank, m, ctx.group.field)
    return invariant_affine_fields(ctx, arr, cutoff)


def leading_free_basis(ctx: GroupContext, filtered: GradedSubspace, cutoff: int) -> list[Derivation]:
    """Fields whose top parts are independent modulo invariants times earlier top parts."""
    n = ctx.group.rank
    chosen: list[tuple[Derivation, int]] = []
    for d in range(cutoff + 1):
        if len(chosen) == n:
            break
        new = [L for L in filtered.basis(d) if L.degree() == d]
        if not new:
            continue
        index = KeyIndex()
        ech = Echelon(ctx.group.field)
        for L, e in chosen:
            top = top_part(L)
            for y in ctx.basic.products(d - e):
                ech.add(index.row(sparse_of((top * y).components)))
        for L in new:
            if ech.add(index.row(sparse_of(top_part(L).components))):
                chosen.append((L, d))
                if len(chosen) == n:
                    break
    return [L for L, _ in chosen]


def affine_free_check(arr: MultiArrangement, candidates: list[Derivation]) -> FreenessCertificate:
    """Saito's criterion against Π of the affine forms."""
    return saito_check(arr, candidates)


def coned_free_check(arr: MultiArrangement, candidates: list[Derivation]) -> FreenessCertificate:
    """Saito's criterion for cone(arr) with the coned fields and the Euler field."""
    fields = [cone_derivation(L) for L in candidates]
    fields.append(euler_field(arr.field, arr.nvars + 1))
    return saito_check(cone(arr), fields)


@dataclass
class CatalanResult:
    arrangement: MultiArrangement
    fields: list[Derivation]
    affine: FreenessCertificate
    coned: FreenessCertificate
    leading: FreenessCertificate | None = None


def catalan_pipeline(ctx: GroupContext, m: MultFn, cutoff: int) -> CatalanResult:
    arr = catalan_arrangement(ctx.group, m)
    fields = leading_free_basis(ctx, trig_hom_space(ctx, m, cutoff), cutoff)
    lead = saito_check(group_arrangement(ctx.group, m, 1), [top_part(L) for L in fields])
    return CatalanResult(arr, fields, affine_free_check(arr, fields), coned_free_check(arr, fields), lead)


def bc_catalan_pipeline(ctx: GroupContext, m: BCMult, cutoff: int) -> CatalanResult:
    arr = bc_catalan(ctx.group.rank, m, ctx.group.field)
    fields = leading_free_basis(ctx, bc_trig_hom_space(ctx, m, cutoff), cutoff)
    lead = saito_check(group_arrangement(ctx.group, m.tilde(), 1), [top_part(L) for L in fields])
    return CatalanResult(arr, fields, affine_free_check(arr, fields), coned_free_check(arr, fields), lead)


# -- commutative diagram -------------------------------------------------------


@dataclass
class DiagramReport:
    delta: tuple
    rows: list[tuple[int, bool]] = dc_field(default_factory=list)
    tops: list[MPoly] = dc_field(default_factory=list)

    @property
    def commutes(self) -> bool:
        return all(ok for _, ok in self.rows)


def diagram_check(ctx: GroupContext, m: MultFn, cutoff: int, delta=None) -> DiagramReport:
    """gr(L(δ)) = Φ(L)(δ) ∈ Q_m for a basis of D(Cat)^W, with Φ(L) ∈ D_m^W."""
    group = ctx.group
    n = group.rank
    delta = tuple(delta) if delta is not None else tuple(int(i == 0) for i in range(n))
    dform = MPoly.linear(group.field, list(delta))
    dm = group_arrangement(group, m, 1)
    report = DiagramReport(delta)
    filtered = trig_hom_space(ctx, m, cutoff)
    for L in filtered.basis(cutoff):
        value = L.apply(dform)
        lead = top_part(L)
        ok = bool(derivation_member(lead, dm)) and is_invariant_derivation(group, lead)
        top = value.top_form() if value.terms else value
        if ok and value.terms:
            ok = top == lead.apply(dform) and bool(is_quasi_invariant(group, top, m))
        report.tops.append(top)
        report.rows.append((int(L.degree()) if not L.is_zero() else 0, ok))
    return report


# -- arrangement files ---------------------------------------------------------


def load_arrangement_file(path: Path | str) -> tuple[MultiArrangement, list[Derivation]]:
    """Read ``nvars``, ``form`` (optionally ``; r``) and ``field`` lines."""
    path = Path(path)
    if not path.is_file():
        raise ParseError(f"arrangement file not found: {path}")
    field = CyclotomicField.of(2)
    nvars = None
    forms, mults, fields = [], [], []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition(" ")
        value = value.strip()
        if key == "nvars":
            nvars = int(value)
        elif key == "conductor":
            field = CyclotomicField.of(int(value))
        elif nvars is None:
            raise ParseError(f"{path}:{lineno}: 'nvars' must come first")
        elif key == "form":
            text, _, r = value.partition(";")
            forms.append(parse_poly(text, field, nvars))
            mults.append(int(r) if r.strip() else 1)
        elif key == "field":
            comps = [parse_poly(c, field, nvars) for c in value.split(",")]
            if len(comps) != nvars:
                raise ParseError(f"{path}:{lineno}: field needs {nvars} components")
            fields.append(Derivation(tuple(comps)))
        else:
            raise ParseError(f"{path}:{lineno}: unknown key {key!r}")
    return MultiArrangement(tuple(forms), tuple(mults), path.stem), fields
