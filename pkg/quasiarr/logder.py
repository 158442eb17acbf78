"""
Logarithmic derivations of (multi)arrangements and Saito's criterion.

D(A, r) is the module of polynomial vector fields L = Σ f_i ∂_i with
α_H^{r(H)} | L(α_H) for every H.  For a reflection arrangement with an
invariant multiplicity m the two modules of interest are
D_m = D(A, mn + 1) and D̃_m = D(A, mn).  Invariant elements of D_m come from
quasi-invariant maps V* → Q_m (the map Θ), and D̃_m is the image of the
vector-valued quasi-invariants Q_m(V) (the map ρ).
"""

from __future__ import annotations

import hashlib
import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .cyclotomic import CycScalar, CyclotomicField
from .errors import DimensionMismatchError, MembershipError
from .groups import MultFn, ReflectionGroupData, act_on_tuple, c_v
from .invariants import BasicInvariants, InvariantFields, basic_invariants, invariant_fields
from .linalg import (
    Echelon,
    KeyIndex,
    PolyMatrix,
    nullspace,
    polymat_det,
    polymat_rank,
    sparse_of,
)
from .polynomial import AlphaFrame, MPoly, monomials_of_degree
from .quasi import QuasiWitness, VectorQuasiElement, _low_order_rows, vector_quasi_space

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Derivation:
    """L = Σ f_i ∂_i."""

    components: tuple[MPoly, ...]

    def __post_init__(self):
        if not self.components:
            raise DimensionMismatchError("a derivation needs at least one component")
        if len({c.nvars for c in self.components}) != 1 or self.components[0].nvars != len(self.components):
            raise DimensionMismatchError("component count must equal the variable count")

    @classmethod
    def of(cls, comps: Iterable[MPoly]) -> Derivation:
        return cls(tuple(comps))

    @classmethod
    def zero(cls, field: CyclotomicField, nvars: int) -> Derivation:
        return cls(tuple(MPoly(field, nvars) for _ in range(nvars)))

    @property
    def nvars(self) -> int:
        return len(self.components)

    @property
    def field(self) -> CyclotomicField:
        return self.components[0].field

    def degree(self):
        return max(c.degree() for c in self.components)

    def is_zero(self) -> bool:
        return not any(c.terms for c in self.components)

    def is_homogeneous(self) -> bool:
        degs = {c.degree() for c in self.components if c.terms}
        return len(degs) <= 1 and all(c.is_homogeneous() for c in self.components)

    def apply(self, f: MPoly) -> MPoly:
        acc = MPoly(self.field, self.nvars)
        for i, c in enumerate(self.components):
            if c.terms:
                acc = acc + c * f.diff(i)
        return acc

    def scale(self, c) -> Derivation:
        return Derivation(tuple(f.scale(c) for f in self.components))

    def __add__(self, other: Derivation) -> Derivation:
        return Derivation(tuple(a + b for a, b in zip(self.components, other.components)))

    def __mul__(self, f: MPoly) -> Derivation:
        return Derivation(tuple(f * c for c in self.components))

    __rmul__ = __mul__

    def to_text(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        parts = [f"({c.to_text(names)})*d{names[i]}" for i, c in enumerate(self.components) if c.terms]
        return " + ".join(parts) if parts else "0"

    __str__ = to_text


@dataclass
class MultiArrangement:
    """Hyperplanes given by (possibly affine) forms, each with a multiplicity."""

    forms: tuple[MPoly, ...]
    mults: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.forms) != len(self.mults):
            raise DimensionMismatchError("one multiplicity per hyperplane")
        if any(r < 0 for r in self.mults):
            raise ValueError("multiplicities must be nonnegative")
        if self.forms and len({f.nvars for f in self.forms}) != 1:
            raise DimensionMismatchError("forms must share the variable count")
        seen = set()
        normalized = []
        for f in self.forms:
            g = AlphaFrame(f).normalized
            key = tuple(sorted((e, c.coeffs) for e, c in g.terms.items()))
            if key in seen:
                raise ValueError(f"hyperplane {f} listed twice")
            seen.add(key)
            normalized.append(g)
        self.forms = tuple(normalized)

    @property
    def nvars(self) -> int:
        return self.forms[0].nvars if self.forms else 0

    @property
    def field(self) -> CyclotomicField:
        return self.forms[0].field

    @property
    def central(self) -> bool:
        return all(not f.constant_value() for f in self.forms)

    def total(self) -> int:
        return sum(self.mults)

    def defining_polynomial(self) -> MPoly:
        acc = MPoly.constant(self.field, self.nvars, 1)
        for f, r in zip(self.forms, self.mults):
            if r:
                acc = acc * f**r
        return acc

    def digest(self) -> str:
        """sha256 of the canonical text of forms and multiplicities."""
        text = ";".join(f"{f.to_text()}^{r}" for f, r in zip(self.forms, self.mults))
        return hashlib.sha256(text.encode()).hexdigest()


def group_arrangement(group: ReflectionGroupData, m: MultFn, shift: int = 1, name: str = "") -> MultiArrangement:
    """(A, m n + shift): shift 1 gives D_m, shift 0 gives D̃_m."""
    forms = tuple(h.alpha for h in group.hyperplanes)
    mults = tuple(m.of(h) * h.n_H + shift for h in group.hyperplanes)
    return MultiArrangement(forms, mults, name or f"{group.label} m={m} shift={shift}")


# -- membership ----------------------------------------------------------------


def _linear_part(form: MPoly) -> list[CycScalar]:
    n = form.nvars
    return [form.coeff(tuple(int(i == j) for j in range(n))) for i in range(n)]


def derivation_member(L: Derivation, arr: MultiArrangement) -> QuasiWitness:
    """α^{r} | L(α) for every hyperplane (affine forms: L applied to the linear part)."""
    if L.nvars != arr.nvars:
        raise DimensionMismatchError(f"derivation in {L.nvars} variables, arrangement in {arr.nvars}")
    for idx, (form, r) in enumerate(zip(arr.forms, arr.mults)):
        if r == 0:
            continue
        value = MPoly(L.field, L.nvars)
        for c, f in zip(_linear_part(form), L.components):
            if c:
                value = value + f.scale(c)
        q = value.div_linear_power(form, r)
        if not isinstance(q, MPoly):
            return QuasiWitness(False, idx, q.max_exponent, r)
    return QuasiWitness(True)


def is_invariant_derivation(group: ReflectionGroupData, L: Derivation) -> bool:
    return all(tuple(act_on_tuple(group, g, L.components)) == L.components for g in group.generators)


# -- Θ and ρ -------------------------------------------------------------------


@dataclass(eq=False)
class GroupContext:
    """Basic invariants and invariant field generators of one group, built once."""

    group: ReflectionGroupData
    basic: BasicInvariants
    fields: InvariantFields

    @classmethod
    def of(cls, group: ReflectionGroupData, basic: BasicInvariants | None = None) -> GroupContext:
        basic = basic or basic_invariants(group)
        return cls(group, basic, invariant_fields(basic))


def hom_space(ctx: GroupContext, m: MultFn, degree: int) -> list[tuple[MPoly, ...]]:
    """Hom_W(V*, Q_m)_d as tuples (φ(x_1), …, φ(x_N)).

    Unknowns are coordinates over the invariant fields of degree d; the
    conditions ask every component to be m-quasi-invariant.
    """
    group = ctx.group
    span = ctx.fields.span(degree)
    if not span:
        return []
    rows: list[dict] = []
    for i in range(group.rank):
        rows.extend(_low_order_rows(group, m, [L[i] for L in span]))
    out = []
    for v in nullspace(group.field, rows, len(span)):
        comps = [MPoly(group.field, group.rank) for _ in range(group.rank)]
        for c, L in zip(v, span):
            if c:
                comps = [a + b.scale(c) for a, b in zip(comps, L)]
        out.append(tuple(comps))
    logger.debug("Hom_W(V*, Q_%s)_%d: %d unknowns, dimension %d", m, degree, len(span), len(out))
    return out


def theta_from_hom(group: ReflectionGroupData, m: MultFn, maps: Iterable[Sequence[MPoly]]) -> list[Derivation]:
    """Θ(φ) = Σ φ(x_i) ∂_i, checked to be invariant and to lie in D_m."""
    arr = group_arrangement(group, m, 1)
    out = []
    for phi in maps:
        L = Derivation(tuple(phi))
        if not is_invariant_derivation(group, L):
            raise MembershipError(f"Θ image is not W-invariant: {L}")
        w = derivation_member(L, arr)
        if not w:
            raise MembershipError(f"Θ image not in D_m (hyperplane {w.hyperplane}, exponent {w.achieved})")
        out.append(L)
    return out


def theta_inverse(L: Derivation) -> tuple[MPoly, ...]:
    """Θ⁻¹(Σ f_i ∂_i)(x_k) = f_k."""
    return L.components


def invariant_derivations(ctx: GroupContext, m: MultFn, degree: int) -> list[Derivation]:
    return theta_from_hom(ctx.group, m, hom_space(ctx, m, degree))


def rho_from_vector_quasi(group: ReflectionGroupData, m: MultFn, phi: VectorQuasiElement) -> Derivation:
    """ρ(Σ f_i ⊗ e_i) = Σ f_i ∂_i, checked to lie in D̃_m."""
    L = Derivation(tuple(phi.components))
    w = derivation_member(L, group_arrangement(group, m, 0))
    if not w:
        raise MembershipError(f"ρ image not in D̃_m (hyperplane {w.hyperplane}, exponent {w.achieved})")
    return L


# -- certificates --------------------------------------------------------------


@dataclass
class FreenessCertificate:
    """Outcome of Saito's criterion for a candidate basis."""

    arrangement: MultiArrangement
    basis: tuple[Derivation, ...]
    exponents: tuple
    determinant: MPoly | None = None
    scalar: CycScalar | None = None
    passed: bool = False
    residual: MPoly | None = None
    rank: int | None = None
    degree_sum_ok: bool = False
    notes: list[str] = dc_field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def exponent_shift(self, cv: Fraction) -> tuple:
        """b_k = exponent_k - c_V."""
        return tuple(Fraction(e) - cv for e in self.exponents)


def _field_degree(L: Derivation) -> int:
    d = L.degree()
    return 0 if d == float("-inf") else int(d)


def saito_check(arr: MultiArrangement, basis: Sequence[Derivation]) -> FreenessCertificate:
    """Members of D(A, r) whose coefficient determinant is c·Π α^{r} with c ≠ 0."""
    basis = tuple(basis)
    exps = tuple(sorted(_field_degree(L) for L in basis))
    cert = FreenessCertificate(arr, basis, exps)
    cert.degree_sum_ok = sum(exps) == arr.total()
    n = arr.nvars
    if len(basis) != n:
        cert.notes.append(f"need {n} fields, got {len(basis)}")
        return cert
    for k, L in enumerate(basis):
        w = derivation_member(L, arr)
        if not w:
            cert.notes.append(f"field {k + 1} fails hyperplane {w.hyperplane}: exponent {w.achieved} < {w.required}")
            return cert
    mat = PolyMatrix.from_rows([list(L.components) for L in basis])
    det = polymat_det(mat)
    cert.determinant = det
    if not det.terms:
        cert.rank = polymat_rank(mat)
        cert.notes.append(f"fields are dependent: rank {cert.rank}")
        return cert
    rest = det
    for idx, (form, r) in enumerate(zip(arr.forms, arr.mults)):
        if r == 0:
            continue
        q = rest.div_linear_power(form, r)
        if not isinstance(q, MPoly):
            cert.residual = rest
            cert.notes.append(f"{form.to_text()} divides the determinant only {q.max_exponent} < {r} times")
            return cert
        rest = q
    cert.residual = rest
    if not rest.is_constant():
        cert.notes.append(f"residual factor {rest.to_text()}")
        return cert
    cert.scalar = rest.constant_value()
    cert.passed = True
    logger.info("Saito certificate PASS for %s: exponents %s", arr.name or arr.digest()[:12], exps)
    return cert


def saito_independence(arr: MultiArrangement, basis: Sequence[Derivation]) -> FreenessCertificate:
    """Homogeneous variant: members, independent over SV*, and Σ deg θ_i = Σ r(H)."""
    basis = tuple(basis)
    exps = tuple(sorted(_field_degree(L) for L in basis))
    cert = FreenessCertificate(arr, basis, exps)
    cert.degree_sum_ok = sum(exps) == arr.total()
    if len(basis) != arr.nvars or not all(L.is_homogeneous() for L in basis):
        cert.notes.append("need nvars homogeneous fields")
        return cert
    if not all(derivation_member(L, arr) for L in basis):
        cert.notes.append("a field is not a member")
        return cert
    cert.rank = polymat_rank(PolyMatrix.from_rows([list(L.components) for L in basis]))
    cert.passed = cert.rank == arr.nvars and cert.degree_sum_ok
    if not cert.passed:
        cert.notes.append(f"rank {cert.rank}, degree sum {sum(exps)} vs {arr.total()}")
    return cert


def free_basis(
    arr: MultiArrangement,
    candidates_at: Callable[[int], list[Derivation]],
    multipliers_at: Callable[[int], list[MPoly]],
    degrees: Iterable[int],
) -> FreenessCertificate:
    """Greedy generator choice by degree, then Saito's criterion.

    At degree d a candidate is kept when it is independent of the multiples
    μ·θ_j (μ from ``multipliers_at(d - deg θ_j)``) of the generators chosen so
    far, including those chosen earlier at d.
    """
    n = arr.nvars
    chosen: list[tuple[Derivation, int]] = []
    for d in degrees:
        if len(chosen) == n:
            break
        cands = candidates_at(d)
        if not cands:
            continue
        index = KeyIndex()
        ech = Echelon(arr.field)
        for L, e in chosen:
            for mu in multipliers_at(d - e):
                ech.add(index.row(sparse_of((L * mu).components)))
        for L in cands:
            if ech.add(index.row(sparse_of(L.components))):
                chosen.append((L, d))
                logger.debug("generator of degree %d chosen", d)
                if len(chosen) == n:
                    break
    if len(chosen) < n:
        cert = FreenessCertificate(arr, tuple(L for L, _ in chosen), tuple(e for _, e in chosen))
        cert.notes.append(f"cutoff exhausted with {len(chosen)} of {n} generators")
        return cert
    return saito_check(arr, [L for L, _ in chosen])


def free_basis_dm(ctx: GroupContext, m: MultFn, cutoff: int) -> FreenessCertificate:
    """Invariant free basis of D_m from Hom_W(V*, Q_m), multipliers the invariants."""
    group = ctx.group
    start = int(-(-c_v(group, m) // 1))
    cert = free_basis(
        group_arrangement(group, m, 1, f"D_m {group.label} m={m}"),
        lambda d: invariant_derivations(ctx, m, d),
        ctx.basic.products,
        range(start, cutoff + 1),
    )
    cert.notes.append(f"c_V = {c_v(group, m)}")
    return cert


def free_basis_dtilde(group: ReflectionGroupData, m: MultFn, cutoff: int) -> FreenessCertificate:
    """Free basis of D̃_m from ρ(Q_m(V)), multipliers all monomials."""
    cv = c_v(group, m)
    start = int(-(-cv // 1))
    n, fld = group.rank, group.field

    def monomials(d: int) -> list[MPoly]:
        return [MPoly.monomial(fld, e) for e in monomials_of_degree(n, d)]

    cert = free_basis(
        group_arrangement(group, m, 0, f"D~_m {group.label} m={m}"),
        lambda d: [rho_from_vector_quasi(group, m, phi) for phi in vector_quasi_space(group, m, d)],
        monomials,
        range(start, cutoff + 1),
    )
    cert.notes.append(f"c_V = {cv}")
    return cert


def basis_matrix_span(ctx: GroupContext, cert: FreenessCertificate, degree: int) -> list[MPoly]:
    """Invariant multiples of the components θ_i(x_j) of a D_m^W basis, in degree d."""
    out = []
    for L in cert.basis:
        e = _field_degree(L)
        for y in ctx.basic.products(degree - e):
            out.extend(y * c for c in L.components)
    return out


# -- symmetric group integral formula -------------------------------------------


def symmetric_integral_basis(n: int, m: int, field: CyclotomicField | None = None) -> list[Derivation]:
    """Fields L^{(k)} = Σ_i f_i^{(k)} ∂_i in N + 1 ambient coordinates, k = 0..N-1.

    f_i^{(k)} = Σ_j ∫_{x_i}^{x_j} t^k Π_s (t - x_s)^m dt, integrated exactly in
    an auxiliary last variable t.
    """
    field = field or CyclotomicField.of(2)
    amb = n + 1
    nv = amb + 1
    t = MPoly.var(field, nv, amb)
    prod = MPoly.constant(field, nv, 1)
    for s in range(amb):
        prod = prod * (t - MPoly.var(field, nv, s)) ** m
    out = []
    for k in range(n):
        F = (t**k * prod).antiderivative(amb)
        values = []
        for j in range(amb):
            images = [MPoly.var(field, amb, i) for i in range(amb)] + [MPoly.var(field, amb, j)]
            values.append(F.substitute(images))
        total = MPoly(field, amb)
        for v in values:
            total = total + v
        comps = tuple(total - values[i].scale(amb) for i in range(amb))
        out.append(Derivation(comps))
    return out


def essentialize(L: Derivation) -> Derivation:
    """Restrict an ambient S_{N+1} field to Σx = 0 in the coordinates u_i = x_i, i ≤ N."""
    amb = L.nvars
    n = amb - 1
    field = L.field
    images = [MPoly.var(field, n, i) for i in range(n)]
    last = MPoly(field, n)
    for u in images:
        last = last - u
    images.append(last)
    return Derivation(tuple(c.substitute(images) for c in L.components[:n]))


def integral_basis_certificate(group: ReflectionGroupData, m: int) -> FreenessCertificate:
    """Saito check of the essentialized integral formula fields for A_N."""
    n = group.rank
    fields = [essentialize(L) for L in symmetric_integral_basis(n, m, group.field)]
    arr = group_arrangement(group, MultFn.constant(group, m), 1, f"integral {group.label} m={m}")
    return saito_check(arr, fields)
