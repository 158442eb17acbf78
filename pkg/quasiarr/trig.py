"""
Trigonometric quasi-invariants and the difference calculus δ_α.

A condition is a pair (form, shift t): the linear form must divide
p(x + t) - p(x - t), i.e. the two shifted values agree on the hyperplane
form = 0.  For a reduced root α with multiplicity m_α the shifts are
½jα^∨ for j = 1..m_α; the non-reduced system BC_N gets its own list.
Spaces are filtered by total degree, and one nullspace over the monomials
of degree ≤ cutoff (ascending) gives a filtration-adapted basis.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .config import parallel_map
from .cyclotomic import CyclotomicField
from .errors import DeltaChainError, UnsupportedGroupError
from .groups import BCMult, MultFn, ReflectionGroupData
from .linalg import nullspace, row_reduce_vectors
from .polynomial import AlphaFrame, MPoly, monomials_of_degree, monomials_up_to
from .quasi import GradedSubspace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShiftCondition:
    form: MPoly
    shift: tuple

    def holds(self, p: MPoly) -> bool:
        diff = p.translate(self.shift) - p.translate([-t for t in self.shift])
        return isinstance(diff.div_linear_power(self.form, 1), MPoly)


def trig_conditions(group: ReflectionGroupData, m: MultFn) -> list[ShiftCondition]:
    """(α, x) | p(x + ½jα^∨) - p(x - ½jα^∨) for every positive root α, j = 1..m_α."""
    if not group.family.crystallographic:
        raise UnsupportedGroupError(f"trigonometric quasi-invariants need a Weyl group, not {group.label}")
    out = []
    half = Fraction(1, 2)
    for root in group.roots:
        mult = m.of(group.hyperplanes[root.hyperplane])
        for j in range(1, mult + 1):
            out.append(ShiftCondition(root.form, tuple(c * (half * j) for c in root.coroot)))
    return out


def bc_conditions(field: CyclotomicField, n: int, m: BCMult) -> list[ShiftCondition]:
    """Shift conditions of Q^tr_m(BC_N) for the triple (m1, m2, m3)."""
    out = []

    def unit(*pairs):
        v = [field.zero] * n
        for i, c in pairs:
            v[i] = v[i] + c
        return v

    for j in range(n):
        xj = MPoly.var(field, n, j)
        for s in range(1, m.m1 + 1):
            out.append(ShiftCondition(xj, tuple(unit((j, s)))))
        for s in range(1, m.m2 + 1):
            out.append(ShiftCondition(xj, tuple(unit((j, Fraction(2 * s - 1, 2))))))
    for i in range(n):
        for j in range(i + 1, n):
            for eps in (1, -1):
                form = MPoly.linear(field, unit((i, 1), (j, -eps)))
                for s in range(1, m.m3 + 1):
                    half = Fraction(s, 2)
                    out.append(ShiftCondition(form, tuple(unit((i, half), (j, -eps * half)))))
    return out


def _condition_rows(conditions: list[ShiftCondition], polys: list[MPoly]) -> list[dict]:
    def per_condition(cond: ShiftCondition) -> list[dict]:
        frame = AlphaFrame(cond.form)
        i0 = frame.index
        minus = [-t for t in cond.shift]
        rows: dict = {}
        for j, p in enumerate(polys):
            diff = frame.to_frame(p.translate(cond.shift) - p.translate(minus))
            for e, c in diff.terms.items():
                if e[i0] == 0:
                    rows.setdefault(e, {})[j] = c
        return list(rows.values())

    out: list[dict] = []
    for rows in parallel_map(per_condition, conditions):
        out.extend(rows)
    return out


def filtered_solution_space(
    field: CyclotomicField, nvars: int, conditions: list[ShiftCondition], cutoff: int
) -> GradedSubspace:
    """Polynomials of degree ≤ cutoff satisfying every condition, as a filtered space."""
    monos = monomials_up_to(nvars, cutoff)
    polys = [MPoly.monomial(field, e) for e in monos]
    rows = _condition_rows(conditions, polys)
    basis = [MPoly.from_vector(field, nvars, monos, v) for v in nullspace(field, rows, len(monos))]
    pieces = {d: [p for p in basis if p.degree() <= d] for d in range(cutoff + 1)}
    logger.debug("filtered space up to degree %d: dims %s", cutoff, [len(pieces[d]) for d in pieces])
    return GradedSubspace(nvars, pieces, filtered=True)


def trig_quasi_space(group: ReflectionGroupData, m: MultFn, cutoff: int) -> GradedSubspace:
    return filtered_solution_space(group.field, group.rank, trig_conditions(group, m), cutoff)


def bc_trig_quasi_space(n: int, m: BCMult, cutoff: int, field: CyclotomicField | None = None) -> GradedSubspace:
    field = field or CyclotomicField.of(2)
    return filtered_solution_space(field, n, bc_conditions(field, n, m), cutoff)


def is_trig_quasi_invariant(p: MPoly, conditions: list[ShiftCondition]) -> bool:
    return all(c.holds(p) for c in conditions)


def leading_term_space(filtered: GradedSubspace) -> GradedSubspace:
    """gr of a filtered space: degree-d parts of F_d, which span F_d / F_{d-1}."""
    if not filtered.filtered:
        return filtered
    out = {}
    for d in filtered.degrees():
        monos = monomials_of_degree(filtered.nvars, d)
        tops = [p.homogeneous_part(d) for p in filtered.basis(d)]
        tops = [t for t in tops if t.terms]
        if not tops:
            out[d] = []
            continue
        fld = tops[0].field
        vectors = row_reduce_vectors(fld, [t.coeff_vector(monos) for t in tops])
        out[d] = [MPoly.from_vector(fld, filtered.nvars, monos, v) for v in vectors]
    return GradedSubspace(filtered.nvars, out)


# -- the δ_α calculus ----------------------------------------------------------


def inner_form(alpha, field: CyclotomicField) -> MPoly:
    """(α, x) for the standard scalar product."""
    return MPoly.linear(field, list(alpha))


def delta_shift(p: MPoly, alpha, scale=1) -> MPoly:
    """δ p(x) = p(x + scale·α) - p(x - scale·α)."""
    shift = [a * scale for a in alpha]
    return p.translate(shift) - p.translate([-a for a in shift])


def _vanishes_on(u: MPoly, form: MPoly) -> bool:
    return isinstance(u.div_linear_power(form, 1), MPoly)


def delta_chain_check(p: MPoly, alpha, l: int, r: int, form: MPoly | None = None) -> bool:
    """The δ-form of the shift conditions at sα (s ≤ l) and (l + 2s)α (s ≤ r).

    u_1 = δ_α p, u_{s+1} = δ_α(u_s / (α, x)); after l steps δ_{2α} replaces δ_α.
    Every u must vanish on (α, x) = 0.  Raises DeltaChainError when r > 0 and
    l = 0, where the chain is undefined.
    """
    if l == 0:
        if r > 0:
            raise DeltaChainError("the δ-chain needs l >= 1 when r > 0")
        return True
    form = form if form is not None else inner_form(alpha, p.field)
    u = delta_shift(p, alpha)
    if not _vanishes_on(u, form):
        return False
    steps = [1] * (l - 1) + [2] * r
    for scale in steps:
        q = u.div_linear_power(form, 1)
        if not isinstance(q, MPoly):
            raise DeltaChainError("intermediate division by (α, x) is not exact")
        u = delta_shift(q, alpha, scale)
        if not _vanishes_on(u, form):
            return False
    return True


def direct_shift_check(p: MPoly, alpha, l: int, r: int, form: MPoly | None = None) -> bool:
    """p(x + sα) = p(x - sα) on (α, x) = 0 for s = 1..l and s = l+2, …, l+2r."""
    form = form if form is not None else inner_form(alpha, p.field)
    shifts = list(range(1, l + 1)) + [l + 2 * s for s in range(1, r + 1)]
    return all(_vanishes_on(delta_shift(p, alpha, s), form) for s in shifts)


def bc_delta_parameters(m1: int, m2: int) -> tuple[Fraction, int, int]:
    """(scale, l, r) such that the e_j-conditions of BC_N are the (l, r) pattern for α = scale·e_j."""
    if m2 == 0:
        return Fraction(1), m1, 0
    if m1 >= m2:
        return Fraction(1, 2), 2 * m2, m1 - m2
    return Fraction(1, 2), 2 * m1 + 1, m2 - m1 - 1


def leading_term_derivative_check(p0: MPoly, alpha, count: int, form: MPoly | None = None) -> bool:
    """∂_α^{2s-1} p0 vanishes on (α, x) = 0 for s = 1..count."""
    form = form if form is not None else inner_form(alpha, p0.field)
    d = p0.partial(alpha)
    for s in range(1, count + 1):
        if not _vanishes_on(d, form):
            return False
        d = d.partial(alpha).partial(alpha)
    return True
