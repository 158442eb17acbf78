"""
Basic invariants, invariant products and the module of invariant vector fields.

The invariant ring of a reflection group is a polynomial ring in N basic
invariants.  Everything here is computed from Reynolds images of monomials,
so the choices are deterministic but only canonical up to the documented
freedom (triangular changes of the y's).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

from .errors import UnsupportedGroupError
from .groups import ReflectionGroupData, act_on_poly, act_on_tuple, reynolds
from .linalg import Echelon, KeyIndex, PolyMatrix, polymat_det, sparse_of
from .polynomial import MPoly, monomials_of_degree

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class BasicInvariants:
    """y_1..y_N with nondecreasing degrees and their Jacobian J = det(∂y_i/∂x_j)."""

    group: ReflectionGroupData
    polys: tuple[MPoly, ...]
    degrees: tuple[int, ...]
    jacobian: MPoly
    top_unique: bool
    _products: dict = dc_field(default_factory=dict, repr=False)

    def products(self, degree: int) -> list[MPoly]:
        """All monomials in the y's of weighted degree ``degree``."""
        cached = self._products.get(degree)
        if cached is None:
            cached = [_y_monomial(self, a) for a in weighted_exponents(self.degrees, degree)]
            self._products[degree] = cached
        return cached

    def products_without_top(self, degree: int) -> list[MPoly]:
        """Monomials in y_1..y_{N-1} only (the ring T)."""
        return [
            _y_monomial(self, a)
            for a in weighted_exponents(self.degrees, degree)
            if a[-1] == 0
        ]

    def jacobian_scalar(self):
        """c with J = c·Π α_H^{n_H-1}, or None when J has another shape."""
        rest = self.jacobian
        for h in self.group.hyperplanes:
            rest = rest.div_linear_power(h.alpha, h.n_H - 1)
            if not isinstance(rest, MPoly):
                return None
        if not rest.terms or not rest.is_constant():
            return None
        return rest.constant_value()


def weighted_exponents(degrees, total: int) -> list[tuple[int, ...]]:
    """Exponent vectors a with Σ a_i·degrees[i] = total."""
    if total < 0:
        return []
    if not degrees:
        return [()] if total == 0 else []
    out = []
    d0 = degrees[0]
    for a in range(total // d0, -1, -1):
        for rest in weighted_exponents(degrees[1:], total - a * d0):
            out.append((a,) + rest)
    return out


def _y_monomial(bi: BasicInvariants, exps) -> MPoly:
    acc = MPoly.constant(bi.group.field, bi.group.rank, 1)
    for y, a in zip(bi.polys, exps):
        if a:
            acc = acc * y**a
    return acc


def _jacobian(group: ReflectionGroupData, polys) -> MPoly:
    rows = [[y.diff(j) for j in range(group.rank)] for y in polys]
    return polymat_det(PolyMatrix.from_rows(rows))


def basic_invariants(group: ReflectionGroupData, max_degree: int | None = None) -> BasicInvariants:
    """
    Greedy choice by degree: at each degree, the invariants not generated by
    the earlier y's, each reduced modulo the products and normalized to a
    unit leading coefficient.
    """
    n, fld = group.rank, group.field
    limit = max_degree if max_degree is not None else group.order
    chosen: list[MPoly] = []
    degrees: list[int] = []
    for d in range(1, limit + 1):
        if len(chosen) == n:
            break
        monos = monomials_of_degree(n, d)
        index = KeyIndex(monos)
        ech = Echelon(fld)
        partial = BasicInvariants(group, tuple(chosen), tuple(degrees), MPoly(fld, n), False)
        ech.extend(index.row(p.terms) for p in partial.products(d))
        for e in monos:
            img = reynolds(group, MPoly.monomial(fld, e))
            if not img.terms:
                continue
            rest = ech._reduce_full(index.row(img.terms))
            if not rest:
                continue
            lead = rest[min(rest)]
            y = MPoly(fld, n, {monos[c]: v / lead for c, v in rest.items()})
            ech.add(index.row(y.terms))
            chosen.append(y)
            degrees.append(d)
            logger.debug("basic invariant of degree %d: %s", d, y)
            if len(chosen) == n:
                break
    if len(chosen) < n:
        raise UnsupportedGroupError(f"found only {len(chosen)} basic invariants up to degree {limit}")
    return basic_invariants_from(group, chosen)


def basic_invariants_from(group: ReflectionGroupData, polys) -> BasicInvariants:
    """Wrap an explicit choice of basic invariants after checking it."""
    polys = sorted(polys, key=lambda p: p.degree())
    if len(polys) != group.rank:
        raise ValueError(f"need {group.rank} basic invariants, got {len(polys)}")
    for p in polys:
        if not p.is_homogeneous():
            raise ValueError(f"basic invariant {p} is not homogeneous")
        for g in group.generators:
            if act_on_poly(group, g, p) != p:
                raise ValueError(f"{p} is not invariant")
    jac = _jacobian(group, polys)
    if not jac.terms:
        raise ValueError("basic invariants are algebraically dependent (J = 0)")
    degrees = tuple(int(p.degree()) for p in polys)
    top_unique = group.rank == 1 or degrees[-1] > degrees[-2]
    logger.info("basic invariants of %s: degrees %s", group.label, degrees)
    return BasicInvariants(group, tuple(polys), degrees, jac, top_unique)


def invariant_basis(bi: BasicInvariants, degree: int) -> list[MPoly]:
    return bi.products(degree)


# -- invariant vector fields ----------------------------------------------------


def reynolds_field(group: ReflectionGroupData, comps) -> list[MPoly]:
    acc = [group.zero() for _ in range(group.rank)]
    for g in range(group.order):
        moved = act_on_tuple(group, g, comps)
        acc = [a + b for a, b in zip(acc, moved)]
    return [a / group.order for a in acc]


@dataclass(eq=False)
class InvariantFields:
    """Free generators L_1..L_N of (SV* ⊗ V)^W over the invariants."""

    basic: BasicInvariants
    fields: tuple[tuple[MPoly, ...], ...]
    degrees: tuple[int, ...]

    def span(self, degree: int) -> list[tuple[MPoly, ...]]:
        """A basis of the invariant fields of degree ``degree``."""
        out = []
        for L, e in zip(self.fields, self.degrees):
            for y in self.basic.products(degree - e):
                out.append(tuple(y * f for f in L))
        return out


def invariant_fields(bi: BasicInvariants, max_degree: int | None = None) -> InvariantFields:
    """Greedy generators of invariant fields from Reynolds images of μ·∂_k."""
    group = bi.group
    n, fld = group.rank, group.field
    limit = max_degree if max_degree is not None else max(bi.degrees) + 1
    fields: list[tuple[MPoly, ...]] = []
    degrees: list[int] = []
    for d in range(0, limit + 1):
        if len(fields) == n:
            break
        index = KeyIndex()
        ech = Echelon(fld)
        partial = InvariantFields(bi, tuple(fields), tuple(degrees))
        ech.extend(index.row(sparse_of(L)) for L in partial.span(d))
        for e in monomials_of_degree(n, d):
            for k in range(n):
                comps = [MPoly.monomial(fld, e) if i == k else MPoly(fld, n) for i in range(n)]
                img = tuple(reynolds_field(group, comps))
                if not any(c.terms for c in img):
                    continue
                if ech.add(index.row(sparse_of(img))):
                    fields.append(img)
                    degrees.append(d)
                    if len(fields) == n:
                        break
            if len(fields) == n:
                break
    if len(fields) < n:
        raise UnsupportedGroupError(f"found only {len(fields)} invariant field generators")
    logger.debug("invariant field generators of %s in degrees %s", group.label, degrees)
    return InvariantFields(bi, tuple(fields), tuple(degrees))
