"""Worked examples, re-derived and compared by span equality."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

from .catalan import bc_catalan, bc_catalan_pipeline, catalan_arrangement, catalan_pipeline
from .groups import BCMult, Family, MultFn, build_group, c_v
from .linalg import in_span, spans_equal
from .logder import (
    Derivation,
    GroupContext,
    derivation_member,
    free_basis_dm,
    free_basis_dtilde,
    group_arrangement,
    hom_space,
    is_invariant_derivation,
    saito_check,
)
from .polynomial import MPoly, parse_poly
from .quasi import is_quasi_invariant, quasi_isotypic, vector_quasi_space
from .trig import bc_conditions, bc_delta_parameters, delta_chain_check, is_trig_quasi_invariant, trig_conditions

logger = logging.getLogger(__name__)


@dataclass
class Row:
    name: str
    passed: bool
    detail: str = ""

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


def _swap(p: MPoly) -> MPoly:
    return p.permute([1, 0])


def _pair(p: MPoly) -> Derivation:
    """Σ p(x_i, x_j) ∂_i for a rank-2 symmetric pattern: (p, p with x1 and x2 swapped)."""
    return Derivation((p, _swap(p)))


# -- G(3,1,2), m = 1 -----------------------------------------------------------

G312_VSTAR = {
    7: ["x1^7 - 7*x1^4*x2^3", "-7*x1^3*x2^4 + x2^7"],
    10: ["x1^10 + 5*x1^4*x2^6", "5*x1^6*x2^4 + x2^10"],
}
G312_VECTOR = [
    ("x1^3*(x1^3 - 4*x2^3)", "-3*x1^2*x2^4"),
    ("3*x1^4*x2^2", "x2^3*(4*x1^3 - x2^3)"),
]
G312_FIELDS = {
    7: ("x1^4*(x1^3 - 7*x2^3)", "x2^4*(x2^3 - 7*x1^3)"),
    10: ("x1^4*(x1^6 + 5*x2^6)", "x2^4*(5*x1^6 + x2^6)"),
}


def example_g312() -> list[Row]:
    group = build_group(Family.G, (3, 1, 2))
    fld = group.field
    m = MultFn.constant(group, 1)
    ctx = GroupContext.of(group)
    y1 = ctx.basic.polys[0]
    rows = []

    seven = [parse_poly(t, fld, 2) for t in G312_VSTAR[7]]
    ten = [parse_poly(t, fld, 2) for t in G312_VSTAR[10]] + [y1 * p for p in seven]
    ok = spans_equal(fld, quasi_isotypic(group, m, 7), seven) and spans_equal(fld, quasi_isotypic(group, m, 10), ten)
    rows.append(Row("Q_1^V* generators in degrees 7, 7, 10, 10", ok))

    vec = [tuple(parse_poly(t, fld, 2) for t in pair) for pair in G312_VECTOR]
    ok = spans_equal(fld, [phi.components for phi in vector_quasi_space(group, m, 6)], vec)
    rows.append(Row("Q_1(V) generators in degree 6", ok))

    t7 = tuple(parse_poly(t, fld, 2) for t in G312_FIELDS[7])
    t10 = tuple(parse_poly(t, fld, 2) for t in G312_FIELDS[10])
    ok = spans_equal(fld, hom_space(ctx, m, 7), [t7]) and spans_equal(
        fld, hom_space(ctx, m, 10), [tuple(y1 * f for f in t7), t10]
    )
    cert = free_basis_dm(ctx, m, 10)
    ok = ok and cert.passed and cert.exponents == (7, 10)
    rows.append(Row("D_1 invariant basis, exponents (7, 10)", ok, f"exponents {cert.exponents}"))

    cert = free_basis_dtilde(group, m, 8)
    ok = cert.passed and cert.exponents == (6, 6) and c_v(group, m) == 6
    rows.append(Row("D~_1 basis, exponents (6, 6), c_V = 6", ok, f"exponents {cert.exponents}"))
    return rows


# -- I2(6) ---------------------------------------------------------------------

I26_FIELDS = {
    (1, 1): [
        ("x1^6/5 - 2*x1^4*x2^2 + x1^2*x2^4", "-4/3*x1^3*x2^3 + 4/5*x1*x2^5"),
        ("-3/5*x1^5*x2 + x1^3*x2^3", "-3/4*x1^4*x2^2 + 3/2*x1^2*x2^4 - 3/20*x2^6"),
    ],
    (2, 1): [
        (
            "x1^8*x2/7 + 26/15*x1^6*x2^3 - x1^4*x2^5",
            "1/2*x1^7*x2^2 + 1/2*x1^5*x2^4 - 1/2*x1^3*x2^6 - 3/70*x1*x2^8",
        ),
        (
            "x1^9/7 - 22/7*x1^7*x2^2 - x1^5*x2^4",
            "-25/6*x1^6*x2^3 + 9/2*x1^4*x2^5 - 51/14*x1^2*x2^7 + 9/14*x2^9",
        ),
    ],
}


def example_i26() -> list[Row]:
    group = build_group(Family.I2, (6,))
    fld = group.field
    rows = []
    for values, fields in I26_FIELDS.items():
        m = MultFn(values)
        degree = 3 * sum(values)
        arr = group_arrangement(group, m, 0)
        L = [Derivation(tuple(parse_poly(t, fld, 2) for t in pair)) for pair in fields]
        members = all(derivation_member(f, arr) for f in L)
        spans = spans_equal(fld, [phi.components for phi in vector_quasi_space(group, m, degree)], [f.components for f in L])
        cert = saito_check(arr, L)
        det_degree = cert.determinant.degree() if cert.determinant else None
        ok = members and spans and cert.passed and det_degree == 2 * degree
        rows.append(
            Row(
                f"L fields for m = ({m}) in degree {degree}",
                ok,
                f"members {members}, span {spans}, determinant degree {det_degree}",
            )
        )
    return rows


# -- B2 (2,1) and BC2 (1,1,1) -------------------------------------------------

B2_QUASI = {
    "p1": "3*x1^7 - 7*x1^5*x2^2",
    "q1": "5*x1^9 - 9*x1^7*x2^2",
}
B2_TRIG = {
    "p1'": "3*x1^7 - 7*x1^5*x2^2 - 14*x1^5 + 35*x1^3*x2^2 + 7*x1^3 - 28*x1*x2^2 + 4*x1",
    "q1'": (
        "5*x1^9 - 9*x1^7*x2^2 - 42*x1^7 + 63*x1^5*x2^2 + 105*x1^5"
        " - 126*x1^3*x2^2 - 68*x1^3 + 72*x1*x2^2"
    ),
}
BC2_TRIG = {
    "p~1": "3*x1^7 - 7*x1^5*x2^2 + 1/4*(-35*x1^5 + 35*x1^3*x2^2 + 28*x1^3 - 7*x1*x2^2 - 5*x1)",
    "q~1": (
        "5*x1^9 - 9*x1^7*x2^2 + 1/4*(-57*x1^7 - 7*x1^5*x2^2 + 49*x1^5"
        " + 56*x1^3*x2^2 - 13*x1^3 - 13*x1*x2^2 + x1)"
    ),
}


def example_bc2(cutoff: int = 9) -> list[Row]:
    group = build_group(Family.B, (2,))
    fld = group.field
    m = MultFn((2, 1))
    bc = BCMult(1, 1, 1)
    ctx = GroupContext.of(group)
    dm = group_arrangement(group, m, 1)
    rows = []

    for name, text in B2_QUASI.items():
        p = parse_poly(text, fld, 2)
        theta = _pair(p)
        ok = bool(is_quasi_invariant(group, p, m)) and bool(derivation_member(theta, dm))
        ok = ok and is_invariant_derivation(group, theta)
        ok = ok and in_span(fld, quasi_isotypic(group, m, int(p.degree())), p)
        rows.append(Row(f"{name} in Q_m, ({name}, swap) in D_m^W", ok))

    conds = trig_conditions(group, m)
    cat = catalan_arrangement(group, m)
    for name, text in B2_TRIG.items():
        p = parse_poly(text, fld, 2)
        ok = is_trig_quasi_invariant(p, conds) and delta_chain_check(p, (1, 0), 2, 0)
        ok = ok and bool(derivation_member(_pair(p), cat)) and is_invariant_derivation(group, _pair(p))
        rows.append(Row(f"{name} in Q^tr_m, ({name}, swap) in D(Cat)^W", ok))

    bc_conds = bc_conditions(fld, 2, bc)
    bccat = bc_catalan(2, bc, fld)
    scale, l, r = bc_delta_parameters(bc.m1, bc.m2)
    for name, text in BC2_TRIG.items():
        p = parse_poly(text, fld, 2)
        ok = is_trig_quasi_invariant(p, bc_conds) and delta_chain_check(p, (scale, Fraction(0)), l, r)
        ok = ok and bool(derivation_member(_pair(p), bccat))
        rows.append(Row(f"{name} in Q^tr(BC2), ({name}, swap) in D(BCCat)^W", ok))

    result = catalan_pipeline(ctx, m, cutoff)
    ok = result.affine.passed and result.coned.passed and result.coned.exponents == (1, 7, 9)
    rows.append(Row("cCat free with exponents (1, 7, 9)", ok, f"exponents {result.coned.exponents}"))

    result = bc_catalan_pipeline(ctx, bc, cutoff)
    tilde = free_basis_dm(ctx, bc.tilde(), cutoff)
    expected = tuple(sorted(tilde.exponents + (1,)))
    ok = result.coned.passed and tilde.passed and result.coned.exponents == expected == (1, 7, 9)
    rows.append(
        Row(
            "cBCCat free, exponents of D_m~(B2) together with 1",
            ok,
            f"cBCCat {result.coned.exponents}, D_m~ {tilde.exponents}",
        )
    )
    return rows


EXAMPLES: dict[str, tuple[str, Callable[[], list[Row]]]] = {
    "ex-g312": ("G(3,1,2), m = 1: quasi-invariants and both free bases", example_g312),
    "ex-i26": ("I2(6), m = (1,1) and (2,1): vector-valued generators", example_i26),
    "ex-bc2": ("B2 (2,1) and BC2 (1,1,1): trigonometric quasi-invariants and Catalan freeness", example_bc2),
}


def run_example(name: str) -> list[Row]:
    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    _, fn = EXAMPLES[name]
    rows = fn()
    logger.info("%s: %d/%d rows pass", name, sum(r.passed for r in rows), len(rows))
    return rows
