"""
Sparse multivariate polynomials over a cyclotomic field.

An ``MPoly`` maps exponent tuples to nonzero ``CycScalar`` coefficients.
Values are treated as immutable: every operation returns a new polynomial.
Terms are printed in graded-lex order (highest total degree first), which is
also the order used for leading terms in ``divmod``.
"""

from __future__ import annotations

import re
from collections.abc import Sequence
from numbers import Rational

from .cyclotomic import CycScalar, CyclotomicField
from .errors import DimensionMismatchError, NotDivisible, NotPolynomial, ParseError

Exps = tuple[int, ...]

NEG_INF = float("-inf")


def grlex_key(exps: Exps) -> tuple[int, Exps]:
    return (sum(exps), exps)


def monomials_of_degree(nvars: int, degree: int) -> list[Exps]:
    """All exponent tuples of total degree ``degree``, x1^d first (lex descending)."""
    if degree < 0:
        return []
    if nvars == 0:
        return [()] if degree == 0 else []
    if nvars == 1:
        return [(degree,)]
    out = []
    for a in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - a):
            out.append((a,) + rest)
    return out


def monomials_up_to(nvars: int, degree: int) -> list[Exps]:
    """Exponent tuples of degree ≤ ``degree`` in ascending degree."""
    out = []
    for d in range(degree + 1):
        out.extend(monomials_of_degree(nvars, d))
    return out


def _mul_terms(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e)
            out[e] = ca * cb if v is None else v + ca * cb
    return {e: c for e, c in out.items() if c}


class MPoly:
    """Polynomial in ``nvars`` variables with coefficients in ``field``."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: CyclotomicField, nvars: int, terms: dict | None = None):
        self.field = field
        self.nvars = nvars
        if terms:
            self.terms: dict[Exps, CycScalar] = {e: c for e, c in terms.items() if c}
        else:
            self.terms = {}

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, field: CyclotomicField, nvars: int) -> MPoly:
        return cls(field, nvars)

    @classmethod
    def constant(cls, field: CyclotomicField, nvars: int, value) -> MPoly:
        return cls(field, nvars, {(0,) * nvars: field(value)})

    @classmethod
    def var(cls, field: CyclotomicField, nvars: int, index: int) -> MPoly:
        """The coordinate x_{index+1} (``index`` is 0-based)."""
        exps = [0] * nvars
        exps[index] = 1
        return cls(field, nvars, {tuple(exps): field.one})

    @classmethod
    def monomial(cls, field: CyclotomicField, exps: Sequence[int], coeff=1) -> MPoly:
        return cls(field, len(exps), {tuple(exps): field(coeff)})

    @classmethod
    def linear(cls, field: CyclotomicField, coeffs: Sequence, const=0) -> MPoly:
        """Σ coeffs[i]·x_{i+1} + const."""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            c = field(c)
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        const = field(const)
        if const:
            terms[(0,) * n] = const
        return cls(field, n, terms)

    # -- basic queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int | float:
        """Total degree; the zero polynomial has degree -inf."""
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def low_degree(self) -> int | float:
        if not self.terms:
            return NEG_INF
        return min(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> CycScalar:
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def coeff(self, exps: Sequence[int]) -> CycScalar:
        return self.terms.get(tuple(exps), self.field.zero)

    def sorted_terms(self) -> list[tuple[Exps, CycScalar]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Exps, CycScalar]:
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def homogeneous_part(self, degree: int) -> MPoly:
        return MPoly(self.field, self.nvars, {e: c for e, c in self.terms.items() if sum(e) == degree})

    def top_form(self) -> MPoly:
        """Highest-degree homogeneous component (zero stays zero)."""
        if not self.terms:
            return self
        return self.homogeneous_part(self.degree())

    def coeff_vector(self, monomials: Sequence[Exps]) -> list[CycScalar]:
        zero = self.field.zero
        return [self.terms.get(e, zero) for e in monomials]

    @classmethod
    def from_vector(cls, field: CyclotomicField, nvars: int, monomials: Sequence[Exps], vector) -> MPoly:
        return cls(field, nvars, {e: field(c) for e, c in zip(monomials, vector) if c})

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other: MPoly) -> None:
        if other.nvars != self.nvars:
            raise DimensionMismatchError(f"{self.nvars} vs {other.nvars} variables")

    def _lift(self, other) -> MPoly | None:
        if isinstance(other, MPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Rational, CycScalar)):
            return MPoly.constant(self.field, self.nvars, other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e)
            terms[e] = c if v is None else v + c
        return MPoly(self.field, self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> MPoly:
        return MPoly(self.field, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> MPoly:
        c = self.field(c)
        if not c:
            return MPoly(self.field, self.nvars)
        return MPoly(self.field, self.nvars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Rational, CycScalar)):
            return self.scale(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        return MPoly(self.field, self.nvars, _mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational, CycScalar)):
            return self.scale(1 / self.field(other))
        return NotImplemented

    def __pow__(self, n: int) -> MPoly:
        if n < 0:
            raise ValueError("negative powers of polynomials are not polynomials")
        result = MPoly.constant(self.field, self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Rational, CycScalar)):
            return self == MPoly.constant(self.field, self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def map_coeffs(self, fn) -> MPoly:
        return MPoly(self.field, self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def permute(self, perm: Sequence[int]) -> MPoly:
        """Rename x_{i+1} to x_{perm[i]+1}."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * self.nvars
            for i, a in enumerate(e):
                ne[perm[i]] = a
            out[tuple(ne)] = c
        return MPoly(self.field, self.nvars, out)

    # -- substitution ----------------------------------------------------------

    def substitute(self, images: Sequence[MPoly]) -> MPoly:
        """Replace x_{i+1} by ``images[i]`` (all images share one variable count)."""
        if len(images) != self.nvars:
            raise DimensionMismatchError(f"need {self.nvars} images, got {len(images)}")
        if self.nvars == 0:
            target = 0
        else:
            target = images[0].nvars
        field = self.field
        powers: list[list[dict]] = [[{(0,) * target: field.one}] for _ in images]
        out: dict = {}
        for e, c in self.terms.items():
            acc = {(0,) * target: c}
            for i, a in enumerate(e):
                if not a:
                    continue
                cache = powers[i]
                while len(cache) <= a:
                    cache.append(_mul_terms(cache[-1], images[i].terms))
                acc = _mul_terms(acc, cache[a])
                if not acc:
                    break
            for ne, nc in acc.items():
                v = out.get(ne)
                out[ne] = nc if v is None else v + nc
        return MPoly(field, target, out)

    def subst_linear(self, matrix, shift: Sequence | None = None) -> MPoly:
        """p(Tx + t): x_i ↦ Σ_j T[i][j]·x_j + t_i."""
        rows = [list(r) for r in matrix]
        if len(rows) != self.nvars:
            raise DimensionMismatchError(f"matrix has {len(rows)} rows, polynomial has {self.nvars} variables")
        if shift is not None and len(shift) != self.nvars:
            raise DimensionMismatchError("translation vector has the wrong length")
        images = [
            MPoly.linear(self.field, row, 0 if shift is None else shift[i])
            for i, row in enumerate(rows)
        ]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatchError("ragged substitution matrix")
        return self.substitute(images)

    def translate(self, shift: Sequence) -> MPoly:
        """p(x + t)."""
        n = self.nvars
        identity = [[int(i == j) for j in range(n)] for i in range(n)]
        return self.subst_linear(identity, shift)

    def evaluate_var(self, index: int, value, drop: bool = True) -> MPoly:
        """Set x_{index+1} = value; the variable is removed when ``drop``."""
        value = self.field(value)
        out: dict = {}
        for e, c in self.terms.items():
            a = e[index]
            coeff = c * value**a if a else c
            ne = e[:index] + e[index + 1:] if drop else e[:index] + (0,) + e[index + 1:]
            v = out.get(ne)
            out[ne] = coeff if v is None else v + coeff
        return MPoly(self.field, self.nvars - 1 if drop else self.nvars, out)

    def add_variables(self, count: int = 1) -> MPoly:
        """Same polynomial viewed in ``nvars + count`` variables (new ones last)."""
        pad = (0,) * count
        return MPoly(self.field, self.nvars + count, {e + pad: c for e, c in self.terms.items()})

    def homogenize(self, degree: int | None = None) -> MPoly:
        """z^degree · p(x/z) with z appended as the last variable."""
        if degree is None:
            degree = self.degree() if self.terms else 0
        out = {}
        for e, c in self.terms.items():
            d = sum(e)
            if d > degree:
                raise ValueError(f"term of degree {d} exceeds homogenization degree {degree}")
            out[e + (degree - d,)] = c
        return MPoly(self.field, self.nvars + 1, out)

    # -- calculus --------------------------------------------------------------

    def diff(self, index: int, times: int = 1) -> MPoly:
        out = {}
        for e, c in self.terms.items():
            a = e[index]
            if a < times:
                continue
            f = 1
            for k in range(times):
                f *= a - k
            ne = e[:index] + (a - times,) + e[index + 1:]
            out[ne] = c * f
        return MPoly(self.field, self.nvars, out)

    def partial(self, direction: Sequence) -> MPoly:
        """Directional derivative Σ d_i ∂p/∂x_i."""
        if len(direction) != self.nvars:
            raise DimensionMismatchError("direction vector has the wrong length")
        acc = MPoly(self.field, self.nvars)
        for i, d in enumerate(direction):
            d = self.field(d)
            if d:
                acc = acc + self.diff(i).scale(d)
        return acc

    def antiderivative(self, index: int) -> MPoly:
        out = {}
        for e, c in self.terms.items():
            a = e[index]
            out[e[:index] + (a + 1,) + e[index + 1:]] = c / (a + 1)
        return MPoly(self.field, self.nvars, out)

    # -- division --------------------------------------------------------------

    def divmod(self, divisor: MPoly) -> tuple[MPoly, MPoly]:
        """Multivariate division by one polynomial with graded-lex leading terms."""
        self._check(divisor)
        if not divisor.terms:
            raise ZeroDivisionError("polynomial division by zero")
        lead_e, lead_c = divisor.leading_term()
        inv_lead = lead_c.inverse()
        rest = dict(self.terms)
        quot: dict = {}
        rem: dict = {}
        while rest:
            e = max(rest, key=grlex_key)
            c = rest[e]
            if all(a >= b for a, b in zip(e, lead_e)):
                qe = tuple(a - b for a, b in zip(e, lead_e))
                qc = c * inv_lead
                quot[qe] = qc
                for ge, gc in divisor.terms.items():
                    ne = tuple(a + b for a, b in zip(ge, qe))
                    v = rest.get(ne, self.field.zero) - qc * gc
                    if v:
                        rest[ne] = v
                    else:
                        rest.pop(ne, None)
            else:
                rem[e] = c
                del rest[e]
        return MPoly(self.field, self.nvars, quot), MPoly(self.field, self.nvars, rem)

    def exact_divide(self, divisor: MPoly) -> MPoly | NotPolynomial:
        quot, rem = self.divmod(divisor)
        if rem.terms:
            return NotPolynomial(rem)
        return quot

    def div_linear_power(self, alpha: MPoly, k: int) -> MPoly | NotDivisible:
        """Quotient q with p = α^k·q, or NotDivisible(largest j < k with α^j | p).

        α may be affine.  The test runs in coordinates where α is the variable
        y_{i0}: p is divisible exactly when no term has y_{i0}-degree below k.
        """
        frame = AlphaFrame(alpha)
        if not self.terms:
            return self
        image = frame.to_frame(self)
        low = min(e[frame.index] for e in image.terms)
        if low < k:
            return NotDivisible(low)
        i0 = frame.index
        shifted = {e[:i0] + (e[i0] - k,) + e[i0 + 1:]: c for e, c in image.terms.items()}
        quot = frame.from_frame(MPoly(self.field, self.nvars, shifted))
        return quot.scale(1 / frame.scale**k)

    # -- text ------------------------------------------------------------------

    def to_text(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if a == 1 else f"{names[i]}^{a}" for i, a in enumerate(e) if a
            )
            if c.is_rational():
                q = c.coeffs[0]
                neg = q < 0
                q = abs(q)
                if not mono:
                    body = str(q)
                elif q == 1:
                    body = mono
                else:
                    body = f"{q}*{mono}"
            else:
                neg = False
                body = c.to_text() if not mono else f"{c.to_text()}*{mono}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"MPoly({self.to_text()})"


class AlphaFrame:
    """Coordinates in which a (possibly affine) form α becomes a variable.

    With α normalized so its first nonzero linear coefficient (index i0) is 1,
    y_{i0} = α(x) and y_i = x_i otherwise.
    """

    def __init__(self, alpha: MPoly):
        linear = [alpha.coeff(tuple(int(i == j) for j in range(alpha.nvars))) for i in range(alpha.nvars)]
        if alpha.degree() > 1 or not any(linear):
            raise ValueError(f"not a nonzero linear form: {alpha}")
        self.index = next(i for i, c in enumerate(linear) if c)
        self.scale = linear[self.index]
        inv = 1 / self.scale
        self.linear = [c * inv for c in linear]
        self.const = alpha.constant_value() * inv
        field, n, i0 = alpha.field, alpha.nvars, self.index
        self._to = []
        self._from = []
        for i in range(n):
            if i == i0:
                coeffs = [-c if j != i0 else field.one for j, c in enumerate(self.linear)]
                self._to.append(MPoly.linear(field, coeffs, -self.const))
                self._from.append(MPoly.linear(field, self.linear, self.const))
            else:
                self._to.append(MPoly.var(field, n, i))
                self._from.append(MPoly.var(field, n, i))

    @property
    def normalized(self) -> MPoly:
        return self._from[self.index]

    def to_frame(self, p: MPoly) -> MPoly:
        return p.substitute(self._to)

    def from_frame(self, p: MPoly) -> MPoly:
        return p.substitute(self._from)


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        tokens.append(m.group(m.lastindex))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


class _Parser:
    def __init__(self, text: str, field: CyclotomicField, nvars: int, names: Sequence[str] | None):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.field = field
        self.nvars = nvars
        names = list(names) if names is not None else [f"x{i + 1}" for i in range(nvars)]
        self.names = {name: i for i, name in enumerate(names)}

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.pos += 1
        return tok

    def parse(self) -> MPoly:
        p = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input at token {self.peek()!r}")
        return p

    def expr(self) -> MPoly:
        p = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> MPoly:
        p = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or not q.terms:
                    raise ParseError("division is only allowed by nonzero constants")
                p = p / q.constant_value()
        return p

    def unary(self) -> MPoly:
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> MPoly:
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            tok = self.take()
            if not tok.isdigit():
                raise ParseError(f"exponent must be a nonnegative integer, got {tok!r}")
            base = base ** int(tok)
        return base

    def atom(self) -> MPoly:
        tok = self.take()
        if tok == "(":
            p = self.expr()
            if self.take() != ")":
                raise ParseError("missing closing parenthesis")
            return p
        if tok.isdigit():
            return MPoly.constant(self.field, self.nvars, int(tok))
        if tok in self.names:
            return MPoly.var(self.field, self.nvars, self.names[tok])
        if tok == "z":
            return MPoly.constant(self.field, self.nvars, self.field.root(1))
        raise ParseError(f"unknown symbol {tok!r}")


def parse_poly(text: str, field: CyclotomicField, nvars: int, names: Sequence[str] | None = None) -> MPoly:
    """Parse the canonical text form (also accepts ``**`` and parentheses)."""
    return _Parser(text, field, nvars, names).parse()


def parse_scalar(text: str, field: CyclotomicField) -> CycScalar:
    p = parse_poly(text, field, 0)
    return p.constant_value()
