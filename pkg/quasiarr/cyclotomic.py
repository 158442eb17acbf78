"""
Exact arithmetic in cyclotomic fields Q(ζ_M).

Elements are stored in the power basis 1, ζ, …, ζ^{φ(M)-1} and kept reduced
modulo the M-th cyclotomic polynomial.  A field object is created once per
conductor (``CyclotomicField.of``) and carries the reduction table of all
powers ζ^k, 0 ≤ k < M, so multiplication never needs polynomial division.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

from sympy import Poly, Symbol, cyclotomic_poly, totient

from .errors import ConductorMismatchError

_X = Symbol("x")


class CyclotomicField:
    """The field Q(ζ_M) with ζ = exp(2πi/M)."""

    def __init__(self, conductor: int):
        if conductor < 1:
            raise ValueError(f"conductor must be positive, got {conductor}")
        self.conductor = conductor
        self.degree = int(totient(conductor))
        # Φ_M is monic: ζ^φ = -(c_0 + c_1 ζ + … + c_{φ-1} ζ^{φ-1})
        coeffs = Poly(cyclotomic_poly(conductor, _X), _X).all_coeffs()
        low = [int(c) for c in reversed(coeffs)][: self.degree]

        powers = []
        vec = [0] * self.degree
        vec[0] = 1
        for _ in range(conductor):
            powers.append(tuple(Fraction(v) for v in vec))
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                vec = [v - top * c for v, c in zip(vec, low)]
        self.powers: tuple[tuple[Fraction, ...], ...] = tuple(powers)
        self.zero = CycScalar(self, (Fraction(0),) * self.degree)
        self.one = CycScalar(self, self.powers[0])

    @staticmethod
    @lru_cache(maxsize=None)
    def of(conductor: int) -> CyclotomicField:
        return CyclotomicField(conductor)

    def __repr__(self) -> str:
        return f"CyclotomicField({self.conductor})"

    def __reduce__(self):
        return (CyclotomicField.of, (self.conductor,))

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def root(self, k: int = 1) -> CycScalar:
        """ζ^k for any integer k."""
        return CycScalar(self, self.powers[k % self.conductor])

    def root_of_unity(self, order: int, k: int = 1) -> CycScalar:
        """exp(2πik/order); ``order`` must divide the conductor."""
        if self.conductor % order:
            raise ConductorMismatchError(
                f"a primitive {order}-th root of unity is not in Q(ζ_{self.conductor})"
            )
        return self.root(k * (self.conductor // order))

    def __call__(self, value) -> CycScalar:
        """Coerce an int, Fraction or CycScalar of this field."""
        if isinstance(value, CycScalar):
            if value.field.conductor != self.conductor:
                raise ConductorMismatchError(
                    f"conductor {value.field.conductor} != {self.conductor}"
                )
            return value
        if isinstance(value, (int, Rational)):
            coeffs = [Fraction(0)] * self.degree
            coeffs[0] = Fraction(value)
            return CycScalar(self, tuple(coeffs))
        raise TypeError(f"cannot coerce {type(value).__name__} into {self!r}")

    def from_coeffs(self, coeffs) -> CycScalar:
        """Element with the given power-basis coordinates (any length, reduced here)."""
        acc = [Fraction(0)] * self.degree
        for k, c in enumerate(coeffs):
            c = Fraction(c)
            if c:
                for i, p in enumerate(self.powers[k % self.conductor]):
                    if p:
                        acc[i] += c * p
        return CycScalar(self, tuple(acc))


class CycScalar:
    """Element of Q(ζ_M), immutable."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: CyclotomicField, coeffs: tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    # -- coercion --------------------------------------------------------------

    def _coerce(self, other) -> CycScalar | None:
        if isinstance(other, CycScalar):
            if other.field.conductor != self.field.conductor:
                raise ConductorMismatchError(
                    f"cannot combine Q(ζ_{self.field.conductor}) with Q(ζ_{other.field.conductor})"
                )
            return other
        if isinstance(other, (int, Rational)):
            return self.field(other)
        return None

    # -- predicates ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, CycScalar):
            return self.field.conductor == other.field.conductor and self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field.conductor, self.coeffs))

    # -- ring operations -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycScalar(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> CycScalar:
        return CycScalar(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycScalar(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        field = self.field
        phi = field.degree
        if phi == 1:
            return CycScalar(field, (self.coeffs[0] * other.coeffs[0],))
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        result = prod[:phi]
        for k in range(phi, 2 * phi - 1):
            c = prod[k]
            if c:
                for i, p in enumerate(field.powers[k % field.conductor]):
                    if p:
                        result[i] += c * p
        return CycScalar(field, tuple(result))

    __rmul__ = __mul__

    def inverse(self) -> CycScalar:
        if self.is_zero():
            raise ZeroDivisionError("division by zero in a cyclotomic field")
        field = self.field
        phi = field.degree
        if phi == 1:
            return CycScalar(field, (1 / self.coeffs[0],))
        # column j of the multiplication matrix is self * ζ^j
        cols = [(self * field.root(j)).coeffs for j in range(phi)]
        rows = [[cols[j][i] for j in range(phi)] + [Fraction(int(i == 0))] for i in range(phi)]
        for c in range(phi):
            piv = next(r for r in range(c, phi) if rows[r][c])
            rows[c], rows[piv] = rows[piv], rows[c]
            inv = 1 / rows[c][c]
            rows[c] = [v * inv for v in rows[c]]
            for r in range(phi):
                if r != c and rows[r][c]:
                    f = rows[r][c]
                    rows[r] = [v - f * w for v, w in zip(rows[r], rows[c])]
        return CycScalar(field, tuple(rows[i][phi] for i in range(phi)))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_rational():
            q = other.coeffs[0]
            if not q:
                raise ZeroDivisionError("division by zero in a cyclotomic field")
            return CycScalar(self.field, tuple(a / q for a in self.coeffs))
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int) -> CycScalar:
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> CycScalar:
        """Complex conjugate, ζ ↦ ζ^{-1}."""
        field = self.field
        if field.degree == 1:
            return self
        acc = field.zero
        for k, c in enumerate(self.coeffs):
            if c:
                acc = acc + field.root(-k) * c
        return acc

    # -- text ------------------------------------------------------------------

    def to_text(self) -> str:
        """Canonical text: a rational, or ``(a0 + a1*z + …)/d`` with z = ζ_M."""
        if self.is_rational():
            return str(self.coeffs[0])
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        parts = []
        for k, c in enumerate(self.coeffs):
            n = int(c * den)
            if not n:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono:
                body = mono if abs(n) == 1 else f"{abs(n)}*{mono}"
            else:
                body = str(abs(n))
            if not parts:
                parts.append(body if n > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if n > 0 else f" - {body}")
        text = "(" + "".join(parts) + ")"
        return text if den == 1 else f"{text}/{den}"

    __str__ = to_text

    def __repr__(self) -> str:
        return f"CycScalar(M={self.field.conductor}, {self.to_text()})"
