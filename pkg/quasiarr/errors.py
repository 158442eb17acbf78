"""Exception hierarchy and non-exceptional failure results."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class QuasiArrError(Exception):
    """Base class for every error raised by quasiarr."""


class ConductorMismatchError(QuasiArrError, ValueError):
    """Scalars from two different cyclotomic fields were combined."""


class DimensionMismatchError(QuasiArrError, ValueError):
    """Variable counts or matrix shapes do not agree."""


class UnsupportedGroupError(QuasiArrError, ValueError):
    """Family tag or parameters outside the supported range."""


class GroupOrderExceededError(QuasiArrError, RuntimeError):
    """Closure from the generators grew past the configured order cap."""


class MembershipError(QuasiArrError, AssertionError):
    """A transported object failed the membership it is guaranteed to have."""


class PrimitiveDerivationError(QuasiArrError, RuntimeError):
    """The primitive derivation is undefined or a graded solve failed."""


class DeltaChainError(QuasiArrError, ArithmeticError):
    """An intermediate division in the delta chain was not exact."""


class ParseError(QuasiArrError, ValueError):
    """Malformed polynomial, scalar or group description text."""


@dataclass(frozen=True)
class NotDivisible:
    """Result of a failed division by a power of a linear form.

    ``max_exponent`` is the largest j below the requested power with α^j | p.
    """

    max_exponent: int

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class NotPolynomial:
    """Result of a failed exact division; carries the nonzero remainder."""

    remainder: Any

    def __bool__(self) -> bool:
        return False
