"""
quasiarr - quasi-invariants of complex reflection groups and the freeness of
the logarithmic derivation modules built from them.
"""

# Exact arithmetic
from .cyclotomic import CycScalar, CyclotomicField
from .polynomial import MPoly, parse_poly

# Groups and quasi-invariants
from .groups import BCMult, Family, MultFn, ReflectionGroupData, build_group, c_v
from .group_loader import resolve_group
from .quasi import GradedSubspace, is_quasi_invariant, quasi_isotypic, quasi_space, vector_quasi_space
from .trig import bc_trig_quasi_space, trig_quasi_space

# Derivations and certificates
from .logder import (
    Derivation,
    FreenessCertificate,
    GroupContext,
    MultiArrangement,
    free_basis_dm,
    free_basis_dtilde,
    saito_check,
)
from .catalan import bc_catalan, catalan_arrangement, cone
from .primitive import PrimitiveDerivation, basic_invariants

from .cli import main as cli_main
from .errors import QuasiArrError

__all__ = [
    # Exact arithmetic
    "CycScalar",
    "CyclotomicField",
    "MPoly",
    "parse_poly",
    # Groups and quasi-invariants
    "BCMult",
    "Family",
    "MultFn",
    "ReflectionGroupData",
    "build_group",
    "resolve_group",
    "c_v",
    "GradedSubspace",
    "is_quasi_invariant",
    "quasi_space",
    "quasi_isotypic",
    "vector_quasi_space",
    "trig_quasi_space",
    "bc_trig_quasi_space",
    # Derivations and certificates
    "Derivation",
    "MultiArrangement",
    "FreenessCertificate",
    "GroupContext",
    "saito_check",
    "free_basis_dm",
    "free_basis_dtilde",
    "catalan_arrangement",
    "bc_catalan",
    "cone",
    "PrimitiveDerivation",
    "basic_invariants",
    # CLI and errors
    "cli_main",
    "QuasiArrError",
]
