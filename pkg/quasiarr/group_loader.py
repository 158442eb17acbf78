"""Group selection: family tags, description files and the JSON element cache."""

from __future__ import annotations

import json
import logging
import re
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import config
from .cyclotomic import CyclotomicField
from .errors import ParseError, UnsupportedGroupError
from .polynomial import parse_scalar

logger = logging.getLogger(__name__)

_CLASSICAL = re.compile(r"^([ABCD])(\d+)?$")
_DIHEDRAL = re.compile(r"^(I2C?)(?:[(_](\d+)\)?)?$")
_IMPRIMITIVE = re.compile(r"^G[(_]?(\d+)[,_](\d+)[,_](\d+)\)?$")


def parse_group_spec(spec: str, rank: int | None = None, k: int | None = None):
    """Resolve a family tag into ``(Family, params)``.

    Accepted forms: ``B2``, ``B`` with ``rank``, ``I2`` with ``k``, ``I2(6)``,
    ``I2C_6``, ``G3_1_2`` and ``G(3,1,2)``.
    """
    from .groups import Family

    text = spec.strip()
    m = _CLASSICAL.match(text)
    if m:
        n = int(m.group(2)) if m.group(2) else rank
        if n is None:
            raise UnsupportedGroupError(f"{text} needs a rank (use --rank)")
        return Family(m.group(1)), (n,)
    m = _DIHEDRAL.match(text)
    if m:
        order = int(m.group(2)) if m.group(2) else k
        if order is None:
            raise UnsupportedGroupError(f"{text} needs k (use --k)")
        return Family(m.group(1)), (order,)
    m = _IMPRIMITIVE.match(text)
    if m:
        return Family.G, tuple(int(g) for g in m.groups())
    raise UnsupportedGroupError(f"unrecognized group spec {spec!r}")


def resolve_group(spec: str, rank: int | None = None, k: int | None = None):
    """Family tag or path to a group description file."""
    from .groups import build_group

    path = Path(spec)
    if path.suffix in (".grp", ".txt") or path.is_file():
        return load_group_file(path)
    family, params = parse_group_spec(spec, rank=rank, k=k)
    return build_group(family, params)


def load_group_file(path: Path | str):
    """Read a group description file.

    Lines are ``key value`` pairs; ``#`` starts a comment::

        family custom
        conductor 6
        generator z^2, 0; 0, 1
        generator 0, 1; 1, 0

    A built-in family can be named instead (``family G`` / ``params 3,1,2``).
    Matrix entries use the scalar syntax of the polynomial parser, with ``z``
    the primitive root of unity of the conductor.
    """
    from .groups import Family, build_group, group_from_generators
    from .linalg import scalar_matrix

    path = Path(path)
    if not path.is_file():
        raise ParseError(f"group file not found: {path}")
    family = None
    params: tuple = ()
    conductor = None
    raw_gens: list[str] = []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition(" ")
        value = value.strip()
        if key == "family":
            family = value
        elif key == "params":
            params = tuple(int(v) for v in value.split(","))
        elif key == "conductor":
            conductor = int(value)
        elif key == "generator":
            raw_gens.append(value)
        else:
            raise ParseError(f"{path}:{lineno}: unknown key {key!r}")
    if family is None:
        raise ParseError(f"{path}: missing 'family' line")
    if family != Family.CUSTOM.value:
        return build_group(family, params)
    if conductor is None or not raw_gens:
        raise ParseError(f"{path}: a custom group needs 'conductor' and at least one 'generator'")
    field = CyclotomicField.of(conductor)
    gens = []
    for text in raw_gens:
        rows = [[parse_scalar(e, field) for e in row.split(",")] for row in text.split(";")]
        if any(len(r) != len(rows) for r in rows):
            raise ParseError(f"{path}: generator {text!r} is not square")
        gens.append(scalar_matrix(field, rows))
    if len({g.shape for g in gens}) != 1:
        raise ParseError(f"{path}: generators of different sizes")
    logger.info("loaded %d generators from %s", len(gens), path)
    return group_from_generators(field, gens, Family.CUSTOM, ())


# -- element cache -------------------------------------------------------------


def _cache_path(family, params: tuple, conductor: int) -> Path | None:
    if not config.settings.cache_dir:
        return None
    tag = "_".join(str(p) for p in params)
    return Path(config.settings.cache_dir) / f"{family.value}_{tag}_M{conductor}.json"


def store_elements(group) -> None:
    """Write the element table of a built-in group when a cache directory is set."""
    path = _cache_path(group.family, group.params, group.conductor)
    if path is None:
        return
    table = {
        "family": group.family.value,
        "params": list(group.params),
        "conductor": group.conductor,
        "elements": [
            [[[str(c) for c in mat[i, j].coeffs] for j in range(group.rank)] for i in range(group.rank)]
            for mat in group.elements
        ],
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(table, f)
    logger.debug("cached %d elements in %s", group.order, path)


def load_cached_elements(family, params: tuple, field: CyclotomicField) -> list[np.ndarray] | None:
    """Element table from the cache, or None when absent or unreadable."""
    from .cyclotomic import CycScalar

    path = _cache_path(family, params, field.conductor)
    if path is None or not path.is_file():
        return None
    try:
        with open(path) as f:
            table = json.load(f)
        if table["conductor"] != field.conductor:
            return None
        elements = []
        for rows in table["elements"]:
            n = len(rows)
            mat = np.empty((n, n), dtype=object)
            for i, row in enumerate(rows):
                for j, coeffs in enumerate(row):
                    mat[i, j] = CycScalar(field, tuple(Fraction(c) for c in coeffs))
            elements.append(mat)
    except (OSError, KeyError, ValueError) as exc:
        logger.warning("ignoring unreadable group cache %s: %s", path, exc)
        return None
    logger.debug("loaded %d cached elements from %s", len(elements), path)
    return elements
