import numpy as np
import pytest

from quasiarr import config
from quasiarr.cyclotomic import CyclotomicField
from quasiarr.groups import Family, build_group
from quasiarr.logder import GroupContext
from quasiarr.polynomial import MPoly, monomials_of_degree

SEED = 20240611


@pytest.fixture(autouse=True)
def _single_thread():
    """Every test starts sequential and without a group cache."""
    saved = (config.settings.threads, config.settings.cache_dir)
    config.settings.threads = 1
    config.settings.cache_dir = None
    yield
    config.settings.threads, config.settings.cache_dir = saved


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture(scope="session")
def q():
    return CyclotomicField.of(2)


@pytest.fixture(scope="session")
def a2():
    return build_group(Family.A, (2,))


@pytest.fixture(scope="session")
def a3():
    return build_group(Family.A, (3,))


@pytest.fixture(scope="session")
def b2():
    return build_group(Family.B, (2,))


@pytest.fixture(scope="session")
def g312():
    return build_group(Family.G, (3, 1, 2))


@pytest.fixture(scope="session")
def i26():
    return build_group(Family.I2, (6,))


@pytest.fixture(scope="session")
def i2c6():
    return build_group(Family.I2C, (6,))


@pytest.fixture(scope="session")
def ctx_b2(b2):
    return GroupContext.of(b2)


@pytest.fixture(scope="session")
def ctx_g312(g312):
    return GroupContext.of(g312)


def random_poly(rng, field, nvars: int, degree: int, terms: int = 4, low: int = -3, high: int = 4) -> MPoly:
    """Homogeneous polynomial with a few small integer coefficients."""
    monos = monomials_of_degree(nvars, degree)
    picks = rng.choice(len(monos), size=min(terms, len(monos)), replace=False)
    out = MPoly(field, nvars)
    for idx in picks:
        out = out + MPoly.monomial(field, monos[idx], int(rng.integers(low, high)))
    return out


def random_combination(rng, field, basis: list[MPoly], low: int = -3, high: int = 4) -> MPoly:
    out = MPoly(field, basis[0].nvars)
    for p in basis:
        out = out + p.scale(int(rng.integers(low, high)))
    return out
