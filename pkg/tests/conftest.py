import numpy as np
import pytest

from gl3ff.bethe import SolveConfig, solve_bethe
from gl3ff.chain import ChainSpec


@pytest.fixture(scope="session")
def chain3():
    """Untwisted 3-site chain used for most golden checks."""
    return ChainSpec(3, (0.2 + 0.1j, -0.3 - 0.2j, 0.4 + 0.3j), 1.0)


@pytest.fixture(scope="session")
def chain3_twisted():
    return ChainSpec(
        3,
        (0.2 + 0.1j, -0.3 - 0.2j, 0.4 + 0.3j),
        1.0,
        twist=(1.3 + 0.2j, 1.0, 1.4 - 0.3j),
    )


@pytest.fixture(scope="session")
def chain2_homogeneous():
    return ChainSpec(2, (0.0, 0.0), 1.0)


@pytest.fixture(scope="session")
def solutions():
    """Session-cached Bethe solutions keyed by (spec, a, b)."""
    cache = {}

    def get(spec, a, b, n_seeds=90, stream=1):
        key = (spec, a, b)
        if key not in cache:
            cache[key] = solve_bethe(
                spec, a, b, SolveConfig(n_seeds=n_seeds), np.random.default_rng(stream)
            )
        return cache[key]

    return get
