import numpy as np
import pytest

from qubitcert.configs import ConfigSet


def random_config(rng: np.random.Generator) -> ConfigSet:
    """Uniformly random angle configuration (retrying the rare duplicate)."""
    while True:
        try:
            return ConfigSet(
                id="random",
                preparations=tuple(map(tuple, rng.uniform(0, 2 * np.pi, (5, 2)))),
                measurements=tuple(map(tuple, rng.uniform(0, 2 * np.pi, (4, 2)))),
            )
        except ValueError:
            continue


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
