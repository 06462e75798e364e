import numpy as np
import pytest

import ewgame as ew


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def builtin_witnesses():
    return [
        ("werner", ew.werner_witness()),
        ("chsh", ew.fixed_chsh_witness()),
        ("chsh-strengthened", ew.strengthened_chsh_witness()),
    ]


@pytest.fixture(scope="session")
def separable_corpus():
    """10^4 random separable two-qubit states, shared across tests."""
    gen = np.random.default_rng(777)
    states = [ew.random_separable(gen, k=int(gen.integers(1, 5))) for _ in range(10_000)]
    return np.stack([s.matrix for s in states])
