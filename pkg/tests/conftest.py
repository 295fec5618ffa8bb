import pytest

import tpspower as tp


@pytest.fixture(scope="session")
def system_for():
    """Memoized access to assembled systems; factorizations are reused freely."""
    cache = {}

    def get(n, gamma=2.0):
        key = (n, gamma)
        if key not in cache:
            cache[key] = tp.assemble_system(tp.KnotGrid(n), tp.BasisParam(gamma))
        return cache[key]

    return get
