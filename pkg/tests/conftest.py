import math

import pytest

import mbnsharp as m


@pytest.fixture(scope="session")
def freud2():
    return m.freud(2.0)


@pytest.fixture(scope="session")
def unw():
    return m.unweighted()


@pytest.fixture(scope="session")
def criterion4_sweeps():
    """Shared dyadic sweeps for the weighted convergence criterion (slow)."""
    w = m.freud(2.0)
    n_list = [25, 50, 100, 200]
    fams = [(2.0, 0), (2.0, 1), (math.inf, 0), (math.inf, 1)]
    return {(p, N): m.sweep(w, p, N, n_list) for (p, N) in fams}
