import numpy as np
import pytest

from totient_lab.census import build_census
from totient_lab.constants import compute_bundle


@pytest.fixture(scope="session")
def census_phi_1e4():
    return build_census("phi", 10**4)


@pytest.fixture(scope="session")
def census_phi_1e5():
    return build_census("phi", 10**5)


@pytest.fixture(scope="session")
def census_sigma_1e3():
    return build_census("sigma", 10**3)


@pytest.fixture(scope="session")
def bundle():
    return compute_bundle(25, 300)


@pytest.fixture(scope="session")
def phi_table_1e5():
    """Classic in-place totient sieve, structurally independent of the
    package's segmented engine; the reference oracle for small ranges."""
    n = 10**5
    ph = np.arange(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if ph[p] == p:
            ph[p::p] -= ph[p::p] // p
    return ph
