import pytest

from formlab.harmonic import BasisCache


@pytest.fixture(scope="session")
def cache():
    """Shared in-memory basis cache; nullspace computations are the
    expensive part of the spectral tests."""
    return BasisCache()
