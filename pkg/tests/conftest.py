import pytest

from terravis.geometry import make_viewpoints, validate_terrain


@pytest.fixture
def flat():
    """Four collinear vertices on the x-axis."""
    return validate_terrain([(0, 0), (4, 0), (6, 0), (10, 0)])


@pytest.fixture
def peak():
    """Symmetric tent: everything visible from the apex."""
    return validate_terrain([(0, 0), (5, 5), (10, 0)])


@pytest.fixture
def two_peak():
    """Two tents with a blind valley between them."""
    return validate_terrain([(0, 0), (1, 2), (2, 0), (3, 2), (4, 0)])


def vps(terrain, *indices):
    return make_viewpoints(terrain, indices)
