import pytest

from discpack import PLANE, LevelSpec, build_hierarchy, build_packing


@pytest.fixture(scope="session")
def tree_small():
    return build_hierarchy(LevelSpec((3, 2)))


@pytest.fixture(scope="session")
def tree_medium():
    return build_hierarchy(LevelSpec((10, 6)))


@pytest.fixture(scope="session")
def tree_spec():
    """The four-level tree used by the heavier end-to-end checks."""
    return build_hierarchy(LevelSpec((60, 8, 4, 2)))


@pytest.fixture(scope="session")
def plane500():
    return build_packing(PLANE, 500)
