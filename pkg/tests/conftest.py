import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hitchinlab import make_torus_grid


@pytest.fixture(scope="session")
def grid8():
    return make_torus_grid(8, 1.0)


@pytest.fixture(scope="session")
def grid6():
    return make_torus_grid(6, 1.0)


@pytest.fixture(scope="session")
def grid4():
    return make_torus_grid(4, 1.0)
