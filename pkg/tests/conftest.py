import sys
from pathlib import Path

import numpy as np
import pytest

SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from gedanken import make_grid  # noqa: E402


@pytest.fixture
def grid128():
    return make_grid(-10.0, 10.0, 128)


@pytest.fixture
def grid256():
    return make_grid(-10.0, 10.0, 256)


@pytest.fixture
def grid512():
    return make_grid(-16.0, 16.0, 512)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
