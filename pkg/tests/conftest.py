from pathlib import Path

import pytest

from helpers import make_d7

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture
def d7():
    """Letter-labeled golden fixture database (7 sequences over a..d)."""
    return make_d7()


@pytest.fixture
def d7_path() -> Path:
    """The in-repo SPMF copy of the fixture (labels 1..4 for a..d)."""
    return REPO_ROOT / "data" / "d7.spmf"
