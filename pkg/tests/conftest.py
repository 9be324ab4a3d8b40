import pytest

from dynball import build_denjoy


@pytest.fixture(scope="session")
def denjoy_c():
    # shared across files: the construction is deterministic and takes
    # a noticeable fraction of a second to build
    return build_denjoy(N=64)
