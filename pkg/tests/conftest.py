import pytest

from promiselab.oracle import ProblemInstance


@pytest.fixture
def inst():
    def make(n, y=0, p=0.5):
        return ProblemInstance(n, y, p)

    return make
