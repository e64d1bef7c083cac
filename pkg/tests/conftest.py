import pytest
from hypothesis import settings

from qmop import Params, PrecisionConfig

settings.register_profile("mp", deadline=None, max_examples=20)
settings.load_profile("mp")


@pytest.fixture(scope="session")
def params():
    return Params(q="0.7", alpha="0.4", beta="0.6")


@pytest.fixture(scope="session")
def cfg():
    return PrecisionConfig(digits=60, guard=40)
