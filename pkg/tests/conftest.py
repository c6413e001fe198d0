import random

import pytest
from syrupy.assertion import SnapshotAssertion

from submodular_bounds.config import Settings
from submodular_bounds.entropy import JointDistribution, distribution_from_dict

from tests.test_data.utils import C4_GRAPH, CORRELATED, TWO_BY_TWO, write_json


@pytest.fixture
def snapshot(snapshot: SnapshotAssertion) -> SnapshotAssertion:
    """Return the default Amber snapshot fixture."""
    return snapshot


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def settings() -> Settings:
    return Settings()


@pytest.fixture
def correlated() -> JointDistribution:
    """Three correlated bits with H(X1 X2 X3) strictly below the sum of the marginals."""
    return distribution_from_dict(CORRELATED)


@pytest.fixture
def c4_file(tmp_path) -> str:
    return write_json(tmp_path, "c4.json", C4_GRAPH)


@pytest.fixture
def matrix_file(tmp_path) -> str:
    return write_json(tmp_path, "matrix.json", TWO_BY_TWO)


@pytest.fixture
def distribution_file(tmp_path) -> str:
    return write_json(tmp_path, "pmf.json", CORRELATED)
