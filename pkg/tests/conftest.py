import hypothesis
import numpy as np
import pytest

from qvstrain.oracles import OracleHandle, TruthTable

hypothesis.settings.register_profile(
    "default", deadline=None, max_examples=50, derandomize=True
)
hypothesis.settings.load_profile("default")

# 4x3 fixture used throughout: third column all ones, so g = (0, 0, 1) and
# the column sums are (1, 3, 4).
FIXTURE_BITS = np.array(
    [
        [0, 1, 1],
        [0, 1, 1],
        [0, 0, 1],
        [1, 1, 1],
    ],
    dtype=np.uint8,
)


@pytest.fixture
def fixture_table() -> TruthTable:
    return TruthTable(FIXTURE_BITS.copy())


@pytest.fixture
def fixture_handle(fixture_table) -> OracleHandle:
    return OracleHandle(fixture_table)


def random_state_amps(rng, num_qubits: int) -> np.ndarray:
    amps = rng.standard_normal(1 << num_qubits) + 1j * rng.standard_normal(1 << num_qubits)
    return amps / np.linalg.norm(amps)
