from __future__ import annotations

import numpy as np
import pytest

from quann.dynamics.envdyn import build_coupling
from quann.network.architecture import distinct_operator_set, example_network


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture(scope="session")
def example_arch():
    return example_network()


@pytest.fixture(scope="session")
def example_opset(example_arch):
    return distinct_operator_set(example_arch)


@pytest.fixture(scope="session")
def example_coupling(example_opset):
    return build_coupling(example_opset)


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    """Run inside tmp_path so logs/ and runs/ land there."""
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture
def random_amps(rng):
    """Callable giving normalized random complex amplitudes for n qubits."""
    def make(n: int) -> np.ndarray:
        amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        return amps / np.linalg.norm(amps)
    return make
