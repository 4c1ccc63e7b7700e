"""
Single-neuron physics: Pauli operators, the firing Hamiltonian and the
conditional U(2) rotations a neuron undergoes during the learning period.
"""
from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
from scipy.constants import hbar

from .errors import GuardError, InvalidParameterError
from .qcore import DenseOperator, MAX_DIM

log = logging.getLogger(__name__)

MAX_NEURONS = 12
AXIS_TOL = 1e-12

# tau that makes the firing energy quantum exactly one Joule
UNIT_TAU = 2.0 * np.pi * hbar

_SIGMA = {
    1: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    2: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    3: np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


@dataclass(frozen=True)
class FiringUnits:
    tau: float = UNIT_TAU

    def __post_init__(self):
        if not self.tau > 0:
            raise InvalidParameterError(f"firing period must be positive, got {self.tau}")

    @property
    def energy_quantum(self) -> float:
        return 2.0 * np.pi * hbar / self.tau

    @classmethod
    def unit_energy(cls) -> "FiringUnits":
        return cls(UNIT_TAU)


@dataclass(frozen=True)
class ConditionalU2Params:
    omega: float
    theta: float
    axis: Tuple[float, float, float]

    def __post_init__(self):
        axis = tuple(float(a) for a in self.axis)
        if len(axis) != 3:
            raise InvalidParameterError(f"rotation axis needs 3 components, got {len(axis)}")
        if abs(np.linalg.norm(axis) - 1.0) > AXIS_TOL:
            raise InvalidParameterError(f"rotation axis {axis} is not a unit vector")
        object.__setattr__(self, "axis", axis)

    @classmethod
    def identity(cls) -> "ConditionalU2Params":
        return cls(0.0, 0.0, (0.0, 0.0, 1.0))


def pauli(j: int) -> DenseOperator:
    if j not in _SIGMA:
        raise InvalidParameterError(f"Pauli index must be 1, 2 or 3, got {j}")
    return DenseOperator(_SIGMA[j])


def walsh_hadamard() -> DenseOperator:
    return DenseOperator((_SIGMA[1] + _SIGMA[3]) / np.sqrt(2.0))


def firing_hamiltonian(units: FiringUnits = FiringUnits()) -> DenseOperator:
    return DenseOperator(np.diag([0.0, units.energy_quantum]).astype(np.complex128))


def firing_counts(n: int) -> np.ndarray:
    """Number of firing neurons for every basis pattern of an n-neuron register."""
    idx = np.arange(1 << n)
    return np.array([bin(i).count("1") for i in idx], dtype=np.float64)


def network_hamiltonian(n: int, units: FiringUnits = FiringUnits()) -> DenseOperator:
    if n < 1:
        raise InvalidParameterError(f"need at least one neuron, got {n}")
    if n > MAX_NEURONS or (1 << n) > MAX_DIM:
        raise GuardError(f"{n} neurons exceed the {MAX_NEURONS}-neuron guard")
    return DenseOperator(np.diag(firing_counts(n) * units.energy_quantum).astype(np.complex128))


def rotation_matrix(p: ConditionalU2Params, fraction: float) -> np.ndarray:
    """Raw 2x2 array of rotation_u2; used in hot loops that skip the wrapper."""
    if not 0.0 <= fraction <= 1.0:
        raise InvalidParameterError(f"fraction must lie in [0, 1], got {fraction}")
    half = 0.5 * p.theta * fraction
    generator = sum(u * _SIGMA[j] for j, u in zip((1, 2, 3), p.axis))
    phase = np.exp(0.5j * p.omega * fraction)
    return phase * (np.cos(half) * np.eye(2) - 1j * np.sin(half) * generator)


def rotation_u2(p: ConditionalU2Params, fraction: float = 1.0) -> DenseOperator:
    return DenseOperator(rotation_matrix(p, fraction))


def boolean_gate_params(f_value: int) -> ConditionalU2Params:
    """Parameters whose full-period rotation sends |+> to |f_value>."""
    if f_value not in (0, 1):
        raise InvalidParameterError(f"Boolean value must be 0 or 1, got {f_value!r}")
    f = int(f_value)
    c = (1 - f) / np.sqrt(2.0)
    return ConditionalU2Params(
        omega=(1 - f) * np.pi,
        theta=(2 - f) * np.pi / 2.0,
        axis=(c, float(f), c),
    )


def convergence_distance(p: ConditionalU2Params, f_value: int,
                         fractions: Iterable[float]) -> np.ndarray:
    """||U(fraction)|+> - |f>|| for each fraction; traces out learning convergence."""
    plus = np.full(2, 1.0 / np.sqrt(2.0), dtype=np.complex128)
    target = np.zeros(2, dtype=np.complex128)
    target[int(f_value)] = 1.0
    return np.array([np.linalg.norm(rotation_matrix(p, fr) @ plus - target) for fr in fractions])


def lift_to_register(op: np.ndarray, k: int, n: int) -> np.ndarray:
    """Raw-array counterpart of qcore.embed_single."""
    return np.kron(np.kron(np.eye(1 << (k - 1)), op), np.eye(1 << (n - k)))


def summed_firing_hamiltonian(n: int, units: FiringUnits = FiringUnits()) -> DenseOperator:
    """Sum of per-neuron firing Hamiltonians lifted to the register."""
    h = firing_hamiltonian(units).entries
    total = sum(lift_to_register(h, k, n) for k in range(1, n + 1))
    return DenseOperator(total)

