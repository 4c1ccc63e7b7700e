"""
Network dynamics driven by an environment.

Each environment eigenstate selects one activation ordering of the network
(one member of the operator set), so the joint unitary is block diagonal:
U_Net = sum_k |e_k><e_k| (x) L_k. Tensor order is environment (x) network.

Two evaluation paths give the same mean firing energy series:
  * the density path iterates the full joint density operator;
  * the pure-branch path evolves one network state per environment
    eigenstate and averages, valid while the environment starts diagonal.
"""
from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag

from ..errors import DimensionError, InvalidParameterError, NetworkDefinitionError, NumericalError
from ..network.architecture import OperatorSet, permutation_label
from ..neuron import FiringUnits, firing_counts, pauli
from ..qcore import DenseOperator, DensityOperator, trace_product

log = logging.getLogger(__name__)

# the p used for every reference run of the three-neuron network
REFERENCE_P = 0.8918547337153693

TRACE_ABORT = 1e-6
BOUND_TOL = 1e-9
WEIGHT_TOL = 1e-12
PROGRESS_EVERY = 10_000


def u_p(p: float) -> DenseOperator:
    """sqrt(1-p) sigma_3 + sqrt(p) sigma_1; p = 1/2 gives the Walsh-Hadamard gate."""
    _check_p(p)
    return DenseOperator(np.sqrt(1.0 - p) * pauli(3).entries + np.sqrt(p) * pauli(1).entries)


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"p must lie in [0, 1], got {p}")


def network_amplitudes(p: float, n: int) -> np.ndarray:
    """U_p^(x)n |0...0>: every neuron fires with probability p, independently."""
    _check_p(p)
    single = np.array([np.sqrt(1.0 - p), np.sqrt(p)], dtype=np.complex128)
    amps = np.ones(1, dtype=np.complex128)
    for _ in range(n):
        amps = np.kron(amps, single)
    return amps


@dataclass(frozen=True, eq=False)
class EnvCoupling:
    opset: OperatorSet
    mapping: Tuple[int, ...]  # environment eigenstate (0-based) -> member index
    u_net: DenseOperator
    n: int

    @property
    def env_dim(self) -> int:
        return len(self.mapping)

    @property
    def net_dim(self) -> int:
        return 1 << self.n

    def branch_operators(self) -> np.ndarray:
        """Stacked (env_dim, 2^n, 2^n) array of the network operator per eigenstate."""
        return np.stack([self.opset.operator(i).entries for i in self.mapping])

    def f_net(self, k: int) -> DenseOperator:
        return self.opset.operator(self.mapping[k - 1])

    def label(self, k: int) -> str:
        return permutation_label(self.opset.permutation(self.mapping[k - 1]))


def build_coupling(opset: OperatorSet, mapping: Optional[Sequence[Sequence[int]]] = None) -> EnvCoupling:
    """
    Couple the network to an environment with one eigenstate per operator.

    `mapping` lists the permutation assigned to eigenstates 1, 2, ...; by
    default the operator set's own (lexicographic) order is used.
    """
    if mapping is None:
        indices = tuple(range(len(opset)))
    else:
        indices = tuple(opset.find(perm) for perm in mapping)
    if sorted(indices) != list(range(len(opset))):
        raise NetworkDefinitionError(
            f"environment mapping must be a bijection onto the {len(opset)} operators")
    blocks = [opset.operator(i).entries for i in indices]
    n = int(np.log2(blocks[0].shape[0]))
    u_net = DenseOperator(block_diag(*blocks))
    log.debug("Built environment coupling: %d eigenstates, joint dim %d", len(indices), u_net.dim)
    return EnvCoupling(opset, indices, u_net, n)


@dataclass(frozen=True, eq=False)
class InitialCondition:
    p: float
    env_weights: Optional[Tuple[float, ...]] = None
    env_index: Optional[int] = None  # 1-based eigenstate
    env_density: Optional[np.ndarray] = None

    def __post_init__(self):
        _check_p(self.p)
        given = sum(x is not None for x in (self.env_weights, self.env_index, self.env_density))
        if given > 1:
            raise InvalidParameterError("give at most one of env_weights, env_index, env_density")
        if self.env_weights is not None:
            w = np.asarray(self.env_weights, dtype=np.float64)
            if np.any(w < 0) or abs(w.sum() - 1.0) > WEIGHT_TOL:
                raise InvalidParameterError("environment weights must be nonnegative and sum to 1")
        if self.env_density is not None:
            rho = DensityOperator(self.env_density)
            rho.validate()

    def weights(self, env_dim: int) -> np.ndarray:
        if self.env_index is not None:
            if not 1 <= self.env_index <= env_dim:
                raise InvalidParameterError(f"environment index {self.env_index} outside 1..{env_dim}")
            w = np.zeros(env_dim)
            w[self.env_index - 1] = 1.0
            return w
        if self.env_weights is not None:
            w = np.asarray(self.env_weights, dtype=np.float64)
            if w.shape != (env_dim,):
                raise DimensionError(f"{w.size} environment weights for {env_dim} eigenstates")
            return w
        if self.env_density is not None:
            rho = np.asarray(self.env_density, dtype=np.complex128)
            if rho.shape != (env_dim, env_dim):
                raise DimensionError(f"environment density has shape {rho.shape}, expected {env_dim}x{env_dim}")
            return np.real(np.diag(rho)).copy()
        return np.full(env_dim, 1.0 / env_dim)

    def env_matrix(self, env_dim: int) -> np.ndarray:
        if self.env_density is not None:
            self.weights(env_dim)
            return np.asarray(self.env_density, dtype=np.complex128)
        return np.diag(self.weights(env_dim)).astype(np.complex128)

    def is_env_diagonal(self) -> bool:
        if self.env_density is None:
            return True
        rho = np.asarray(self.env_density)
        return bool(np.all(np.abs(rho - np.diag(np.diag(rho))) == 0.0))


@dataclass(frozen=True, eq=False)
class EnergySeries:
    values: np.ndarray
    n: int
    energy_quantum: float = 1.0
    label: str = ""

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        upper = self.n * self.energy_quantum
        if vals.size and (vals.min() < -BOUND_TOL * max(upper, 1.0)
                          or vals.max() > upper + BOUND_TOL * max(upper, 1.0)):
            raise NumericalError(f"mean energy left [0, {upper}] (range {vals.min()}..{vals.max()})")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.size

    def drop(self, k: int) -> np.ndarray:
        """Values with the first k (transient) entries removed."""
        return self.values[k:]


def initial_state(ic: InitialCondition, coupling: EnvCoupling) -> DensityOperator:
    amps = network_amplitudes(ic.p, coupling.n)
    net = np.outer(amps, amps.conj())
    return DensityOperator(np.kron(ic.env_matrix(coupling.env_dim), net))


def environment_coherence(rho, env_dim: int) -> float:
    """Largest |entry| outside the environment-diagonal blocks."""
    arr = np.asarray(getattr(rho, "entries", rho))
    d = arr.shape[0] // env_dim
    blocks = arr.reshape(env_dim, d, env_dim, d)
    mask = ~np.eye(env_dim, dtype=bool)
    off = np.abs(blocks.transpose(0, 2, 1, 3))[mask]
    return float(off.max()) if off.size else 0.0


def iter_density(coupling: EnvCoupling, ic: InitialCondition) -> Iterator[np.ndarray]:
    """Yield rho(0), rho(1), ... as raw arrays; aborts if the trace drifts."""
    u = coupling.u_net.entries
    u_dag = u.conj().T
    rho = initial_state(ic, coupling).entries.copy()
    l = 0
    while True:
        drift = abs(np.trace(rho).real - 1.0)
        if drift > TRACE_ABORT:
            raise NumericalError(f"trace drifted by {drift:.3e} at iteration {l}")
        yield rho
        rho = u @ rho @ u_dag
        l += 1


def _energy_observable(coupling: EnvCoupling, units: FiringUnits) -> np.ndarray:
    return firing_counts(coupling.n) * units.energy_quantum


def iterate_mean_energy(coupling: EnvCoupling, ic: InitialCondition, steps: int,
                        units: FiringUnits = FiringUnits()) -> EnergySeries:
    """Density-path series of <1_E (x) H_Net> for l = 0..steps."""
    if steps < 0:
        raise InvalidParameterError(f"steps must be >= 0, got {steps}")
    h = np.diag(np.tile(_energy_observable(coupling, units), coupling.env_dim)).astype(np.complex128)
    values = np.empty(steps + 1)
    for l, rho in enumerate(iter_density(coupling, ic)):
        values[l] = trace_product(rho, h)
        if l and l % PROGRESS_EVERY == 0:
            log.debug("density path: %d/%d iterations", l, steps)
        if l == steps:
            break
    return EnergySeries(values, coupling.n, units.energy_quantum)


def evolve_branches(ops: np.ndarray, states: np.ndarray, weights: np.ndarray,
                    h_diag: np.ndarray, steps: int) -> np.ndarray:
    """
    Advance stacked branch states and record weighted mean energies.

    ops: (..., m, d, d); states: (..., m, d); weights: (..., m).
    Returns (..., steps + 1).
    """
    out = np.empty(states.shape[:-2] + (steps + 1,))
    for l in range(steps + 1):
        probs = np.abs(states) ** 2
        out[..., l] = np.einsum("...m,...md,d->...", weights, probs, h_diag)
        if l < steps:
            states = np.einsum("...mij,...mj->...mi", ops, states)
    return out


def pure_branch_mean_energy(coupling: EnvCoupling, ic: InitialCondition, steps: int,
                            units: FiringUnits = FiringUnits()) -> EnergySeries:
    if steps < 0:
        raise InvalidParameterError(f"steps must be >= 0, got {steps}")
    if not ic.is_env_diagonal():
        raise InvalidParameterError("pure-branch evolution needs an environment-diagonal initial state")
    weights = ic.weights(coupling.env_dim)
    amps = network_amplitudes(ic.p, coupling.n)
    states = np.tile(amps, (coupling.env_dim, 1))
    values = evolve_branches(coupling.branch_operators(), states, weights,
                             _energy_observable(coupling, units), steps)
    return EnergySeries(values, coupling.n, units.energy_quantum)


def per_eigenstate_series(coupling: EnvCoupling, k: int, p: float, steps: int,
                          units: FiringUnits = FiringUnits()) -> EnergySeries:
    if not 1 <= k <= coupling.env_dim:
        raise InvalidParameterError(f"environment index {k} outside 1..{coupling.env_dim}")
    series = pure_branch_mean_energy(coupling, InitialCondition(p, env_index=k), steps, units)
    return EnergySeries(series.values, series.n, series.energy_quantum, label=coupling.label(k))


def all_eigenstate_series(coupling: EnvCoupling, p: float, steps: int,
                          units: FiringUnits = FiringUnits()) -> List[EnergySeries]:
    return [per_eigenstate_series(coupling, k, p, steps, units) for k in range(1, coupling.env_dim + 1)]
