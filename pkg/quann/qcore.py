"""
Dense complex linear algebra for small qubit registers.

Basis convention: qubit 1 is the most significant bit, so the firing pattern
r1 r2 ... rN has index sum(r_k * 2**(N-k)). Every other module inherits it.
"""
from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DimensionError, NumericalError, InvalidParameterError

log = logging.getLogger(__name__)

UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-9
EIGEN_TOL = 1e-9
NORM_TOL = 1e-10
IMAG_TOL = 1e-9
PHASE_TOL = 1e-8

# 2**14: a 14-qubit register (or 12 neurons times a small environment)
MAX_DIM = 1 << 14

Bits = Union[str, Sequence[int]]


def _frozen_complex(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, copy=True)
    if arr.ndim != ndim:
        raise DimensionError(f"expected a {ndim}-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NumericalError("non-finite amplitude or matrix entry")
    arr.setflags(write=False)
    return arr


def parse_bits(bits: Bits) -> tuple:
    if isinstance(bits, str):
        if not bits or any(c not in "01" for c in bits):
            raise InvalidParameterError(f"not a bit string: {bits!r}")
        return tuple(int(c) for c in bits)
    out = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in out):
        raise InvalidParameterError(f"not a bit sequence: {bits!r}")
    return out


def bits_to_index(bits: Bits) -> int:
    idx = 0
    for b in parse_bits(bits):
        idx = (idx << 1) | b
    return idx


def index_to_bits(index: int, width: int) -> tuple:
    return tuple((index >> (width - 1 - k)) & 1 for k in range(width))


def pattern_string(index: int, width: int) -> str:
    return "".join(str(b) for b in index_to_bits(index, width))


# -------- Domain types --------
@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Square complex matrix: unitaries, Hamiltonians and projectors alike."""
    entries: np.ndarray

    def __post_init__(self):
        arr = _frozen_complex(self.entries, 2)
        if arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise DimensionError(f"operator must be square and non-empty, got {arr.shape}")
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "DenseOperator":
        return cls(np.eye(dim, dtype=np.complex128))

    def dagger(self) -> "DenseOperator":
        return DenseOperator(self.entries.conj().T)

    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        if not isinstance(other, DenseOperator):
            return NotImplemented
        _check_dims(self.dim, other.dim)
        return DenseOperator(self.entries @ other.entries)

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        eye = np.eye(self.dim)
        return bool(np.allclose(self.entries.conj().T @ self.entries, eye, rtol=0.0, atol=tol))

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return bool(np.allclose(self.entries, self.entries.conj().T, rtol=0.0, atol=tol))

    def __repr__(self) -> str:
        return f"DenseOperator(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class StateVector:
    num_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 1:
            raise DimensionError("a state needs at least one qubit")
        arr = _frozen_complex(self.amps, 1)
        if arr.shape[0] != 1 << self.num_qubits:
            raise DimensionError(
                f"{self.num_qubits} qubits need {1 << self.num_qubits} amplitudes, got {arr.shape[0]}")
        norm = float(np.vdot(arr, arr).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise NumericalError(f"state is not normalized (|psi|^2 = {norm:.3e})")
        object.__setattr__(self, "amps", arr)

    @classmethod
    def normalized(cls, amps: Iterable[complex]) -> "StateVector":
        arr = np.asarray(list(amps) if not isinstance(amps, np.ndarray) else amps, dtype=np.complex128)
        n = int(round(np.log2(arr.shape[0]))) if arr.size else 0
        if arr.size == 0 or (1 << n) != arr.shape[0]:
            raise DimensionError(f"amplitude count {arr.size} is not a power of two")
        norm = np.linalg.norm(arr)
        if norm == 0.0:
            raise NumericalError("cannot normalize the zero vector")
        return cls(n, arr / norm)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def __repr__(self) -> str:
        return f"StateVector(num_qubits={self.num_qubits})"


@dataclass(frozen=True, eq=False)
class DensityOperator:
    entries: np.ndarray

    def __post_init__(self):
        arr = _frozen_complex(self.entries, 2)
        if arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"density operator must be square, got {arr.shape}")
        if not np.allclose(arr, arr.conj().T, rtol=0.0, atol=HERMITIAN_TOL):
            raise NumericalError("density operator is not Hermitian")
        tr = np.trace(arr).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise NumericalError(f"density operator trace is {tr!r}, expected 1")
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_state(cls, psi: StateVector) -> "DensityOperator":
        return cls(np.outer(psi.amps, psi.amps.conj()))

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def validate(self, tol: float = EIGEN_TOL) -> None:
        """Full positivity check; too costly for every iteration step."""
        evals = np.linalg.eigvalsh(self.entries)
        if evals.min() < -tol:
            raise NumericalError(f"density operator has eigenvalue {evals.min():.3e} < 0")

    def __repr__(self) -> str:
        return f"DensityOperator(dim={self.dim})"


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise DimensionError(f"dimension mismatch: {a} vs {b}")


def _require_unitary(u: DenseOperator) -> None:
    if not u.is_unitary():
        raise NumericalError("operator is not unitary within tolerance")


# -------- Operations --------
def kron(a: DenseOperator, b: DenseOperator) -> DenseOperator:
    if a.dim * b.dim > MAX_DIM:
        raise DimensionError(f"tensor product size {a.dim}x{b.dim} exceeds {MAX_DIM}")
    return DenseOperator(np.kron(a.entries, b.entries))


def kron_all(ops: Sequence[DenseOperator]) -> DenseOperator:
    if not ops:
        raise DimensionError("empty tensor product")
    out = ops[0]
    for op in ops[1:]:
        out = kron(out, op)
    return out


def apply(u: DenseOperator, psi: StateVector) -> StateVector:
    _check_dims(u.dim, psi.dim)
    _require_unitary(u)
    out = u.entries @ psi.amps
    if not np.all(np.isfinite(out)):
        raise NumericalError("non-finite amplitudes after applying operator")
    return StateVector(psi.num_qubits, out)


def evolve_density(u: DenseOperator, rho: DensityOperator) -> DensityOperator:
    _check_dims(u.dim, rho.dim)
    _require_unitary(u)
    m = u.entries
    return DensityOperator(m @ rho.entries @ m.conj().T)


def expectation(rho: DensityOperator, a: DenseOperator) -> float:
    _check_dims(rho.dim, a.dim)
    if not a.is_hermitian():
        raise InvalidParameterError("observable is not Hermitian")
    return trace_product(rho.entries, a.entries)


def trace_product(rho: np.ndarray, a: np.ndarray) -> float:
    """Tr(rho a) on raw arrays, checking the imaginary residue."""
    value = np.sum(rho * a.T)
    if abs(value.imag) > IMAG_TOL:
        raise NumericalError(f"expectation has imaginary residue {value.imag:.3e}")
    return float(value.real)


def equal_up_to_global_phase(a: DenseOperator, b: DenseOperator, tol: float = PHASE_TOL) -> bool:
    _check_dims(a.dim, b.dim)
    overlap = abs(np.vdot(a.entries, b.entries))
    return bool(overlap >= a.dim * (1.0 - tol))


# -------- Constructors --------
def basis_state(bits: Bits) -> StateVector:
    pattern = parse_bits(bits)
    amps = np.zeros(1 << len(pattern), dtype=np.complex128)
    amps[bits_to_index(pattern)] = 1.0
    return StateVector(len(pattern), amps)


def plus_state(n: int) -> StateVector:
    dim = 1 << n
    return StateVector(n, np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))


def product_state(*states: StateVector) -> StateVector:
    if not states:
        raise DimensionError("empty product of states")
    amps = states[0].amps
    for s in states[1:]:
        amps = np.kron(amps, s.amps)
    if amps.shape[0] > MAX_DIM:
        raise DimensionError(f"state dimension {amps.shape[0]} exceeds {MAX_DIM}")
    return StateVector(sum(s.num_qubits for s in states), amps)


def projector(bits: Bits) -> DenseOperator:
    pattern = parse_bits(bits)
    m = np.zeros((1 << len(pattern),) * 2, dtype=np.complex128)
    i = bits_to_index(pattern)
    m[i, i] = 1.0
    return DenseOperator(m)


def embed_single(op: DenseOperator, k: int, n: int) -> DenseOperator:
    """1^(k-1) (x) op (x) 1^(n-k) for a one-qubit op and 1-based k."""
    if op.dim != 2:
        raise DimensionError("embed_single expects a 2x2 operator")
    if not 1 <= k <= n:
        raise InvalidParameterError(f"qubit index {k} outside 1..{n}")
    left = np.eye(1 << (k - 1))
    right = np.eye(1 << (n - k))
    return DenseOperator(np.kron(np.kron(left, op.entries), right))


def reduced_density(psi: StateVector, keep: Sequence[int]) -> np.ndarray:
    """Partial trace of |psi><psi| onto the 1-based qubits in `keep`."""
    n = psi.num_qubits
    keep = sorted(set(keep))
    if not keep or keep[0] < 1 or keep[-1] > n:
        raise InvalidParameterError(f"qubits {keep} outside 1..{n}")
    tensor = psi.amps.reshape((2,) * n)
    axes = [k - 1 for k in keep]
    rest = [a for a in range(n) if a not in axes]
    m = np.transpose(tensor, axes + rest).reshape(1 << len(axes), -1)
    return m @ m.conj().T
