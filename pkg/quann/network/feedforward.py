"""
Two-layer feedforward networks.

The register is laid out as input layer (neurons 1..m) followed by output
layer (neurons m+1..m+n). The learning stage rotates each output neuron
conditioned on the input firing pattern; quantum backpropagation then applies
a circuit to the input layer conditioned on the output firing pattern.
"""
from __future__ import annotations
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import block_diag

from ..errors import DimensionError, GuardError, InvalidParameterError, NetworkDefinitionError
from ..neuron import (MAX_NEURONS, ConditionalU2Params, boolean_gate_params,
                      pauli, rotation_matrix)
from ..qcore import (Bits, DenseOperator, StateVector, apply, bits_to_index,
                     index_to_bits, parse_bits)

log = logging.getLogger(__name__)

BooleanFunction = Callable[[Tuple[int, ...]], int]
BooleanTable = Mapping[Union[int, str, Tuple[int, ...]], Union[int, str, Sequence[int]]]

_I2 = np.eye(2, dtype=np.complex128)
_X = pauli(1).entries


def _kron_chain(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = np.kron(out, m)
    return out


def _negation_tensor(s: int, width: int) -> np.ndarray:
    """Tensor of sigma_1 on every qubit whose bit is set in s, identity elsewhere."""
    return _kron_chain([_X if b else _I2 for b in index_to_bits(s, width)])


@dataclass(frozen=True)
class FeedforwardNet:
    m: int
    n: int
    params: Dict[Tuple[int, int], ConditionalU2Params] = field(default_factory=dict)

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise InvalidParameterError(f"both layers need neurons (m={self.m}, n={self.n})")
        if self.m + self.n > MAX_NEURONS:
            raise GuardError(f"m+n = {self.m + self.n} exceeds the {MAX_NEURONS}-neuron guard")

    @property
    def num_qubits(self) -> int:
        return self.m + self.n

    def param(self, k: int, r: int) -> ConditionalU2Params:
        try:
            return self.params[(k, r)]
        except KeyError:
            raise NetworkDefinitionError(
                f"no parameters for output neuron {k} under input pattern "
                f"{''.join(map(str, index_to_bits(r, self.m)))}") from None

    @classmethod
    def from_boolean_functions(cls, m: int, functions: Sequence[BooleanFunction]) -> "FeedforwardNet":
        """Output k learns f_k: the full-period rotation sends |+> to |f_k(r)>."""
        params = {}
        for k, f in enumerate(functions, start=1):
            for r in range(1 << m):
                params[(k, r)] = boolean_gate_params(int(f(index_to_bits(r, m))))
        return cls(m, len(functions), params)

    @classmethod
    def from_local_connections(cls, m: int, n: int, masks: Sequence[Sequence[int]],
                               tables: Sequence[Mapping[int, ConditionalU2Params]]) -> "FeedforwardNet":
        """Output k only sees the inputs listed in masks[k-1]; tables are keyed by that sub-pattern."""
        if len(masks) != n or len(tables) != n:
            raise NetworkDefinitionError("need one mask and one table per output neuron")
        params = {}
        for k, (mask, table) in enumerate(zip(masks, tables), start=1):
            if any(not 1 <= j <= m for j in mask):
                raise NetworkDefinitionError(f"mask {list(mask)} of output {k} outside 1..{m}")
            for r in range(1 << m):
                bits = index_to_bits(r, m)
                sub = bits_to_index([bits[j - 1] for j in mask]) if mask else 0
                if sub not in table:
                    raise NetworkDefinitionError(f"local table of output {k} lacks entry {sub}")
                params[(k, r)] = table[sub]
        return cls(m, n, params)


@dataclass(frozen=True)
class BackpropSpec:
    m: int
    n: int
    circuits: Dict[int, DenseOperator] = field(default_factory=dict)

    def __post_init__(self):
        for s in range(1 << self.n):
            if s not in self.circuits:
                raise NetworkDefinitionError(f"no backpropagation circuit for output pattern {s}")
        for s, c in self.circuits.items():
            if c.dim != 1 << self.m:
                raise DimensionError(f"circuit for pattern {s} has dim {c.dim}, expected {1 << self.m}")
            if not c.is_unitary():
                raise NetworkDefinitionError(f"circuit for output pattern {s} is not unitary")

    @classmethod
    def identity(cls, m: int, n: int) -> "BackpropSpec":
        return cls(m, n, {s: DenseOperator.identity(1 << m) for s in range(1 << n)})

    @classmethod
    def from_links(cls, m: int, n: int,
                   params: Mapping[Tuple[int, int], ConditionalU2Params]) -> "BackpropSpec":
        """Circuits in neural-links form: input neuron k rotates by params[(k, s)] under output pattern s."""
        circuits = {}
        for s in range(1 << n):
            mats = []
            for k in range(1, m + 1):
                if (k, s) not in params:
                    raise NetworkDefinitionError(f"no parameters for input neuron {k} under output pattern {s}")
                mats.append(rotation_matrix(params[(k, s)], 1.0))
            circuits[s] = DenseOperator(_kron_chain(mats))
        return cls(m, n, circuits)


# -------- Operators --------
def links_operator(net: FeedforwardNet, fraction: float = 1.0) -> DenseOperator:
    blocks = []
    for r in range(1 << net.m):
        mats = [rotation_matrix(net.param(k, r), fraction) for k in range(1, net.n + 1)]
        blocks.append(_kron_chain(mats))
    return DenseOperator(block_diag(*blocks))


def learning_stage(net: FeedforwardNet, psi0: StateVector) -> StateVector:
    if psi0.num_qubits != net.num_qubits:
        raise DimensionError(f"state has {psi0.num_qubits} qubits, network has {net.num_qubits}")
    return apply(links_operator(net, 1.0), psi0)


def backprop_operator(spec: BackpropSpec, m: int) -> DenseOperator:
    if spec.m != m:
        raise DimensionError(f"circuits act on {spec.m} inputs, expected {m}")
    dim_out = 1 << spec.n
    total = np.zeros(((1 << m) * dim_out,) * 2, dtype=np.complex128)
    for s, circuit in spec.circuits.items():
        proj = np.zeros((dim_out, dim_out))
        proj[s, s] = 1.0
        total += np.kron(circuit.entries, proj)
    return DenseOperator(total)


def two_stage(net: FeedforwardNet, spec: BackpropSpec, psi0: StateVector) -> StateVector:
    if spec.n != net.n:
        raise DimensionError(f"backpropagation expects {spec.n} outputs, network has {net.n}")
    learned = learning_stage(net, psi0)
    return apply(backprop_operator(spec, net.m), learned)


# -------- Problem constructions --------
def build_firing_pattern_selector(q: Bits) -> Tuple[FeedforwardNet, BackpropSpec]:
    """Outputs flag r_k != q_k, backpropagation negates flagged inputs, leaving |q> on the input layer."""
    target = parse_bits(q)
    m = len(target)
    functions = [(lambda bits, k=k: bits[k] ^ target[k]) for k in range(m)]
    net = FeedforwardNet.from_boolean_functions(m, functions)
    spec = BackpropSpec(m, m, {s: DenseOperator(_negation_tensor(s, m)) for s in range(1 << m)})
    log.debug("Built firing pattern selector for q=%s", "".join(map(str, target)))
    return net, spec


def _normalize_table(g: BooleanTable, n: int, m: int) -> Tuple[int, ...]:
    out = [None] * (1 << n)
    for h, y in g.items():
        h_idx = h if isinstance(h, (int, np.integer)) else bits_to_index(h)
        y_idx = y if isinstance(y, (int, np.integer)) else bits_to_index(y)
        if not isinstance(h, (int, np.integer)) and len(parse_bits(h)) != n:
            raise NetworkDefinitionError(f"input pattern {h!r} is not {n} bits wide")
        if not isinstance(y, (int, np.integer)) and len(parse_bits(y)) != m:
            raise NetworkDefinitionError(f"output pattern {y!r} is not {m} bits wide")
        if not 0 <= h_idx < (1 << n) or not 0 <= y_idx < (1 << m):
            raise NetworkDefinitionError(f"table row {h!r} -> {y!r} out of range")
        if out[h_idx] is not None:
            raise NetworkDefinitionError(f"duplicate table row for input {h!r}")
        out[h_idx] = int(y_idx)
    missing = [i for i, y in enumerate(out) if y is None]
    if missing:
        raise NetworkDefinitionError(f"Boolean table is partial: {len(missing)} input pattern(s) missing")
    return tuple(out)


def build_boolean_representation(g: BooleanTable, n: int, m: int) -> Tuple[FeedforwardNet, BackpropSpec]:
    """
    Represent g: {0,1}^n -> {0,1}^m on an (n+m)-neuron input layer.

    Output k compares the k-th function slot of the input layer with g(h)_k;
    backpropagation then negates the mismatching slots so the input layer
    ends up in sum_h |h g(h)> while the output layer returns to |+>^m.
    """
    table = _normalize_table(g, n, m)
    width = n + m

    def make(k: int) -> BooleanFunction:
        def f(bits: Tuple[int, ...]) -> int:
            h = bits_to_index(bits[:n]) if n else 0
            return bits[n + k] ^ index_to_bits(table[h], m)[k]
        return f

    net = FeedforwardNet.from_boolean_functions(width, [make(k) for k in range(m)])
    # identity on the h slots, controlled negations on the g slots
    circuits = {s: DenseOperator(np.kron(np.eye(1 << n), _negation_tensor(s, m))) for s in range(1 << m)}
    return net, BackpropSpec(width, m, circuits)


def expected_selection_state(q: Bits, input_amps: np.ndarray) -> StateVector:
    """|q> (x) sum_r psi0(r) |r xor q>."""
    target = parse_bits(q)
    m = len(target)
    amps_in = np.asarray(input_amps, dtype=np.complex128)
    if amps_in.shape != (1 << m,):
        raise DimensionError(f"input amplitudes must have length {1 << m}")
    q_idx = bits_to_index(target)
    out = np.zeros(1 << (2 * m), dtype=np.complex128)
    for r, a in enumerate(amps_in):
        out[(q_idx << m) | (r ^ q_idx)] = a
    return StateVector(2 * m, out)


def expected_boolean_state(g: BooleanTable, n: int, m: int) -> StateVector:
    """sum_h 2^(-n/2) |h g(h)> (x) |+>^m."""
    table = _normalize_table(g, n, m)
    inputs = np.zeros(1 << (n + m), dtype=np.complex128)
    for h, y in enumerate(table):
        inputs[(h << m) | y] = 2.0 ** (-n / 2.0)
    plus = np.full(1 << m, 2.0 ** (-m / 2.0), dtype=np.complex128)
    return StateVector(n + 2 * m, np.kron(inputs, plus))
