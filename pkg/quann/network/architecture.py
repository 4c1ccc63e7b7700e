"""
General digraph networks.

Each neuron with inputs owns a neural links function mapping the firing
pattern of its inputs to a 2x2 unitary applied to itself. Activating the
neurons in some order gives one full-network operator; the distinct ones
(up to global phase) form the operator set an environment can select from.
"""
from __future__ import annotations
import itertools
import math
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import GuardError, InvalidParameterError, NetworkDefinitionError
from ..neuron import MAX_NEURONS, pauli, walsh_hadamard
from ..qcore import DenseOperator, PHASE_TOL, bits_to_index, equal_up_to_global_phase, index_to_bits

log = logging.getLogger(__name__)

MAX_ORDERED_NEURONS = 6  # 6! = 720 products


@dataclass(frozen=True)
class Digraph:
    n: int
    edges: FrozenSet[Tuple[int, int]] = frozenset()

    def __post_init__(self):
        if not 1 <= self.n <= MAX_NEURONS:
            raise GuardError(f"neuron count {self.n} outside 1..{MAX_NEURONS}")
        edges = frozenset((int(j), int(k)) for j, k in self.edges)
        for j, k in edges:
            if not (1 <= j <= self.n and 1 <= k <= self.n):
                raise NetworkDefinitionError(f"edge ({j},{k}) references a neuron outside 1..{self.n}")
            if j == k:
                raise NetworkDefinitionError(f"self-loop on neuron {j}")
        object.__setattr__(self, "edges", edges)

    def inputs_of(self, k: int) -> Tuple[int, ...]:
        return tuple(sorted(j for j, kk in self.edges if kk == k))

    def receivers(self) -> Tuple[int, ...]:
        return tuple(sorted({k for _, k in self.edges}))


@dataclass(frozen=True)
class NeuralLinksFunction:
    owner: int
    input_order: Tuple[int, ...]
    table: Dict[int, DenseOperator] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "input_order", tuple(self.input_order))
        if list(self.input_order) != sorted(set(self.input_order)):
            raise NetworkDefinitionError(f"inputs of neuron {self.owner} must be ascending and distinct")
        for s in range(1 << len(self.input_order)):
            op = self.table.get(s)
            if op is None:
                raise NetworkDefinitionError(f"links table of neuron {self.owner} lacks input pattern {s}")
            if op.dim != 2 or not op.is_unitary():
                raise NetworkDefinitionError(
                    f"links table entry {s} of neuron {self.owner} is not a 2x2 unitary")

    def gate(self, pattern: Sequence[int]) -> np.ndarray:
        """Gate selected by a full-network firing pattern (bits indexed from neuron 1)."""
        s_in = bits_to_index([pattern[j - 1] for j in self.input_order]) if self.input_order else 0
        return self.table[s_in].entries


@dataclass(frozen=True)
class Architecture:
    digraph: Digraph
    links: Tuple[NeuralLinksFunction, ...]

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(sorted(self.links, key=lambda f: f.owner)))
        owners = tuple(f.owner for f in self.links)
        if owners != self.digraph.receivers():
            raise NetworkDefinitionError(
                f"links functions cover neurons {owners}, expected {self.digraph.receivers()}")
        for f in self.links:
            if f.input_order != self.digraph.inputs_of(f.owner):
                raise NetworkDefinitionError(
                    f"neuron {f.owner} reads {f.input_order}, digraph gives {self.digraph.inputs_of(f.owner)}")

    @property
    def n(self) -> int:
        return self.digraph.n

    def links_of(self, k: int) -> NeuralLinksFunction:
        for f in self.links:
            if f.owner == k:
                return f
        raise NetworkDefinitionError(f"neuron {k} has no inputs, so it has no links operator")


@dataclass(frozen=True)
class OperatorSet:
    members: Tuple[Tuple[Tuple[int, ...], DenseOperator], ...]

    def __len__(self) -> int:
        return len(self.members)

    def permutation(self, i: int) -> Tuple[int, ...]:
        return self.members[i][0]

    def operator(self, i: int) -> DenseOperator:
        return self.members[i][1]

    def label(self, i: int) -> str:
        return permutation_label(self.members[i][0])

    def find(self, perm: Sequence[int]) -> int:
        """Index of the member represented by `perm`."""
        perm = tuple(perm)
        for i, (p, _) in enumerate(self.members):
            if p == perm:
                return i
        raise InvalidParameterError(f"permutation {perm} is not a class representative")


def permutation_label(perm: Sequence[int]) -> str:
    """Written product, right-most factor applied first: (1,2,3) -> 'L3L2L1'."""
    return "".join(f"L{k}" for k in reversed(tuple(perm)))


# -------- Operators --------
def lift_links_operator(arch: Architecture, k: int) -> DenseOperator:
    f = arch.links_of(k)
    n = arch.n
    dim = 1 << n
    shift = n - k
    out = np.zeros((dim, dim), dtype=np.complex128)
    for b in range(dim):
        pattern = index_to_bits(b, n)
        gate = f.gate(pattern)
        r_k = pattern[k - 1]
        base = b & ~(1 << shift)
        for x in (0, 1):
            out[base | (x << shift), b] = gate[x, r_k]
    return DenseOperator(out)


def _check_permutation(arch: Architecture, perm: Sequence[int]) -> Tuple[int, ...]:
    perm = tuple(int(k) for k in perm)
    if sorted(perm) != list(arch.digraph.receivers()):
        raise InvalidParameterError(
            f"{perm} is not a permutation of the receiving neurons {arch.digraph.receivers()}")
    return perm


def permutation_operator(arch: Architecture, perm: Sequence[int],
                         lifted: Optional[Dict[int, DenseOperator]] = None) -> DenseOperator:
    """Product of lifted links operators; the first-listed neuron acts first."""
    perm = _check_permutation(arch, perm)
    lifted = lifted if lifted is not None else {}
    result = np.eye(1 << arch.n, dtype=np.complex128)
    for k in perm:
        if k not in lifted:
            lifted[k] = lift_links_operator(arch, k)
        result = lifted[k].entries @ result
    return DenseOperator(result)


def distinct_operator_set(arch: Architecture, tol: float = PHASE_TOL) -> OperatorSet:
    receivers = arch.digraph.receivers()
    if not receivers:
        raise NetworkDefinitionError("network has no neuron with inputs")
    if len(receivers) > MAX_ORDERED_NEURONS:
        raise GuardError(
            f"{len(receivers)} receiving neurons exceed the {MAX_ORDERED_NEURONS}-neuron ordering guard")
    lifted: Dict[int, DenseOperator] = {}
    kept: List[Tuple[Tuple[int, ...], DenseOperator]] = []
    for perm in itertools.permutations(receivers):
        op = permutation_operator(arch, perm, lifted)
        if any(equal_up_to_global_phase(op, other, tol) for _, other in kept):
            continue
        kept.append((perm, op))
    log.info("Operator set: %d distinct of %d activation orders", len(kept),
             math.factorial(len(receivers)))
    return OperatorSet(tuple(kept))


# -------- Built-in networks --------
def example_network() -> Architecture:
    """Three neurons, every neuron reading the others except 3 -> 2."""
    eye = DenseOperator.identity(2)
    w = walsh_hadamard()
    x = pauli(1)
    digraph = Digraph(3, frozenset({(2, 1), (3, 1), (1, 2), (1, 3), (2, 3)}))
    links = (
        # N2N3 = 00, 01, 10, 11
        NeuralLinksFunction(1, (2, 3), {0: eye, 1: w, 2: w, 3: eye}),
        NeuralLinksFunction(2, (1,), {0: eye, 1: w}),
        # N1N2 = 00, 01, 10, 11
        NeuralLinksFunction(3, (1, 2), {0: x, 1: eye, 2: eye, 3: x}),
    )
    return Architecture(digraph, links)
