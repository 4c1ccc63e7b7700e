import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from quann.errors import (ConfigError, DataFormatError, GuardError, InvalidParameterError,
                          NetworkDefinitionError)
from quann.network.arch_file import architecture_from_dict, load_architecture
from quann.network.architecture import (Architecture, Digraph, NeuralLinksFunction,
                                        distinct_operator_set, lift_links_operator,
                                        permutation_label, permutation_operator)
from quann.network.presets import get_preset
from quann.neuron import pauli
from quann.qcore import DenseOperator, basis_state, bits_to_index, equal_up_to_global_phase, index_to_bits

I2 = DenseOperator.identity(2)
X = pauli(1)

EXAMPLE_LABELS = ["L3L2L1", "L2L3L1", "L3L1L2", "L1L3L2", "L2L1L3", "L1L2L3"]


def _gate_doc(op):
    return [[float(z.real), float(z.imag)] for z in op.entries.ravel()]


def _fan_out(n: int) -> Architecture:
    """Neuron 1 drives every other neuron with a controlled-NOT; neuron 2 drives 1."""
    edges = {(1, k) for k in range(2, n + 1)} | {(2, 1)}
    links = [NeuralLinksFunction(k, (1,), {0: I2, 1: X}) for k in range(2, n + 1)]
    links.append(NeuralLinksFunction(1, (2,), {0: I2, 1: I2}))
    return Architecture(Digraph(n, frozenset(edges)), tuple(links))


def _relabel(arch: Architecture, new_name: dict) -> Architecture:
    """Same network with neuron j renamed new_name[j]; tables re-keyed to the new input order."""
    edges = frozenset((new_name[j], new_name[k]) for j, k in arch.digraph.edges)
    links = []
    for f in arch.links:
        inputs = tuple(sorted(new_name[j] for j in f.input_order))
        table = {}
        for s in range(1 << len(inputs)):
            fired = dict(zip(inputs, index_to_bits(s, len(inputs))))
            table[s] = f.table[bits_to_index([fired[new_name[j]] for j in f.input_order])]
        links.append(NeuralLinksFunction(new_name[f.owner], inputs, table))
    return Architecture(Digraph(arch.n, edges), tuple(links))


def _slot_permutation(n: int, new_name: dict) -> np.ndarray:
    perm = np.zeros((1 << n, 1 << n))
    for b in range(1 << n):
        bits = index_to_bits(b, n)
        moved = [0] * n
        for j in range(1, n + 1):
            moved[new_name[j] - 1] = bits[j - 1]
        perm[bits_to_index(moved), b] = 1.0
    return perm


class TestDigraph:
    def test_inputs_and_receivers(self, example_arch):
        g = example_arch.digraph
        assert g.inputs_of(1) == (2, 3)
        assert g.inputs_of(2) == (1,)
        assert g.inputs_of(3) == (1, 2)
        assert g.receivers() == (1, 2, 3)

    def test_self_loop(self):
        with pytest.raises(NetworkDefinitionError):
            Digraph(2, frozenset({(1, 1)}))

    def test_edge_out_of_range(self):
        with pytest.raises(NetworkDefinitionError):
            Digraph(2, frozenset({(1, 3)}))

    def test_size_guard(self):
        with pytest.raises(GuardError):
            Digraph(13)


class TestArchitecture:
    def test_links_must_cover_receivers(self):
        g = Digraph(2, frozenset({(1, 2), (2, 1)}))
        with pytest.raises(NetworkDefinitionError):
            Architecture(g, (NeuralLinksFunction(2, (1,), {0: I2, 1: X}),))

    def test_table_must_be_total(self):
        with pytest.raises(NetworkDefinitionError):
            NeuralLinksFunction(2, (1,), {0: I2})

    def test_table_entries_unitary(self):
        with pytest.raises(NetworkDefinitionError):
            NeuralLinksFunction(2, (1,), {0: I2, 1: DenseOperator(np.diag([1.0, 2.0]))})

    def test_no_links_for_source_neuron(self):
        arch = Architecture(Digraph(2, frozenset({(1, 2)})),
                            (NeuralLinksFunction(2, (1,), {0: I2, 1: X}),))
        assert arch.links_of(2).owner == 2
        with pytest.raises(NetworkDefinitionError):
            arch.links_of(1)


class TestLinksOperator:
    def test_unitary(self, example_arch):
        for k in (1, 2, 3):
            assert lift_links_operator(example_arch, k).is_unitary()

    def test_neuron_two_fires_through_hadamard(self, example_arch):
        out = lift_links_operator(example_arch, 2).entries @ basis_state("100").amps
        assert_allclose(out, (basis_state("100").amps + basis_state("110").amps) / np.sqrt(2))

    def test_neuron_three_negated_when_one_and_two_agree(self, example_arch):
        op = lift_links_operator(example_arch, 3).entries
        assert_allclose(op @ basis_state("000").amps, basis_state("001").amps)
        assert_allclose(op @ basis_state("010").amps, basis_state("010").amps)

    def test_permutation_applies_first_listed_first(self, example_arch):
        l1, l2, l3 = (lift_links_operator(example_arch, k).entries for k in (1, 2, 3))
        assert_allclose(permutation_operator(example_arch, (1, 2, 3)).entries, l3 @ l2 @ l1)
        assert_allclose(permutation_operator(example_arch, (3, 1, 2)).entries, l2 @ l1 @ l3)

    def test_bad_permutation(self, example_arch):
        with pytest.raises(InvalidParameterError):
            permutation_operator(example_arch, (1, 2))

    def test_label(self):
        assert permutation_label((1, 2, 3)) == "L3L2L1"
        assert permutation_label((2, 3, 1)) == "L1L3L2"

    @pytest.mark.parametrize("relabel", [{1: 2, 2: 3, 3: 1}, {1: 1, 2: 3, 3: 2}, {1: 3, 2: 2, 3: 1}])
    def test_relabeling_neurons_permutes_tensor_slots(self, example_arch, relabel):
        renamed = _relabel(example_arch, relabel)
        slots = _slot_permutation(example_arch.n, relabel)
        for k in (1, 2, 3):
            moved = slots @ lift_links_operator(example_arch, k).entries @ slots.T
            assert np.max(np.abs(lift_links_operator(renamed, relabel[k]).entries - moved)) < 1e-12


class TestOperatorSet:
    def test_example_has_six_distinct_members(self, example_opset):
        assert len(example_opset) == 6
        ops = [example_opset.operator(i) for i in range(6)]
        for i in range(6):
            for j in range(i + 1, 6):
                assert not equal_up_to_global_phase(ops[i], ops[j], 1e-8)

    def test_lexicographic_labels(self, example_opset):
        assert [example_opset.label(i) for i in range(6)] == EXAMPLE_LABELS

    def test_find(self, example_opset):
        assert example_opset.find((2, 3, 1)) == 3
        with pytest.raises(InvalidParameterError):
            example_opset.find((1, 1, 2))

    def test_commuting_orders_collapse(self):
        # controlled-NOTs from neuron 1 onto 2 and 3 commute; neuron 1 itself idles
        opset = distinct_operator_set(_fan_out(3))
        assert len(opset) == 1
        assert opset.permutation(0) == (1, 2, 3)

    def test_ordering_guard(self):
        with pytest.raises(GuardError):
            distinct_operator_set(_fan_out(7))

    def test_no_receivers(self):
        with pytest.raises(NetworkDefinitionError):
            distinct_operator_set(Architecture(Digraph(2), ()))


class TestPresets:
    def test_example(self):
        assert get_preset("example3").n == 3

    def test_unknown(self):
        with pytest.raises(ConfigError):
            get_preset("nope")


class TestArchFile:
    def _example_doc(self, arch):
        links = {}
        for f in arch.links:
            width = len(f.input_order)
            links[str(f.owner)] = {format(s, f"0{width}b"): _gate_doc(op) for s, op in f.table.items()}
        return {"neurons": arch.n, "edges": sorted(arch.digraph.edges), "links": links}

    def test_load_matches_preset(self, tmp_path, example_arch, example_opset):
        path = tmp_path / "arch.json"
        path.write_text(json.dumps(self._example_doc(example_arch)), encoding="utf-8")
        loaded = distinct_operator_set(load_architecture(path))
        assert [loaded.label(i) for i in range(len(loaded))] == EXAMPLE_LABELS
        for i in range(6):
            assert_allclose(loaded.operator(i).entries, example_opset.operator(i).entries, atol=1e-15)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataFormatError):
            load_architecture(tmp_path / "none.json")

    def test_bad_json(self, tmp_path):
        path = tmp_path / "arch.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(DataFormatError):
            load_architecture(path)

    def test_missing_neurons(self):
        with pytest.raises(DataFormatError):
            architecture_from_dict({"edges": []})

    def test_gate_needs_four_entries(self):
        doc = {"neurons": 2, "edges": [[1, 2]], "links": {"2": {"0": [[1, 0]], "1": [[1, 0]]}}}
        with pytest.raises(DataFormatError):
            architecture_from_dict(doc)

    def test_pattern_width(self):
        gate = _gate_doc(I2)
        doc = {"neurons": 2, "edges": [[1, 2]], "links": {"2": {"00": gate, "1": gate}}}
        with pytest.raises(DataFormatError):
            architecture_from_dict(doc)

    def test_non_unitary_gate(self):
        gate = _gate_doc(I2)
        doc = {"neurons": 2, "edges": [[1, 2]],
               "links": {"2": {"0": gate, "1": [[1, 0], [1, 0], [0, 0], [1, 0]]}}}
        with pytest.raises(NetworkDefinitionError):
            architecture_from_dict(doc)

    def test_partial_table(self):
        doc = {"neurons": 2, "edges": [[1, 2]], "links": {"2": {"0": _gate_doc(I2)}}}
        with pytest.raises(NetworkDefinitionError):
            architecture_from_dict(doc)
