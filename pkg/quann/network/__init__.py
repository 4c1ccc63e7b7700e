from .architecture import (Architecture, Digraph, NeuralLinksFunction, OperatorSet,
                           distinct_operator_set, example_network, lift_links_operator,
                           permutation_label, permutation_operator)
from .feedforward import (BackpropSpec, FeedforwardNet, backprop_operator,
                          build_boolean_representation, build_firing_pattern_selector,
                          learning_stage, links_operator, two_stage)
from .presets import PRESETS, get_preset
from .arch_file import load_architecture

__all__ = [
    "Architecture", "Digraph", "NeuralLinksFunction", "OperatorSet",
    "distinct_operator_set", "example_network", "lift_links_operator",
    "permutation_label", "permutation_operator",
    "BackpropSpec", "FeedforwardNet", "backprop_operator",
    "build_boolean_representation", "build_firing_pattern_selector",
    "learning_stage", "links_operator", "two_stage",
    "PRESETS", "get_preset", "load_architecture",
]
