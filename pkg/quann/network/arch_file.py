"""
Architecture description files.

Format (JSON):

    {
      "neurons": 3,
      "edges": [[2, 1], [3, 1], [1, 2]],
      "links": {
        "1": {"00": [[1, 0], [0, 0], [0, 0], [1, 0]], ...},
        "2": {"0": ..., "1": ...}
      }
    }

Each links entry is keyed by the owner neuron and then by the firing pattern
of its inputs (ascending neuron order). A gate is its four entries in
row-major order, each given as [re, im].
"""
from __future__ import annotations
import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from ..errors import DataFormatError, InvalidParameterError, QuannError
from ..qcore import DenseOperator, bits_to_index
from .architecture import Architecture, Digraph, NeuralLinksFunction

log = logging.getLogger(__name__)


def _parse_gate(raw: Any, where: str) -> DenseOperator:
    try:
        entries = [complex(float(re), float(im)) for re, im in raw]
    except (TypeError, ValueError):
        raise DataFormatError(f"{where}: a gate is four [re, im] pairs") from None
    if len(entries) != 4:
        raise DataFormatError(f"{where}: a gate needs exactly four entries, got {len(entries)}")
    return DenseOperator(np.array(entries, dtype=np.complex128).reshape(2, 2))


def architecture_from_dict(doc: Dict[str, Any]) -> Architecture:
    try:
        n = int(doc["neurons"])
        edges = frozenset((int(j), int(k)) for j, k in doc.get("edges", []))
        links_doc = doc.get("links", {})
    except (KeyError, TypeError, ValueError) as e:
        raise DataFormatError(f"architecture needs 'neurons', 'edges' and 'links': {e}") from None
    digraph = Digraph(n, edges)

    links = []
    for owner_key, table_doc in links_doc.items():
        owner = int(owner_key)
        inputs = digraph.inputs_of(owner)
        table = {}
        for pattern, raw in table_doc.items():
            if len(pattern) != len(inputs):
                raise DataFormatError(
                    f"neuron {owner}: pattern {pattern!r} does not match its {len(inputs)} input(s)")
            try:
                idx = bits_to_index(pattern) if pattern else 0
            except InvalidParameterError:
                raise DataFormatError(f"neuron {owner}: {pattern!r} is not a bit pattern") from None
            table[idx] = _parse_gate(raw, f"neuron {owner} pattern {pattern!r}")
        links.append(NeuralLinksFunction(owner, inputs, table))
    return Architecture(digraph, tuple(links))


def load_architecture(path: Union[str, Path]) -> Architecture:
    p = Path(path)
    if not p.exists():
        raise DataFormatError(f"architecture file not found: {p}")
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{p}: invalid JSON ({e})") from None
    try:
        arch = architecture_from_dict(doc)
    except QuannError:
        log.error("Rejected architecture file %s", p)
        raise
    log.info("Loaded architecture from %s: %d neurons, %d links functions", p, arch.n, len(arch.links))
    return arch
