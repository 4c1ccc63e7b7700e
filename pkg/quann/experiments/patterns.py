"""Feedforward problem runners: firing-pattern selection and Boolean representation."""
from __future__ import annotations
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from ..errors import ConfigError, VerificationError
from ..network.feedforward import (build_boolean_representation, build_firing_pattern_selector,
                                   expected_boolean_state, expected_selection_state, two_stage)
from ..qcore import (StateVector, basis_state, bits_to_index, parse_bits, pattern_string,
                     plus_state, product_state, reduced_density)
from .common import write_csv
from .data import load_amplitudes, load_g_table

log = logging.getLogger(__name__)

MAX_SELECTOR_INPUTS = 5
VERIFY_TOL = 1e-10


@dataclass
class VerificationResult:
    passed: bool
    max_deviation: float
    csv_path: Path

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


def state_frame(psi: StateVector) -> pd.DataFrame:
    idx = np.arange(psi.dim)
    return pd.DataFrame({
        "basis_index": idx,
        "pattern": [pattern_string(int(i), psi.num_qubits) for i in idx],
        "re": psi.amps.real,
        "im": psi.amps.imag,
    })


def input_amplitudes(spec: str, m: int) -> np.ndarray:
    """'uniform', an m-bit pattern, or a CSV file of re,im rows."""
    spec = str(spec).strip()
    if spec == "uniform":
        return np.full(1 << m, 2.0 ** (-m / 2.0), dtype=np.complex128)
    if spec and set(spec) <= {"0", "1"}:
        if len(spec) != m:
            raise ConfigError(f"--psi0 pattern {spec!r} must have {m} bits")
        return basis_state(spec).amps.copy()
    return load_amplitudes(Path(spec), 1 << m)


def _finish(final: StateVector, expected: StateVector, out_dir: Path, extra_dev: float = 0.0) -> VerificationResult:
    deviation = max(float(np.max(np.abs(final.amps - expected.amps))), extra_dev)
    csv_path = write_csv(state_frame(final), out_dir / "final_state.csv")
    result = VerificationResult(deviation < VERIFY_TOL, deviation, csv_path)
    print(f"{result.verdict} max_deviation={deviation:.3e}")
    return result


def run_select_pattern(q: str, psi0: str, out_dir: Path, m: Optional[int] = None) -> VerificationResult:
    try:
        target = parse_bits(q)
    except ValueError:
        raise ConfigError(f"--q must be a bit string, got {q!r}") from None
    if m is not None and m != len(target):
        raise ConfigError(f"--q has {len(target)} bits but --m is {m}")
    m = len(target)
    if m > MAX_SELECTOR_INPUTS:
        raise ConfigError(f"pattern selection supports at most {MAX_SELECTOR_INPUTS} inputs, got {m}")

    amps = input_amplitudes(psi0, m)
    net, spec = build_firing_pattern_selector(target)
    psi_start = product_state(StateVector(m, amps), plus_state(m))
    final = two_stage(net, spec, psi_start)
    expected = expected_selection_state(target, amps)

    # input layer must be exactly |q><q|
    rho_in = reduced_density(final, range(1, m + 1))
    q_proj = np.zeros_like(rho_in)
    q_idx = bits_to_index(target)
    q_proj[q_idx, q_idx] = 1.0
    result = _finish(final, expected, out_dir, float(np.max(np.abs(rho_in - q_proj))))
    log.info("select-pattern q=%s: %s (max deviation %.3e)", q, result.verdict, result.max_deviation)
    if not result.passed:
        raise VerificationError(f"final state deviates from |q> by {result.max_deviation:.3e}")
    return result


def run_boolean_rep(g_table: Path, out_dir: Path, n: Optional[int] = None,
                    m: Optional[int] = None) -> VerificationResult:
    table, n_file, m_file = load_g_table(g_table)
    if (n is not None and n != n_file) or (m is not None and m != m_file):
        raise ConfigError(f"table is {n_file}->{m_file} bits, flags say {n}->{m}")
    n, m = n_file, m_file
    net, spec = build_boolean_representation(table, n, m)
    start = plus_state(n + 2 * m)
    final = two_stage(net, spec, start)
    expected = expected_boolean_state(table, n, m)

    # output register must be back in |+>^m, disentangled from the inputs
    rho_out = reduced_density(final, range(n + m + 1, n + 2 * m + 1))
    plus = plus_state(m).amps
    out_dev = float(np.max(np.abs(rho_out - np.outer(plus, plus.conj()))))
    result = _finish(final, expected, out_dir, out_dev)
    log.info("boolean-rep n=%d m=%d: %s (max deviation %.3e)", n, m, result.verdict, result.max_deviation)
    if not result.passed:
        raise VerificationError(f"final state deviates from the Boolean representation by {result.max_deviation:.3e}")
    return result
