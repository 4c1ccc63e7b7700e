"""
Batched mean-energy series over many values of p.

All branches of all p values advance together with one stacked product per
step. With workers > 1 the p grid is split into contiguous chunks mapped over
a process pool; chunks come back in submission order.
"""
from __future__ import annotations
import logging
from multiprocessing import Pool
from typing import Optional, Sequence

import numpy as np

from ..errors import InvalidParameterError
from ..neuron import FiringUnits, firing_counts
from .envdyn import EnvCoupling, InitialCondition, evolve_branches, network_amplitudes

log = logging.getLogger(__name__)


def p_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid start, start+step, ..., stop; 0..1 step 0.001 has 1001 points."""
    if step <= 0:
        raise InvalidParameterError(f"p step must be positive, got {step}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        raise InvalidParameterError(f"empty p range {start}..{stop}")
    grid = np.round(start + step * np.arange(count), 12)
    if grid.min() < 0.0 or grid.max() > 1.0:
        raise InvalidParameterError(f"p range {start}..{stop} leaves [0, 1]")
    return grid


def _sweep_chunk(args) -> np.ndarray:
    ops, ps, n, weights, h_diag, steps = args
    states = np.stack([np.tile(network_amplitudes(p, n), (ops.shape[0], 1)) for p in ps])
    batch_ops = np.broadcast_to(ops, (len(ps),) + ops.shape)
    batch_w = np.broadcast_to(weights, (len(ps),) + weights.shape)
    return evolve_branches(batch_ops, states, batch_w, h_diag, steps)


def sweep_mean_energy(coupling: EnvCoupling, ps: Sequence[float], steps: int,
                      units: FiringUnits = FiringUnits(),
                      env_weights: Optional[Sequence[float]] = None,
                      workers: int = 1, chunk_size: int = 50) -> np.ndarray:
    """Array of shape (len(ps), steps + 1); row i is the series for ps[i]."""
    if steps < 0:
        raise InvalidParameterError(f"steps must be >= 0, got {steps}")
    ps = [float(p) for p in ps]
    ic = InitialCondition(ps[0] if ps else 0.0,
                          env_weights=tuple(env_weights) if env_weights is not None else None)
    for p in ps:
        InitialCondition(p)
    weights = ic.weights(coupling.env_dim)
    ops = coupling.branch_operators()
    h_diag = firing_counts(coupling.n) * units.energy_quantum
    chunks = [ps[i:i + chunk_size] for i in range(0, len(ps), chunk_size)]
    jobs = [(ops, chunk, coupling.n, weights, h_diag, steps) for chunk in chunks]
    log.info("Sweeping %d p values x %d steps in %d chunk(s), %d worker(s)",
             len(ps), steps + 1, len(chunks), workers)

    if workers > 1 and len(chunks) > 1:
        with Pool(processes=min(workers, len(chunks))) as pool:
            parts = pool.map(_sweep_chunk, jobs)
    else:
        parts = []
        for i, job in enumerate(jobs, start=1):
            parts.append(_sweep_chunk(job))
            log.debug("sweep chunk %d/%d done", i, len(jobs))
    if not parts:
        return np.empty((0, steps + 1))
    return np.concatenate(parts, axis=0)
