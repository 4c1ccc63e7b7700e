from __future__ import annotations
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from ..dynamics.sweep import p_grid, sweep_mean_energy
from ..errors import ConfigError
from ..state import EnvMode, ExperimentConfig
from .common import network_coupling, write_csv

log = logging.getLogger(__name__)


@dataclass
class DynamicsResult:
    csv_path: Path
    p_values: int
    rows: int


def run_dynamics(cfg: ExperimentConfig, out_dir: Path, sweep: bool = False) -> DynamicsResult:
    """Mean firing energy per (p, l) for the kept iterations l = drop..steps-1."""
    coupling = network_coupling(cfg)
    ps = p_grid(cfg.p_start, cfg.p_stop, cfg.p_step) if sweep else np.array([cfg.p])
    weights = None
    if cfg.env.mode is EnvMode.EIGENSTATE:
        if cfg.env.index > coupling.env_dim:
            raise ConfigError(f"--env {cfg.env.index} outside 1..{coupling.env_dim}")
        weights = np.zeros(coupling.env_dim)
        weights[cfg.env.index - 1] = 1.0
    values = sweep_mean_energy(coupling, ps, cfg.steps - 1, env_weights=weights, workers=cfg.workers)
    kept = values[:, cfg.drop:]
    l = np.arange(cfg.drop, cfg.steps)
    df = pd.DataFrame({
        "p": np.repeat(ps, l.size),
        "l": np.tile(l, ps.size),
        "energy_J": kept.ravel(),
    })
    path = write_csv(df, out_dir / "energy.csv")

    log.info("=" * 60)
    log.info("DYNAMICS")
    log.info("=" * 60)
    log.info("p values: %d | kept iterations: %d | environment: %s", ps.size, l.size,
             "uniform" if cfg.env.mode is EnvMode.UNIFORM else f"eigenstate {cfg.env.index}")
    if ps.size == 1:
        log.info("Mean energy %.6f J, range %.6f..%.6f J", kept.mean(), kept.min(), kept.max())
    log.info("=" * 60)
    return DynamicsResult(path, int(ps.size), len(df))
