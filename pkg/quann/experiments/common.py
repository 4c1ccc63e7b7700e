"""Helpers shared by the experiment runners: network setup, series, CSV output."""
from __future__ import annotations
import logging
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from ..config_store import new_run_folder
from ..dynamics.envdyn import EnvCoupling, InitialCondition, build_coupling, pure_branch_mean_energy
from ..network.arch_file import load_architecture
from ..network.architecture import Architecture, distinct_operator_set
from ..network.presets import get_preset
from ..state import EnvMode, ExperimentConfig, LagMode
from ..rqa.embedding import autocorr_first_zero

log = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def write_csv(df: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    log.info("Saved %d rows to %s", len(df), path)
    return path


def run_folder(cfg: ExperimentConfig) -> Path:
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        return cfg.out
    return new_run_folder(cfg.command)


def load_network(cfg: ExperimentConfig) -> Architecture:
    if cfg.arch:
        return load_architecture(cfg.arch)
    return get_preset(cfg.preset)


def network_coupling(cfg: ExperimentConfig) -> EnvCoupling:
    arch = load_network(cfg)
    opset = distinct_operator_set(arch)
    coupling = build_coupling(opset)
    log.info("Network coupled to a %d-state environment: %s", coupling.env_dim,
             ", ".join(coupling.label(k) for k in range(1, coupling.env_dim + 1)))
    return coupling


def initial_condition(cfg: ExperimentConfig, p: Optional[float] = None,
                      env_index: Optional[int] = None) -> InitialCondition:
    p = cfg.p if p is None else p
    if env_index is not None:
        return InitialCondition(p, env_index=env_index)
    if cfg.env.mode is EnvMode.EIGENSTATE:
        return InitialCondition(p, env_index=cfg.env.index)
    return InitialCondition(p)


def kept_series(coupling: EnvCoupling, cfg: ExperimentConfig, p: Optional[float] = None,
                env_index: Optional[int] = None) -> np.ndarray:
    """Mean energy for l = 0..steps-1 with the first `drop` values removed."""
    series = pure_branch_mean_energy(coupling, initial_condition(cfg, p, env_index), cfg.steps - 1)
    return np.array(series.drop(cfg.drop))


def choose_lag(cfg: ExperimentConfig, series: np.ndarray) -> int:
    if cfg.lag.mode is LagMode.AUTO:
        choice = autocorr_first_zero(series)
        log.info("Embedding lag %d from the first autocorrelation zero%s", choice.lag,
                 " (fallback)" if choice.fallback else "")
        return choice.lag
    return cfg.lag.value
