"""Recurrence experiments on mean-energy series: summaries, dimensions, plots, scans."""
from __future__ import annotations
import logging
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from ..dynamics.sweep import p_grid, sweep_mean_energy
from ..errors import ConfigError, SeriesError, UndefinedProbabilityError
from ..plotting.pgm import save_recurrence_pgm
from ..rqa.dimension import correlation_dimension
from ..rqa.embedding import EmbeddingConfig, autocorr_first_zero, delay_embed
from ..rqa.recurrence import (count_power_law, full_line_inventory, multi_radius_profiles,
                              persistent_full_lines, prob_full_recurrence, recurrence_plot,
                              total_recurrence_curve)
from ..state import ExperimentConfig, LagMode, RadiiKind, RadiiSpec, RqaMode
from .common import choose_lag, kept_series, network_coupling, write_csv

log = logging.getLogger(__name__)


@dataclass
class RecurrenceResult:
    out_dir: Path
    files: Dict[str, Path] = field(default_factory=dict)
    rows: int = 0


def _sigma_labels(spec: RadiiSpec) -> List[float]:
    if spec.kind is RadiiKind.SIGMA:
        return list(spec.values)
    return [float("nan")] * len(spec.values)


def _safe_prob(profile) -> float:
    try:
        return prob_full_recurrence(profile)
    except UndefinedProbabilityError:
        return float("nan")


def _summary_rows(profiles, sigmas, totals) -> List[dict]:
    rows = []
    for prof, sig, tot in zip(profiles, sigmas, totals):
        s = full_line_inventory(prof)
        rows.append({
            "radius_sigma": sig, "radius": prof.delta,
            "max_pct": s.max_pct, "min_pct": s.min_pct, "mean_pct": s.mean_pct,
            "median_pct": s.median_pct, "std_pct": s.std_pct, "lines": s.n_lines,
            "full_fraction": s.full_fraction, "total_recurrence": float(tot),
            "prob_full": _safe_prob(prof),
        })
    return rows


def _lines_frames(summaries, radii) -> Tuple[pd.DataFrame, pd.DataFrame]:
    lines = [{"radius": r, "theta": t} for s, r in zip(summaries, radii) for t in s.full_lines]
    gaps = [{"radius": r, "distance": d, "frequency": f}
            for s, r in zip(summaries, radii) for d, f in s.distance_distribution().items()]
    return (pd.DataFrame(lines, columns=["radius", "theta"]),
            pd.DataFrame(gaps, columns=["radius", "distance", "frequency"]))


# -------- rqa --------
def run_rqa(cfg: ExperimentConfig, out_dir: Path) -> RecurrenceResult:
    if cfg.mode is RqaMode.EIGENSTATES:
        return _rqa_eigenstates(cfg, out_dir)
    if cfg.mode is RqaMode.EPOCHS:
        return _rqa_epochs(cfg, out_dir)
    return _rqa_summary(cfg, out_dir)


def _rqa_summary(cfg: ExperimentConfig, out_dir: Path) -> RecurrenceResult:
    coupling = network_coupling(cfg)
    series = kept_series(coupling, cfg)
    lag = choose_lag(cfg, series)
    emb = delay_embed(series, EmbeddingConfig(lag, cfg.dim))
    radii = cfg.radii.resolve(series)
    profiles = multi_radius_profiles(emb, radii)
    totals = total_recurrence_curve(emb, radii)
    rows = _summary_rows(profiles, _sigma_labels(cfg.radii), totals)
    result = RecurrenceResult(out_dir, rows=len(rows))
    result.files["summary"] = write_csv(pd.DataFrame(rows), out_dir / "summary.csv")

    summaries = [full_line_inventory(p) for p in profiles]
    lines_df, gaps_df = _lines_frames(summaries, radii)
    result.files["full_lines"] = write_csv(lines_df, out_dir / "full_lines.csv")
    result.files["distances"] = write_csv(gaps_df, out_dir / "distances.csv")

    fit = count_power_law(radii, [s.n_lines for s in summaries])
    if fit is not None:
        result.files["power_law"] = write_csv(pd.DataFrame([{
            "exponent": fit.exponent, "intercept": fit.intercept,
            "r_squared": fit.r_squared, "points": fit.points}]), out_dir / "power_law.csv")

    log.info("=" * 60)
    log.info("RECURRENCE SUMMARY (%d points, d_E=%d, lag %d)", series.size, cfg.dim, lag)
    log.info("=" * 60)
    for row in rows:
        log.info("delta=%.6g: max %.4f%% | mean %.4f%% | median %.4f%% | %d full lines",
                 row["radius"], row["max_pct"], row["mean_pct"], row["median_pct"], row["lines"])
    if fit is not None:
        log.info("Full-line count scales as delta^%.3f (R2 %.4f)", fit.exponent, fit.r_squared)
    log.info("=" * 60)
    return result


def _rqa_eigenstates(cfg: ExperimentConfig, out_dir: Path) -> RecurrenceResult:
    coupling = network_coupling(cfg)
    rows = []
    for k in range(1, coupling.env_dim + 1):
        series = kept_series(coupling, cfg, env_index=k)
        lag = choose_lag(cfg, series)
        emb = delay_embed(series, EmbeddingConfig(lag, cfg.dim))
        radii = cfg.radii.resolve(series)
        for prof in multi_radius_profiles(emb, radii):
            s = full_line_inventory(prof)
            rows.append({
                "env_index": k, "permutation": coupling.label(k), "radius": prof.delta,
                "lines": s.n_lines, "mean_pct": s.mean_pct, "max_pct": s.max_pct,
                "median_pct": s.median_pct, "prob_full": _safe_prob(prof),
            })
        log.info("eigenstate %d (%s): %d full lines, mean recurrence %.4f%%",
                 k, coupling.label(k), rows[-1]["lines"], rows[-1]["mean_pct"])
    result = RecurrenceResult(out_dir, rows=len(rows))
    result.files["eigenstates"] = write_csv(pd.DataFrame(rows), out_dir / "eigenstates.csv")
    return result


def _rqa_epochs(cfg: ExperimentConfig, out_dir: Path) -> RecurrenceResult:
    coupling = network_coupling(cfg)
    series = kept_series(coupling, cfg)
    lag = choose_lag(cfg, series)
    emb_cfg = EmbeddingConfig(lag, cfg.dim)
    needed = cfg.epochs * cfg.epoch_size
    if series.size < needed:
        raise ConfigError(
            f"{cfg.epochs} epochs of {cfg.epoch_size} values need {needed} kept values, have {series.size}")
    if emb_cfg.count(cfg.epoch_size) < 2:
        raise ConfigError(
            f"epochs of {cfg.epoch_size} values are too short to embed with d_E={cfg.dim}, lag {lag}")
    radii = cfg.radii.resolve(series)
    rows = []
    per_radius: List[list] = [[] for _ in radii]
    # sequential, non-overlapping epochs; each one is embedded on its own
    for e in range(cfg.epochs):
        segment = series[e * cfg.epoch_size:(e + 1) * cfg.epoch_size]
        profiles = multi_radius_profiles(delay_embed(segment, emb_cfg), radii)
        for i, prof in enumerate(profiles):
            per_radius[i].append(prof)
            s = full_line_inventory(prof)
            gaps = s.distance_stats()
            rows.append({
                "epoch": e + 1, "radius": prof.delta, "lines": s.n_lines,
                "full_pct": 100.0 * s.full_fraction, "mean_pct": s.mean_pct,
                "median_pct": s.median_pct, "std_pct": s.std_pct,
                "min_period": s.min_period if s.min_period is not None else float("nan"),
                "max_period": s.max_period if s.max_period is not None else float("nan"),
                "min_distance": gaps["min"], "max_distance": gaps["max"], "mean_distance": gaps["mean"],
            })
            log.info("epoch %d, delta=%.6g: mean %.4f%% | median %.4f%% | std %.4f%%",
                     e + 1, prof.delta, s.mean_pct, s.median_pct, s.std_pct)
    result = RecurrenceResult(out_dir, rows=len(rows))
    result.files["epochs"] = write_csv(pd.DataFrame(rows), out_dir / "epochs.csv")

    persistent_rows, gap_rows = [], []
    for r, profs in zip(radii, per_radius):
        common = persistent_full_lines(profs)
        persistent_rows += [{"radius": r, "theta": t} for t in common]
        values, freq = np.unique(np.diff(common), return_counts=True) if len(common) > 1 else ([], [])
        gap_rows += [{"radius": r, "distance": int(d), "frequency": int(f)} for d, f in zip(values, freq)]
        log.info("delta=%.6g: %d full lines persist across all %d epochs", r, len(common), cfg.epochs)
    result.files["persistent"] = write_csv(
        pd.DataFrame(persistent_rows, columns=["radius", "theta"]), out_dir / "persistent_lines.csv")
    result.files["distances"] = write_csv(
        pd.DataFrame(gap_rows, columns=["radius", "distance", "frequency"]), out_dir / "distances.csv")
    return result


# -------- corr-dim --------
def run_corr_dim(cfg: ExperimentConfig, out_dir: Path) -> RecurrenceResult:
    coupling = network_coupling(cfg)
    series = kept_series(coupling, cfg)
    lag = choose_lag(cfg, series)
    needed = cfg.epochs * cfg.epoch_size + (max(cfg.dims) - 1) * lag
    if series.size < needed:
        raise ConfigError(
            f"{cfg.epochs} epochs of {cfg.epoch_size} embedded points need {needed} kept values, "
            f"have {series.size}")
    rows = []
    for e in range(cfg.epochs):
        for d in cfg.dims:
            emb_cfg = EmbeddingConfig(lag, d)
            segment = series[e * cfg.epoch_size:(e + 1) * cfg.epoch_size + emb_cfg.xi]
            est = correlation_dimension(segment, emb_cfg, cfg.radii.resolve(segment))
            rows.append({"epoch": e + 1, "d_E": d, "lag": lag, "D2": est.d2,
                         "r_squared": est.r_squared, "p_value": est.p_value, "std_err": est.std_err})
            log.info("epoch %d, d_E=%d: D2=%.4f (R2 %.5f)", e + 1, d, est.d2, est.r_squared)
    result = RecurrenceResult(out_dir, rows=len(rows))
    result.files["corr_dim"] = write_csv(pd.DataFrame(rows), out_dir / "corr_dim.csv")
    return result


# -------- rec-plot --------
def run_rec_plot(cfg: ExperimentConfig, out_dir: Path) -> RecurrenceResult:
    coupling = network_coupling(cfg)
    series = kept_series(coupling, cfg)
    lag = choose_lag(cfg, series)
    emb = delay_embed(series, EmbeddingConfig(lag, cfg.dim))
    radii = cfg.radii.resolve(series)
    if radii.size > 1:
        log.warning("rec-plot draws one radius; using %.6g and ignoring %d more", radii[0], radii.size - 1)
    delta = float(radii[0])
    matrix = recurrence_plot(emb, delta)
    result = RecurrenceResult(out_dir, rows=matrix.shape[0])
    result.files["plot"] = save_recurrence_pgm(matrix, out_dir / "recurrence.pgm")
    log.info("Recurrence plot: %d points, delta=%.6g, %.4f%% recurrent", matrix.shape[0], delta,
             100.0 * matrix.mean())
    return result


# -------- prob-scan --------
def _scan_one(args) -> List[dict]:
    p, series, dims, lag_mode, lag_value, radii_spec = args
    rows = []
    if np.ptp(series) == 0.0:
        log.warning("p=%.6g: constant series, probability undefined", p)
        return [{"p": p, "d_E": d, "lag": float("nan"), "radius": float("nan"),
                 "probability": float("nan")} for d in dims]
    lag = autocorr_first_zero(series).lag if lag_mode is LagMode.AUTO else lag_value
    delta = float(radii_spec.resolve(series)[0])
    for d in dims:
        try:
            profile = multi_radius_profiles(delay_embed(series, EmbeddingConfig(lag, d)), [delta])[0]
            prob = prob_full_recurrence(profile)
        except (UndefinedProbabilityError, SeriesError) as e:
            log.warning("p=%.6g, d_E=%d: %s", p, d, e)
            prob = float("nan")
        rows.append({"p": p, "d_E": d, "lag": lag, "radius": delta, "probability": prob})
    return rows


def run_prob_scan(cfg: ExperimentConfig, out_dir: Path) -> RecurrenceResult:
    coupling = network_coupling(cfg)
    ps = p_grid(cfg.p_start, cfg.p_stop, cfg.p_step)
    values = sweep_mean_energy(coupling, ps, cfg.steps - 1, workers=cfg.workers)[:, cfg.drop:]
    jobs = [(float(p), values[i], cfg.dims, cfg.lag.mode, cfg.lag.value, cfg.radii)
            for i, p in enumerate(ps)]
    if cfg.workers > 1 and len(jobs) > 1:
        with Pool(processes=min(cfg.workers, len(jobs))) as pool:
            parts = pool.map(_scan_one, jobs)
    else:
        parts = [_scan_one(job) for job in jobs]
    rows = [row for part in parts for row in part]
    df = pd.DataFrame(rows, columns=["p", "d_E", "lag", "radius", "probability"])
    result = RecurrenceResult(out_dir, rows=len(df))
    result.files["prob_scan"] = write_csv(df, out_dir / "prob_scan.csv")
    log.info("Probability scan: %d p values x %d dimensions, %d undefined", ps.size, len(cfg.dims),
             int(df["probability"].isna().sum()))
    return result
