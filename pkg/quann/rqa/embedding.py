from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import InvalidParameterError, SeriesError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmbeddingConfig:
    lag: int = 1
    dim: int = 1

    def __post_init__(self):
        if self.lag < 1:
            raise InvalidParameterError(f"embedding lag must be >= 1, got {self.lag}")
        if self.dim < 1:
            raise InvalidParameterError(f"embedding dimension must be >= 1, got {self.dim}")

    @property
    def xi(self) -> int:
        """Span of one embedded point, in samples."""
        return (self.dim - 1) * self.lag

    def count(self, length: int) -> int:
        return length - self.xi


@dataclass(frozen=True, eq=False)
class EmbeddedSeries:
    points: np.ndarray  # (count, dim)
    cfg: EmbeddingConfig

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class LagChoice:
    lag: int
    fallback: bool  # True when no zero crossing was found up to max_lag


def _as_series(series) -> np.ndarray:
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1:
        raise SeriesError(f"expected a 1-d series, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise SeriesError("series contains non-finite values")
    return x


def delay_embed(series, cfg: EmbeddingConfig) -> EmbeddedSeries:
    """Point u is (s[u+xi], s[u+xi-h], ..., s[u]); newest coordinate first."""
    x = _as_series(series)
    count = cfg.count(x.size)
    if count < 1:
        raise SeriesError(f"series of length {x.size} too short for lag {cfg.lag}, dimension {cfg.dim}")
    points = np.empty((count, cfg.dim))
    for j in range(cfg.dim):
        start = cfg.xi - j * cfg.lag
        points[:, j] = x[start:start + count]
    points.setflags(write=False)
    return EmbeddedSeries(points, cfg)


def sample_autocorrelation(series, max_lag: int) -> np.ndarray:
    """acf[h] for h = 0..max_lag, normalized by the lag-0 sum of squares."""
    x = _as_series(series)
    if x.size < 3:
        raise SeriesError(f"need at least 3 samples for an autocorrelation, got {x.size}")
    if np.ptp(x) == 0.0:
        raise SeriesError("constant series has no autocorrelation")
    dev = x - x.mean()
    denom = float(dev @ dev)
    max_lag = min(int(max_lag), x.size - 1)
    return np.array([float(dev[:x.size - h] @ dev[h:]) / denom for h in range(max_lag + 1)])


def autocorr_first_zero(series, max_lag: Optional[int] = None) -> LagChoice:
    """Smallest lag h >= 1 with acf(h) <= 0, else max_lag flagged as a fallback."""
    x = _as_series(series)
    if max_lag is None:
        max_lag = x.size // 2
    acf = sample_autocorrelation(x, max_lag)
    hits = np.nonzero(acf[1:] <= 0.0)[0]
    if hits.size:
        return LagChoice(int(hits[0]) + 1, False)
    log.warning("Autocorrelation stays positive up to lag %d; using it as the embedding lag", max_lag)
    return LagChoice(int(max_lag), True)
