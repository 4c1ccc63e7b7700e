"""
Diagonal recurrence statistics.

Diagonal theta of the recurrence matrix pairs embedded points u and u+theta.
Its recurrence frequency is the share of those pairs closer than delta
(strictly). Diagonals are streamed one at a time, so memory stays linear in
the series length; only recurrence_plot materializes the full matrix.
"""
from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from ..errors import GuardError, InvalidParameterError, UndefinedProbabilityError
from .embedding import EmbeddedSeries

log = logging.getLogger(__name__)

MAX_PLOT_POINTS = 20_000
PLOT_BLOCK_ROWS = 512


def pair_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Euclidean distance between matching rows (last axis = coordinates)."""
    total = np.zeros(np.broadcast_shapes(a.shape, b.shape)[:-1])
    for j in range(a.shape[-1]):
        diff = a[..., j] - b[..., j]
        total += diff * diff
    return np.sqrt(total)


def _check_radii(radii) -> np.ndarray:
    r = np.atleast_1d(np.asarray(radii, dtype=np.float64))
    if r.size == 0:
        raise InvalidParameterError("no radii given")
    if np.any(~(r > 0)):
        raise InvalidParameterError(f"radii must be positive, got {r.tolist()}")
    return r


def diagonal_counts(emb: EmbeddedSeries, radii) -> Tuple[np.ndarray, np.ndarray]:
    """
    Recurrent-pair counts per (radius, diagonal) in one pass.

    Returns (counts, totals): counts has shape (len(radii), T_d) with column
    theta-1 holding #{u: |x_{u+theta} - x_u| < delta}; totals[theta-1] = T - theta.
    """
    r = _check_radii(radii)
    x = emb.points
    t = x.shape[0]
    n_diag = max(t - 1, 0)
    counts = np.zeros((r.size, n_diag), dtype=np.int64)
    totals = t - np.arange(1, n_diag + 1, dtype=np.int64)
    for theta in range(1, t):
        d = np.sort(pair_distances(x[theta:], x[:-theta]))
        counts[:, theta - 1] = np.searchsorted(d, r, side="left")
    return counts, totals


@dataclass(frozen=True, eq=False)
class DiagonalProfile:
    counts: np.ndarray  # recurrent pairs per diagonal, theta = 1..T_d
    totals: np.ndarray  # pairs per diagonal
    delta: float

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.totals

    @property
    def n_diagonals(self) -> int:
        return self.counts.size

    def full_lines(self) -> np.ndarray:
        """Diagonals (theta values) on which every pair recurs."""
        return np.nonzero(self.counts == self.totals)[0] + 1

    def recurrent_lines(self) -> np.ndarray:
        return np.nonzero(self.counts > 0)[0] + 1


def multi_radius_profiles(emb: EmbeddedSeries, radii) -> List[DiagonalProfile]:
    r = _check_radii(radii)
    counts, totals = diagonal_counts(emb, r)
    return [DiagonalProfile(counts[i], totals, float(r[i])) for i in range(r.size)]


def diagonal_profile(emb: EmbeddedSeries, delta: float) -> DiagonalProfile:
    return multi_radius_profiles(emb, [delta])[0]


def total_recurrence_curve(emb: EmbeddedSeries, radii) -> np.ndarray:
    """Share of strictly-below-diagonal pairs within each radius; NaN without pairs."""
    t = len(emb)
    if t < 2:
        return np.full(_check_radii(radii).size, np.nan)
    counts, _ = diagonal_counts(emb, radii)
    return 2.0 * counts.sum(axis=1) / float(t * t - t)


def total_recurrence(emb: EmbeddedSeries, delta: float) -> float:
    return float(total_recurrence_curve(emb, [delta])[0])


def prob_full_recurrence(profile: DiagonalProfile) -> float:
    """P(line is fully recurrent | line has a recurrence)."""
    recurrent = int(np.count_nonzero(profile.counts > 0))
    if recurrent == 0:
        raise UndefinedProbabilityError(f"no recurrent diagonal at delta={profile.delta}")
    return profile.full_lines().size / recurrent


# -------- Full-line inventory --------
@dataclass(frozen=True)
class RecurrenceSummary:
    delta: float
    max_pct: float
    min_pct: float
    mean_pct: float
    median_pct: float
    std_pct: float
    n_diagonals: int
    full_lines: Tuple[int, ...]
    distances: Tuple[int, ...]

    @property
    def n_lines(self) -> int:
        return len(self.full_lines)

    @property
    def min_period(self) -> Optional[int]:
        return self.full_lines[0] if self.full_lines else None

    @property
    def max_period(self) -> Optional[int]:
        return self.full_lines[-1] if self.full_lines else None

    @property
    def full_fraction(self) -> float:
        """Share of diagonals that are fully recurrent."""
        return self.n_lines / self.n_diagonals if self.n_diagonals else 0.0

    def distance_stats(self) -> Dict[str, float]:
        if not self.distances:
            return {"min": float("nan"), "max": float("nan"), "mean": float("nan")}
        d = np.asarray(self.distances, dtype=np.float64)
        return {"min": float(d.min()), "max": float(d.max()), "mean": float(d.mean())}

    def distance_distribution(self) -> Dict[int, int]:
        """Gap between consecutive full lines -> how often it occurs."""
        values, freq = np.unique(np.asarray(self.distances, dtype=np.int64), return_counts=True)
        return {int(v): int(f) for v, f in zip(values, freq)}


def full_line_inventory(profile: DiagonalProfile) -> RecurrenceSummary:
    c = profile.frequencies * 100.0
    if c.size == 0:
        nan = float("nan")
        return RecurrenceSummary(profile.delta, nan, nan, nan, nan, nan, 0, (), ())
    lines = tuple(int(t) for t in profile.full_lines())
    gaps = tuple(int(g) for g in np.diff(lines)) if len(lines) > 1 else ()
    return RecurrenceSummary(
        delta=profile.delta,
        max_pct=float(c.max()),
        min_pct=float(c.min()),
        mean_pct=float(c.mean()),
        median_pct=float(np.median(c)),
        std_pct=float(c.std(ddof=1)) if c.size > 1 else 0.0,
        n_diagonals=int(c.size),
        full_lines=lines,
        distances=gaps,
    )


def persistent_full_lines(profiles: Sequence[DiagonalProfile]) -> Tuple[int, ...]:
    """Full-line periods shared by every profile (e.g. every epoch)."""
    if not profiles:
        return ()
    common = set(int(t) for t in profiles[0].full_lines())
    for prof in profiles[1:]:
        common &= set(int(t) for t in prof.full_lines())
    return tuple(sorted(common))


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    intercept: float
    r_squared: float
    points: int


def count_power_law(radii, counts) -> Optional[PowerLawFit]:
    """Fit #full lines ~ delta^b over the radii that have at least one full line."""
    r = np.asarray(radii, dtype=np.float64)
    n = np.asarray(counts, dtype=np.float64)
    keep = (n > 0) & (r > 0)
    if np.count_nonzero(keep) < 3:
        return None
    fit = stats.linregress(np.log(r[keep]), np.log(n[keep]))
    return PowerLawFit(float(fit.slope), float(fit.intercept), float(fit.rvalue ** 2), int(keep.sum()))


# -------- Recurrence plot --------
def recurrence_plot(emb: EmbeddedSeries, delta: float) -> np.ndarray:
    """Boolean matrix M[u, v] = |x_u - x_v| < delta, built in row blocks."""
    _check_radii([delta])
    x = emb.points
    t = x.shape[0]
    if t > MAX_PLOT_POINTS:
        raise GuardError(f"recurrence plot of {t} points exceeds the {MAX_PLOT_POINTS}-point guard")
    out = np.empty((t, t), dtype=bool)
    for start in range(0, t, PLOT_BLOCK_ROWS):
        stop = min(start + PLOT_BLOCK_ROWS, t)
        out[start:stop] = pair_distances(x[start:stop, None, :], x[None, :, :]) < delta
    return out
