from __future__ import annotations
import logging
from dataclasses import dataclass

import numpy as np
from scipy.stats import linregress

from ..errors import InvalidParameterError, RadiusRangeError, SeriesError
from .embedding import EmbeddingConfig, delay_embed
from .recurrence import total_recurrence_curve

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DimensionEstimate:
    d2: float
    r_squared: float
    p_value: float
    std_err: float
    radii: tuple
    recurrence: tuple


def correlation_dimension(series, cfg: EmbeddingConfig, radii) -> DimensionEstimate:
    """Slope of log C(delta) against log delta over the given scaling range."""
    r = np.asarray(radii, dtype=np.float64)
    if r.size < 3:
        raise InvalidParameterError(f"need at least 3 radii for a slope, got {r.size}")
    emb = delay_embed(series, cfg)
    if len(emb) < 2:
        raise SeriesError(f"need at least two embedded points, got {len(emb)} (d_E={cfg.dim})")
    c = total_recurrence_curve(emb, r)
    if np.any(c <= 0.0):
        bad = r[c <= 0.0]
        raise RadiusRangeError(
            f"no recurrent pairs at radius {bad[0]:.6g} (d_E={cfg.dim}); choose radii inside the scaling region")
    fit = linregress(np.log(r), np.log(c))
    est = DimensionEstimate(
        d2=float(fit.slope),
        r_squared=float(fit.rvalue ** 2),
        p_value=float(fit.pvalue),
        std_err=float(fit.stderr),
        radii=tuple(float(v) for v in r),
        recurrence=tuple(float(v) for v in c),
    )
    log.debug("d_E=%d: D2=%.4f R2=%.5f", cfg.dim, est.d2, est.r_squared)
    return est
