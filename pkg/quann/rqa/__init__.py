from .embedding import (EmbeddedSeries, EmbeddingConfig, LagChoice, autocorr_first_zero,
                        delay_embed, sample_autocorrelation)
from .recurrence import (DiagonalProfile, PowerLawFit, RecurrenceSummary, count_power_law,
                         diagonal_counts, diagonal_profile, full_line_inventory,
                         multi_radius_profiles, pair_distances, persistent_full_lines,
                         prob_full_recurrence, recurrence_plot, total_recurrence,
                         total_recurrence_curve)
from .dimension import DimensionEstimate, correlation_dimension

__all__ = [
    "EmbeddedSeries", "EmbeddingConfig", "LagChoice", "autocorr_first_zero",
    "delay_embed", "sample_autocorrelation",
    "DiagonalProfile", "PowerLawFit", "RecurrenceSummary", "count_power_law",
    "diagonal_counts", "diagonal_profile", "full_line_inventory",
    "multi_radius_profiles", "pair_distances", "persistent_full_lines",
    "prob_full_recurrence", "recurrence_plot", "total_recurrence",
    "total_recurrence_curve",
    "DimensionEstimate", "correlation_dimension",
]
