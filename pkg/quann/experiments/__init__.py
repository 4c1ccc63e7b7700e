from .dynamics import DynamicsResult, run_dynamics
from .patterns import VerificationResult, run_boolean_rep, run_select_pattern
from .recurrence import RecurrenceResult, run_corr_dim, run_prob_scan, run_rec_plot, run_rqa

__all__ = [
    "DynamicsResult", "run_dynamics",
    "VerificationResult", "run_boolean_rep", "run_select_pattern",
    "RecurrenceResult", "run_corr_dim", "run_prob_scan", "run_rec_plot", "run_rqa",
]
