from .envdyn import (REFERENCE_P, EnergySeries, EnvCoupling, InitialCondition,
                     all_eigenstate_series, build_coupling, environment_coherence,
                     initial_state, iter_density, iterate_mean_energy,
                     per_eigenstate_series, pure_branch_mean_energy, u_p)
from .sweep import p_grid, sweep_mean_energy

__all__ = [
    "REFERENCE_P", "EnergySeries", "EnvCoupling", "InitialCondition",
    "all_eigenstate_series", "build_coupling", "environment_coherence",
    "initial_state", "iter_density", "iterate_mean_energy",
    "per_eigenstate_series", "pure_branch_mean_energy", "u_p",
    "p_grid", "sweep_mean_energy",
]
