"""Steady-state quantum correlations in 1-D optomechanical arrays."""

from ._omcorr import (
    LatticeParams,
    MeanFields,
    NoSteadyState,
    PhysicalityError,
    SolverFailure,
    correlation_map,
    diffusion_matrix,
    drift_matrix,
    gaussian_discord,
    log_negativity,
    photon_number_roots,
    read_csv,
    run_sweep,
    solve_lyapunov,
    solve_mean_fields,
    spectral_abscissa,
    stability_map,
    steady_state,
    symplectic_eigenvalues,
    temperature_from_occupation,
    thermal_occupation,
)

__version__ = "0.1.0"
