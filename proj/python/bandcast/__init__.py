"""Least-squares band-limited approximation and forecasting of discrete-time signals."""

from ._bandcast import (
    Band,
    BandlimitedModel,
    EmptyWindow,
    Error,
    FilterMode,
    FilterOutput,
    FilterState,
    FitConfig,
    FitResult,
    InvalidArgument,
    NonConsecutiveTime,
    NotPositiveDefinite,
    Signal,
    SingularSystem,
    SolveMethod,
    SolverInfo,
    TimeWindow,
    analyze,
    basis_value,
    brute_force_fit,
    condition_estimate,
    design_matrix,
    fit,
    fit_highband,
    forecast,
    gram,
    is_unique_regime,
    new_window,
    objective,
    objective_regularized,
    regularize,
    run_offline,
    sinc,
    solve_spd,
    spectrum,
    symmetric_eigenvalues,
    synthesize,
)

__all__ = [name for name in dir() if not name.startswith("_")]
