"""Gaussian-state simulator for a two-LC-circuit quantum battery."""

from ._core import (
    ChargerKind,
    CouplingClass,
    Field,
    GaussianState,
    HamiltonianParams,
    Mode,
    Observables,
    SingleModeState,
    Stability,
    SweepSpec,
    build_diffusion,
    build_drift,
    classify_coupling,
    coherence,
    coherent_mode,
    dominant_frequencies,
    entropy,
    ergotropy,
    ergotropy_ratio,
    fock,
    hamiltonian_extrapolated,
    hamiltonian_from_frequencies,
    hamiltonian_from_lc,
    max_over_window,
    mean_photon,
    mode_energy,
    observables,
    product_state,
    propagate,
    reduce,
    run_sweep,
    stability_check,
    steady_state,
    symplectic_eigenvalue,
    thermal_mode,
    uniform_grid,
    vacuum,
    vacuum_mode,
    DomainError,
    DivergenceError,
    TruncationError,
    UnphysicalStateError,
)

__all__ = [name for name in dir() if not name.startswith("_")]
