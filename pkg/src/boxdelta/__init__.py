"""Exact and approximate stationary states of the Gross-Pitaevskii equation
in an infinite square well with a central delta barrier."""

from .elliptic import complete_E, complete_K, jacobi, jacobi_epsilon
from .exact_states import (
    BelowBifurcationError,
    ExactState,
    SideParams,
    continuation_sweep,
    energy_per_particle,
    evaluate,
    solve,
    solve_antisym_attractive,
    solve_antisym_repulsive,
    solve_asym_attractive,
    solve_asym_repulsive,
    solve_sym_attractive,
    solve_sym_repulsive,
)
from .linear_modes import LinearMode, TwoModeModel, basis, overlaps, symmetric_k
from .newton import SolverError
from .stability import StabilitySpectrum, bdg_spectrum

__version__ = "0.1.0"
