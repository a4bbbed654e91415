"""Motional dephasing of a laser-driven two-level atom in the power-law
potential of a pinned excited neighbor: split-step spectral simulation,
closed-form perturbative rate, and rate extraction from coherence decay."""

__version__ = "0.1.0"

from .analytic import (
    PerturbativeCoherence,
    closed_form_coherence,
    first_order,
    k_integral_coherence,
    peak_times,
    zeroth_order,
)
from .evolution import (
    PropagatorConfig,
    SimulationResult,
    kinetic_half_step,
    potential_step,
    run,
    step,
)
from .fitting import FitResult, find_peaks, fit_exponential, fit_series
from .grid import Grid, SpinorField, initial_state, make_grid
from .observables import (
    CoherenceSeries,
    DensitySnapshot,
    boundary_leak,
    center_of_mass,
    coherence,
    density_snapshot,
    populations,
    total_norm,
)
from .params import ModelParams, dephasing_rate, facilitation_distance, potential

__all__ = [
    "__version__",
    "ModelParams",
    "facilitation_distance",
    "potential",
    "dephasing_rate",
    "Grid",
    "SpinorField",
    "make_grid",
    "initial_state",
    "PropagatorConfig",
    "SimulationResult",
    "kinetic_half_step",
    "potential_step",
    "step",
    "run",
    "CoherenceSeries",
    "DensitySnapshot",
    "coherence",
    "populations",
    "total_norm",
    "boundary_leak",
    "density_snapshot",
    "center_of_mass",
    "PerturbativeCoherence",
    "zeroth_order",
    "first_order",
    "closed_form_coherence",
    "k_integral_coherence",
    "peak_times",
    "FitResult",
    "find_peaks",
    "fit_exponential",
    "fit_series",
]
