"""Physical observables of a spinor field and their time-series container."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, SpinorField

__all__ = [
    "CoherenceSeries",
    "DensitySnapshot",
    "coherence",
    "populations",
    "total_norm",
    "boundary_leak",
    "density_snapshot",
    "center_of_mass",
]

# fraction of the domain length counted as "near the boundary" by the leak monitor
EDGE_FRACTION = 0.05


def coherence(field: SpinorField, grid: Grid) -> complex:
    """Internal-state coherence: the overlap integral of the two components,
    sum psi_r* psi_g dx on the grid."""
    return complex(np.vdot(field.psi_r, field.psi_g) * grid.dx)


def populations(field: SpinorField, grid: Grid) -> tuple[float, float]:
    """(excited, ground) populations: integrals of the component densities."""
    pop_r = float(np.sum(np.abs(field.psi_r) ** 2) * grid.dx)
    pop_g = float(np.sum(np.abs(field.psi_g) ** 2) * grid.dx)
    return pop_r, pop_g


def total_norm(field: SpinorField, grid: Grid) -> float:
    pop_r, pop_g = populations(field, grid)
    return pop_r + pop_g


def boundary_leak(field: SpinorField, grid: Grid, edge_fraction: float = EDGE_FRACTION) -> float:
    """Total density within edge_fraction of the domain length of either
    boundary; a proxy for amplitude about to wrap around periodically."""
    width = edge_fraction * grid.length
    mask = (grid.x < grid.x_min + width) | (grid.x >= grid.x_max - width)
    dens = np.abs(field.psi_r[mask]) ** 2 + np.abs(field.psi_g[mask]) ** 2
    return float(np.sum(dens) * grid.dx)


@dataclass
class DensitySnapshot:
    """Component densities at one instant, for space-time density plots."""

    t: float
    dens_r: np.ndarray
    dens_g: np.ndarray


def density_snapshot(field: SpinorField, grid: Grid, t: float) -> DensitySnapshot:
    return DensitySnapshot(
        t=t,
        dens_r=np.abs(field.psi_r) ** 2,
        dens_g=np.abs(field.psi_g) ** 2,
    )


def center_of_mass(density: np.ndarray, grid: Grid) -> float:
    """First moment of a density profile; nan for an empty profile."""
    weight = float(np.sum(density) * grid.dx)
    if weight == 0.0:
        return float("nan")
    return float(np.sum(grid.x * density) * grid.dx / weight)


@dataclass
class CoherenceSeries:
    """Time series of the recorded observables of one propagation run."""

    times: np.ndarray
    rho_rg: np.ndarray
    pop_r: np.ndarray
    pop_g: np.ndarray
    norm_total: np.ndarray
    boundary_leak: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.times)
        for name in ("rho_rg", "pop_r", "pop_g", "norm_total", "boundary_leak"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"series column {name} has mismatched length")
        if n > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("series times must be strictly increasing")
        if not np.allclose(self.pop_r + self.pop_g, self.norm_total, rtol=0, atol=1e-12):
            raise ValueError("populations must sum to the total norm")
        if np.any(self.pop_r < -1e-15) or np.any(self.pop_g < -1e-15):
            raise ValueError("negative population")
        if np.any(self.norm_total > 1.0 + 1e-8):
            raise ValueError("total norm exceeds 1 beyond rounding tolerance")

    def __len__(self) -> int:
        return len(self.times)
