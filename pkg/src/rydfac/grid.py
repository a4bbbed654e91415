"""Uniform periodic grid, spectral helpers, and the initial two-component state."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import ModelParams

__all__ = ["Grid", "GridError", "SpinorField", "make_grid", "initial_state"]

# squared-amplitude fraction of the Gaussian peak that may touch a boundary
BOUNDARY_TAIL_LIMIT = 1e-12


class GridError(ValueError):
    """Grid construction or resolution failure."""


@dataclass(frozen=True)
class Grid:
    """Endpoint-exclusive uniform grid on [x_min, x_max) with the matching
    discrete-Fourier wavenumbers k_j = 2 pi j / (x_max - x_min)."""

    n_points: int
    x_min: float
    x_max: float
    dx: float
    x: np.ndarray
    k: np.ndarray

    @property
    def length(self) -> float:
        return self.x_max - self.x_min


def make_grid(n_points: int, x_min: float, x_max: float) -> Grid:
    """Build a grid; n_points must be a power of two >= 256 and x_min > 0
    (the power-law potential is singular at the origin)."""
    if n_points < 256 or (n_points & (n_points - 1)) != 0:
        raise GridError(f"n_points must be a power of two >= 256, got {n_points}")
    if not 0.0 < x_min < x_max:
        raise GridError(f"need 0 < x_min < x_max, got [{x_min}, {x_max}]")
    dx = (x_max - x_min) / n_points
    x = x_min + dx * np.arange(n_points)
    k = 2.0 * math.pi * np.fft.fftfreq(n_points, d=dx)
    x.setflags(write=False)
    k.setflags(write=False)
    return Grid(n_points=n_points, x_min=x_min, x_max=x_max, dx=dx, x=x, k=k)


def to_wavenumber(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Forward spectral transform with density normalization, so that
    sum |psi_k|^2 dk equals sum |psi|^2 dx (discrete Parseval)."""
    return np.fft.fft(values) * (grid.dx / math.sqrt(2.0 * math.pi))


def to_position(values_k: np.ndarray, grid: Grid) -> np.ndarray:
    """Inverse of :func:`to_wavenumber`."""
    return np.fft.ifft(values_k) * (math.sqrt(2.0 * math.pi) / grid.dx)


@dataclass
class SpinorField:
    """Complex amplitudes of the excited (psi_r) and ground (psi_g)
    components on a common grid. Mutable; owned by one propagation loop
    at a time, observers receive copies."""

    psi_r: np.ndarray
    psi_g: np.ndarray

    def __post_init__(self) -> None:
        if self.psi_r.shape != self.psi_g.shape or self.psi_r.ndim != 1:
            raise GridError("spinor components must be 1D arrays of equal length")

    def copy(self) -> "SpinorField":
        return SpinorField(self.psi_r.copy(), self.psi_g.copy())


def initial_state(grid: Grid, params: ModelParams) -> SpinorField:
    """Ground-state Gaussian of width sigma centred on the facilitation
    distance (x = 1 in internal units), excited component empty:

        psi_g(x) = (pi sigma^2)^(-1/4) exp(-(x-1)^2 / (2 sigma^2))

    then discretely renormalized so the total norm is exactly 1.
    """
    sigma = params.sigma_ratio
    if grid.dx >= sigma / 4.0:
        raise GridError(
            f"grid spacing dx = {grid.dx:g} does not resolve the initial width "
            f"sigma = {sigma:g}; need dx < sigma/4"
        )
    center = 1.0
    for edge in (grid.x_min, grid.x_max):
        tail = math.exp(-((edge - center) ** 2) / sigma**2)
        if tail >= BOUNDARY_TAIL_LIMIT:
            raise GridError(
                f"initial Gaussian overlaps the boundary at x = {edge:g}: "
                f"|psi|^2 there is {tail:.3g} of the peak (limit {BOUNDARY_TAIL_LIMIT:g})"
            )
    psi_g = (math.pi * sigma**2) ** (-0.25) * np.exp(
        -((grid.x - center) ** 2) / (2.0 * sigma**2)
    )
    psi_g = psi_g.astype(complex)
    norm = math.sqrt(np.sum(np.abs(psi_g) ** 2).item() * grid.dx)
    psi_g /= norm
    return SpinorField(psi_r=np.zeros(grid.n_points, dtype=complex), psi_g=psi_g)
