"""Dimensionless parameterization of the driven atom near a pinned neighbor.

Everything in this package runs in internal units: time in 1/Omega, length
in units of the facilitation distance x_f, energy in units of Omega
(hbar = 1). Four ratios fix the physics:

    detuning_ratio = Delta / Omega
    sigma_ratio    = sigma / x_f      (initial Gaussian width)
    xi_ratio       = xi / Omega,  xi = 1 / (2 m x_f^2)
    nu             = integer exponent of the repulsive power-law potential

A dimensional potential coefficient c_nu may be supplied to recover the
dimensional facilitation distance at the boundary; it never enters the
internal computation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModelParams",
    "ParameterError",
    "facilitation_distance",
    "potential",
    "dephasing_rate",
]

# sigma/x_f above this value leaves the regime where the linearized model
# is trustworthy; runs proceed, the analytic comparison is merely flagged.
SIGMA_RATIO_WARN = 0.2


class ParameterError(ValueError):
    """Invalid physical parameter or parameter combination."""


def facilitation_distance(c_nu: float, detuning: float, nu: int) -> float:
    """Distance x_f = (c_nu/detuning)^(1/nu) where the potential shift
    cancels the detuning, i.e. c_nu/x_f^nu - detuning = 0 exactly."""
    if c_nu <= 0.0:
        raise ParameterError(f"potential coefficient must be positive, got {c_nu}")
    if detuning <= 0.0:
        raise ParameterError(f"detuning must be positive, got {detuning}")
    if nu < 1:
        raise ParameterError(f"potential exponent must be >= 1, got {nu}")
    return float((c_nu / detuning) ** (1.0 / nu))


@dataclass(frozen=True)
class ModelParams:
    """Immutable physical inputs; all derived quantities are recomputed on
    demand, never stored.

    ``free_rabi`` enables the coupling-only test mode: the potential is
    identically zero (which in internal units is exactly the statement
    detuning_ratio == 0, where x_f would otherwise be ill-defined).
    """

    detuning_ratio: float
    nu: int = 6
    sigma_ratio: float = 0.05
    xi_ratio: float = 0.0
    c_nu: float | None = None
    free_rabi: bool = False
    rabi: float = 1.0

    def __post_init__(self) -> None:
        if self.rabi != 1.0:
            raise ParameterError(
                "rabi sets the internal time unit and is fixed to 1; "
                "express detuning, xi and time as ratios to Omega"
            )
        if int(self.nu) != self.nu or self.nu < 1:
            raise ParameterError(f"nu must be an integer >= 1, got {self.nu}")
        if not 0.0 < self.sigma_ratio < 1.0:
            raise ParameterError(
                f"sigma_ratio must lie in (0, 1), got {self.sigma_ratio}; "
                "the perturbative treatment assumes sigma << x_f"
            )
        if self.xi_ratio < 0.0:
            raise ParameterError(f"xi_ratio must be >= 0, got {self.xi_ratio}")
        if self.free_rabi:
            if self.detuning_ratio != 0.0:
                raise ParameterError(
                    "free_rabi mode zeroes the potential; detuning_ratio must be 0"
                )
        elif self.detuning_ratio == 0.0:
            raise ParameterError(
                "detuning_ratio = 0 leaves x_f undefined; "
                "use free_rabi=True for the coupling-only test mode"
            )
        if self.c_nu is not None and self.c_nu <= 0.0:
            raise ParameterError(f"c_nu must be positive, got {self.c_nu}")
        for message in self.perturbative_warnings():
            warnings.warn(message, stacklevel=2)

    @property
    def x_f(self) -> float:
        """Facilitation distance: 1 in internal units, dimensional when a
        raw potential coefficient was supplied."""
        if self.c_nu is None:
            return 1.0
        return facilitation_distance(self.c_nu, self.detuning_ratio * self.rabi, self.nu)

    def perturbative_warnings(self) -> list[str]:
        """Heuristic validity checks of the linearized short-time model.

        Violations do not invalidate the simulation, only the analytic
        comparison; callers record them in run manifests.
        """
        notes = []
        if self.sigma_ratio > SIGMA_RATIO_WARN:
            notes.append(
                f"sigma_ratio = {self.sigma_ratio:g} is not small compared to 1; "
                "the perturbative rate assumes sigma << x_f"
            )
        if not self.free_rabi:
            window = 1.0 / (self.nu * abs(self.detuning_ratio))
            if 2.0 * self.sigma_ratio > window:
                notes.append(
                    f"packet extent 2*sigma_ratio = {2 * self.sigma_ratio:g} exceeds the "
                    f"linearization window 1/(nu*|detuning_ratio|) = {window:g}; "
                    "analytic comparison is unreliable"
                )
        return notes


def potential(x, params: ModelParams):
    """Total potential on the excited component, in units of Omega:
    U(x)/Omega = (Delta/Omega) * ((x_f/x)^nu - 1) with x in units of x_f.

    Zero at x = 1 (the facilitation distance), -Delta/Omega as x -> inf.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise ParameterError("potential is undefined for x <= 0")
    u = params.detuning_ratio * (arr ** (-float(params.nu)) - 1.0)
    return float(u) if np.ndim(x) == 0 else u


def dephasing_rate(params: ModelParams) -> float:
    """Closed-form perturbative decay rate of the coherence maxima,
    in units of Omega:

        gamma/Omega = (nu^2/8) (Delta/Omega)^2 (sigma/x_f)^2
                      * [1 + (x_f/sigma)^4 (xi/Omega)^2]
    """
    s2 = params.sigma_ratio**2
    bracket = 1.0 + params.xi_ratio**2 / (s2 * s2)
    return (params.nu**2 / 8.0) * params.detuning_ratio**2 * s2 * bracket
