"""Extraction of the dephasing rate from the decay of coherence maxima.

The magnitude of the coherence oscillates; its local maxima are located on
the recorded series, refined by quadratic interpolation through the three
samples around each one, and truncated once they sink to the steady-state
plateau level. The rate fit then uses every other maximum, i.e. the
pi-spaced family t_n = pi/4 + n*pi of the short-time analysis: adjacent
maxima belong to two families whose second-order short-time corrections
carry opposite signs, and mixing the families puts a sawtooth on the
log-envelope that masks an otherwise clean exponential. A single
exponential is fitted to the kept maxima in log space; an r^2 threshold
operationalizes the "decays exponentially to a reasonable degree"
judgement, and fits below it are flagged non-exponential ('hollow').
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks as _scipy_find_peaks

from .observables import CoherenceSeries

__all__ = [
    "FitResult",
    "FitError",
    "InsufficientDataError",
    "signal_peaks",
    "find_peaks",
    "steady_state_floor",
    "applied_floor",
    "fit_exponential",
    "fit_series",
]

# minimum sampling of the oscillation: ten samples per half-period
MAX_SAMPLE_SPACING = math.pi / 20.0
MIN_PEAKS = 3
R_SQUARED_THRESHOLD = 0.99
FLOOR_FACTOR = 1.05
FLOOR_WINDOW_FRACTION = 0.1
# the floor only engages once the envelope has visibly decayed; an
# undamped series (tail maxima at the initial level) keeps all its peaks
NO_DECAY_FRACTION = 0.9


class FitError(RuntimeError):
    """Peak extraction or exponential fit failure."""


class InsufficientDataError(FitError):
    """Fewer usable peaks than required for a fit."""


@dataclass
class FitResult:
    gamma_perp: float
    amplitude: float
    r_squared: float
    exponential_flag: bool
    peaks: list[tuple[float, float]]
    n_peaks: int
    floor_used: float = float("nan")


def _refine(times: np.ndarray, values: np.ndarray, idx: int) -> tuple[float, float]:
    """Vertex of the parabola through the three samples around a discrete
    maximum; falls back to the raw sample if the triple is not concave."""
    t3 = times[idx - 1 : idx + 2]
    v3 = values[idx - 1 : idx + 2]
    a, b, c = np.polyfit(t3, v3, 2)
    if a >= 0.0:
        return float(times[idx]), float(values[idx])
    t_peak = -b / (2.0 * a)
    v_peak = c - b * b / (4.0 * a)
    return float(t_peak), float(v_peak)


def signal_peaks(times: np.ndarray, values: np.ndarray, floor: float = 0.0) -> list[tuple[float, float]]:
    """Refined local maxima of a sampled signal, in time order, truncated
    at the first maximum whose value falls below ``floor``."""
    idx, _ = _scipy_find_peaks(values)
    peaks: list[tuple[float, float]] = []
    for i in idx:
        t_peak, v_peak = _refine(times, values, int(i))
        if v_peak < floor:
            break
        peaks.append((t_peak, v_peak))
    return peaks


def steady_state_floor(series: CoherenceSeries) -> float:
    """Plateau estimate: FLOOR_FACTOR times the level of the coherence
    maxima over the final tenth of the series.

    The level is taken from the tail maxima rather than the plain tail
    mean: at the steady state the coherence magnitude still oscillates
    deeply, so its mean sits far below the maxima and a mean-based floor
    would never exclude plateau peaks from the fit.
    """
    n = len(series)
    tail = max(1, int(round(n * FLOOR_WINDOW_FRACTION)))
    tail_values = np.abs(series.rho_rg[-tail:])
    tail_peaks = signal_peaks(series.times[-tail:], tail_values)
    if tail_peaks:
        level = float(np.mean([v for _, v in tail_peaks]))
    else:
        level = float(np.mean(tail_values))
    return FLOOR_FACTOR * level


def applied_floor(series: CoherenceSeries) -> float:
    """Floor actually used for peak truncation: the steady-state estimate
    when the envelope has decayed below NO_DECAY_FRACTION of its initial
    maximum, zero otherwise (an undamped signal has no plateau to cut)."""
    head = signal_peaks(series.times, np.abs(series.rho_rg))
    if not head:
        return 0.0
    floor = steady_state_floor(series)
    if floor / FLOOR_FACTOR > NO_DECAY_FRACTION * head[0][1]:
        return 0.0
    return floor


def find_peaks(series: CoherenceSeries) -> list[tuple[float, float]]:
    """Locate the coherence maxima of a recorded series, truncated at the
    steady-state floor. Raises InsufficientDataError when fewer than three
    survive."""
    if len(series) < 2 * MIN_PEAKS + 1:
        raise InsufficientDataError(f"series of {len(series)} samples is too short")
    spacing = float(np.max(np.diff(series.times)))
    if spacing > MAX_SAMPLE_SPACING * (1.0 + 1e-12):
        raise FitError(
            f"sample spacing {spacing:g} undersamples the oscillation; "
            f"need <= pi/20 = {MAX_SAMPLE_SPACING:g}"
        )
    floor = applied_floor(series)
    peaks = signal_peaks(series.times, np.abs(series.rho_rg), floor=floor)
    if len(peaks) < MIN_PEAKS:
        raise InsufficientDataError(
            f"found {len(peaks)} usable maxima above the steady-state floor "
            f"{floor:g}; need at least {MIN_PEAKS}"
        )
    return peaks


def fit_exponential(peaks: list[tuple[float, float]], floor_used: float = float("nan")) -> FitResult:
    """Least-squares fit of log(peak value) against time. gamma_perp is
    minus the slope; r^2 of the same regression decides the exponential
    flag. A zero-variance (constant) peak set is a perfect zero-slope fit."""
    if len(peaks) < MIN_PEAKS:
        raise InsufficientDataError(f"need at least {MIN_PEAKS} peaks, got {len(peaks)}")
    t = np.array([p[0] for p in peaks], dtype=float)
    v = np.array([p[1] for p in peaks], dtype=float)
    if np.any(v <= 0.0):
        raise FitError("nonpositive peak value; log-linear fit undefined")
    y = np.log(v)
    slope, intercept = np.polyfit(t, y, 1)
    residuals = y - (slope * t + intercept)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return FitResult(
        gamma_perp=float(-slope),
        amplitude=float(np.exp(intercept)),
        r_squared=r_squared,
        exponential_flag=bool(r_squared >= R_SQUARED_THRESHOLD),
        peaks=[(float(a), float(b)) for a, b in peaks],
        n_peaks=len(peaks),
        floor_used=floor_used,
    )


def fit_series(series: CoherenceSeries) -> FitResult:
    """Full rate-extraction pipeline on a recorded series: steady-state
    floor, maxima, pi-spaced family selection, exponential fit."""
    floor = applied_floor(series)
    peaks = find_peaks(series)
    family = peaks[::2]
    if len(family) < MIN_PEAKS:
        raise InsufficientDataError(
            f"only {len(family)} maxima in the fitted family; need at least {MIN_PEAKS}"
        )
    return fit_exponential(family, floor_used=floor)
