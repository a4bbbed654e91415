"""CSV and manifest readers/writers for all run artifacts.

All CSVs are comma-separated with a header row, '.' decimal separator,
and floats written with 17 significant digits (full double precision).
Manifests are flat key=value text files, keys sorted for byte stability.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .fitting import FitResult
from .grid import Grid, SpinorField
from .observables import CoherenceSeries, DensitySnapshot

__all__ = [
    "SERIES_COLUMNS",
    "SNAPSHOT_COLUMNS",
    "FIELD_COLUMNS",
    "FIT_COLUMNS",
    "SWEEP_COLUMNS",
    "write_series_csv",
    "read_series_csv",
    "write_snapshots_csv",
    "write_field_csv",
    "read_field_csv",
    "write_compare_csv",
    "read_compare_csv",
    "write_fit_csv",
    "write_peaks_csv",
    "write_sweep_csv",
    "read_sweep_csv",
    "write_manifest",
    "read_manifest",
]

SERIES_COLUMNS = [
    "t",
    "re_rho_rg",
    "im_rho_rg",
    "abs_rho_rg",
    "pop_r",
    "pop_g",
    "norm_total",
    "boundary_leak",
]
SNAPSHOT_COLUMNS = ["t", "x", "dens_g", "dens_r"]
COMPARE_COLUMNS = ["t", "re_numeric", "im_numeric", "re_analytic", "im_analytic"]
FIELD_COLUMNS = ["x", "re_psi_r", "im_psi_r", "re_psi_g", "im_psi_g"]
FIT_COLUMNS = ["gamma_perp", "amplitude", "r_squared", "exponential_flag", "n_peaks", "floor_used"]
PEAK_COLUMNS = ["t_peak", "value"]
SWEEP_COLUMNS = [
    "detuning_ratio",
    "xi_ratio",
    "gamma_perp_numeric",
    "gamma_perp_analytic",
    "rel_deviation",
    "exponential_flag",
    "r_squared",
    "n_peaks",
    "status",
]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _write_rows(path: str | Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])


def write_series_csv(path: str | Path, series: CoherenceSeries) -> None:
    rows = zip(
        series.times,
        series.rho_rg.real,
        series.rho_rg.imag,
        np.abs(series.rho_rg),
        series.pop_r,
        series.pop_g,
        series.norm_total,
        series.boundary_leak,
    )
    _write_rows(path, SERIES_COLUMNS, rows)


def read_series_csv(path: str | Path) -> CoherenceSeries:
    data = _read_columns(path, SERIES_COLUMNS)
    return CoherenceSeries(
        times=data["t"],
        rho_rg=data["re_rho_rg"] + 1j * data["im_rho_rg"],
        pop_r=data["pop_r"],
        pop_g=data["pop_g"],
        norm_total=data["norm_total"],
        boundary_leak=data["boundary_leak"],
    )


def _read_columns(path: str | Path, expected: list[str]) -> dict[str, np.ndarray]:
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != expected:
            raise ValueError(f"{path}: expected columns {expected}, found {header}")
        raw = list(reader)
    columns = {name: np.empty(len(raw)) for name in expected}
    for i, row in enumerate(raw):
        for name, cell in zip(expected, row):
            columns[name][i] = float(cell)
    return columns


def write_snapshots_csv(path: str | Path, snapshots: list[DensitySnapshot], grid: Grid) -> None:
    def rows():
        for snap in snapshots:
            for x, dens_g, dens_r in zip(grid.x, snap.dens_g, snap.dens_r):
                yield (snap.t, x, dens_g, dens_r)

    _write_rows(path, SNAPSHOT_COLUMNS, rows())


def write_field_csv(path: str | Path, grid: Grid, field: SpinorField) -> None:
    rows = zip(
        grid.x,
        field.psi_r.real,
        field.psi_r.imag,
        field.psi_g.real,
        field.psi_g.imag,
    )
    _write_rows(path, FIELD_COLUMNS, rows)


def read_field_csv(path: str | Path) -> tuple[np.ndarray, SpinorField]:
    data = _read_columns(path, FIELD_COLUMNS)
    field = SpinorField(
        psi_r=data["re_psi_r"] + 1j * data["im_psi_r"],
        psi_g=data["re_psi_g"] + 1j * data["im_psi_g"],
    )
    return data["x"], field


def write_compare_csv(path: str | Path, times, numeric, analytic) -> None:
    rows = zip(times, numeric.real, numeric.imag, analytic.real, analytic.imag)
    _write_rows(path, COMPARE_COLUMNS, rows)


def read_compare_csv(path: str | Path) -> dict[str, np.ndarray]:
    return _read_columns(path, COMPARE_COLUMNS)


def write_fit_csv(path: str | Path, fit: FitResult) -> None:
    row = [
        fit.gamma_perp,
        fit.amplitude,
        fit.r_squared,
        fit.exponential_flag,
        fit.n_peaks,
        fit.floor_used,
    ]
    _write_rows(path, FIT_COLUMNS, [row])


def write_peaks_csv(path: str | Path, peaks: list[tuple[float, float]]) -> None:
    _write_rows(path, PEAK_COLUMNS, peaks)


def write_sweep_csv(path: str | Path, rows: list[dict]) -> None:
    _write_rows(path, SWEEP_COLUMNS, ([row[col] for col in SWEEP_COLUMNS] for row in rows))


def read_sweep_csv(path: str | Path) -> list[dict]:
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != SWEEP_COLUMNS:
            raise ValueError(f"{path}: expected columns {SWEEP_COLUMNS}, found {reader.fieldnames}")
        return list(reader)


def write_manifest(path: str | Path, entries: dict) -> None:
    lines = [f"{key}={_fmt(entries[key])}" for key in sorted(entries)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_manifest(path: str | Path) -> dict[str, str]:
    result = {}
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition("=")
        result[key] = value
    return result
