"""Flat key=value configuration files for runs and parameter sweeps.

Unknown keys are a hard error: sweep configs are easy to typo and a
silently ignored key would change the physics. Lines starting with '#'
and blank lines are skipped; values may not contain '='.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from .evolution import PropagatorConfig
from .grid import Grid, make_grid
from .params import ModelParams, ParameterError

__all__ = [
    "ConfigError",
    "RunSetup",
    "SweepSpec",
    "read_key_values",
    "load_run_config",
    "load_sweep_config",
]

PAPER_SCALE_N_POINTS = 2**17

GRID_DEFAULTS = {"n_points": 2**14, "x_min": 0.1, "x_max": 10.5}

_PARAM_KEYS = {"detuning_ratio", "nu", "sigma_ratio", "xi_ratio", "c_nu", "free_rabi"}
_GRID_KEYS = {"n_points", "x_min", "x_max"}
_PROP_KEYS = {"dt", "t_final", "record_stride", "snapshot_stride", "absorber_enabled"}

RUN_KEYS = _PARAM_KEYS | _GRID_KEYS | _PROP_KEYS
SWEEP_KEYS = (RUN_KEYS - {"detuning_ratio", "xi_ratio", "c_nu", "free_rabi"}) | {
    "detuning_ratios",
    "xi_ratios",
}


class ConfigError(Exception):
    """Malformed, incomplete, or physically invalid configuration."""


def read_key_values(path: str | Path) -> dict[str, str]:
    """Parse a flat key=value file; duplicate keys are an error."""
    result: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in result:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        result[key] = value
    return result


def _check_keys(raw: dict[str, str], allowed: set[str], path) -> None:
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown config key(s): {', '.join(unknown)}")


def _require(raw: dict[str, str], key: str, path) -> str:
    if key not in raw:
        raise ConfigError(f"{path}: missing required config key {key!r}")
    return raw[key]


def _as_float(value: str, key: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"config key {key!r}: expected a number, got {value!r}") from None


def _as_int(value: str, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"config key {key!r}: expected an integer, got {value!r}") from None


def _as_bool(value: str, key: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"config key {key!r}: expected true/false, got {value!r}")


def _as_float_list(value: str, key: str) -> list[float]:
    items = [part.strip() for part in value.split(",") if part.strip()]
    values = [_as_float(part, key) for part in items]
    if len(set(values)) != len(values):
        raise ConfigError(f"config key {key!r}: duplicate entries make sweep jobs ambiguous")
    return values


def _propagator_from(raw: dict[str, str]) -> PropagatorConfig:
    defaults = PropagatorConfig()
    try:
        return PropagatorConfig(
            dt=_as_float(raw["dt"], "dt") if "dt" in raw else defaults.dt,
            t_final=_as_float(raw["t_final"], "t_final") if "t_final" in raw else defaults.t_final,
            record_stride=_as_int(raw["record_stride"], "record_stride")
            if "record_stride" in raw
            else defaults.record_stride,
            snapshot_stride=_as_int(raw["snapshot_stride"], "snapshot_stride")
            if "snapshot_stride" in raw
            else defaults.snapshot_stride,
            absorber_enabled=_as_bool(raw["absorber_enabled"], "absorber_enabled")
            if "absorber_enabled" in raw
            else defaults.absorber_enabled,
        )
    except ValueError as exc:
        raise ConfigError(f"invalid propagation settings: {exc}") from None


def _grid_args_from(raw: dict[str, str]) -> dict:
    return {
        "n_points": _as_int(raw["n_points"], "n_points")
        if "n_points" in raw
        else GRID_DEFAULTS["n_points"],
        "x_min": _as_float(raw["x_min"], "x_min") if "x_min" in raw else GRID_DEFAULTS["x_min"],
        "x_max": _as_float(raw["x_max"], "x_max") if "x_max" in raw else GRID_DEFAULTS["x_max"],
    }


@dataclass(frozen=True)
class RunSetup:
    """Everything needed to reproduce one simulation run."""

    params: ModelParams
    n_points: int
    x_min: float
    x_max: float
    propagator: PropagatorConfig

    def build_grid(self, paper_scale: bool = False) -> Grid:
        n = PAPER_SCALE_N_POINTS if paper_scale else self.n_points
        return make_grid(n, self.x_min, self.x_max)

    def manifest_entries(self) -> dict[str, object]:
        entries: dict[str, object] = {
            "detuning_ratio": self.params.detuning_ratio,
            "nu": self.params.nu,
            "sigma_ratio": self.params.sigma_ratio,
            "xi_ratio": self.params.xi_ratio,
            "free_rabi": self.params.free_rabi,
            "n_points": self.n_points,
            "x_min": self.x_min,
            "x_max": self.x_max,
            "dt": self.propagator.dt,
            "t_final": self.propagator.t_final,
            "record_stride": self.propagator.record_stride,
            "snapshot_stride": self.propagator.snapshot_stride,
            "absorber_enabled": self.propagator.absorber_enabled,
        }
        if self.params.c_nu is not None:
            entries["c_nu"] = self.params.c_nu
        return entries


def load_run_config(path: str | Path) -> RunSetup:
    raw = read_key_values(path)
    _check_keys(raw, RUN_KEYS, path)
    free_rabi = _as_bool(raw["free_rabi"], "free_rabi") if "free_rabi" in raw else False
    if free_rabi:
        detuning = _as_float(raw["detuning_ratio"], "detuning_ratio") if "detuning_ratio" in raw else 0.0
    else:
        detuning = _as_float(_require(raw, "detuning_ratio", path), "detuning_ratio")
    try:
        params = ModelParams(
            detuning_ratio=detuning,
            nu=_as_int(_require(raw, "nu", path), "nu"),
            sigma_ratio=_as_float(_require(raw, "sigma_ratio", path), "sigma_ratio"),
            xi_ratio=_as_float(_require(raw, "xi_ratio", path), "xi_ratio"),
            c_nu=_as_float(raw["c_nu"], "c_nu") if "c_nu" in raw else None,
            free_rabi=free_rabi,
        )
    except ParameterError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return RunSetup(params=params, propagator=_propagator_from(raw), **_grid_args_from(raw))


@dataclass(frozen=True)
class SweepSpec:
    """Cartesian sweep over detuning and kinetic-scale ratios around a
    fixed parameter template."""

    detuning_ratios: tuple[float, ...]
    xi_ratios: tuple[float, ...]
    base: RunSetup

    def jobs(self) -> list[RunSetup]:
        """One RunSetup per grid point, ordered by (detuning, xi)."""
        out = []
        for detuning in sorted(self.detuning_ratios):
            for xi in sorted(self.xi_ratios):
                params = replace(self.base.params, detuning_ratio=detuning, xi_ratio=xi)
                out.append(replace(self.base, params=params))
        return out


def load_sweep_config(path: str | Path) -> SweepSpec:
    raw = read_key_values(path)
    _check_keys(raw, SWEEP_KEYS, path)
    detunings = _as_float_list(_require(raw, "detuning_ratios", path), "detuning_ratios")
    xis = _as_float_list(_require(raw, "xi_ratios", path), "xi_ratios")
    try:
        template = ModelParams(
            detuning_ratio=detunings[0] if detunings else 1.0,
            nu=_as_int(_require(raw, "nu", path), "nu"),
            sigma_ratio=_as_float(_require(raw, "sigma_ratio", path), "sigma_ratio"),
            xi_ratio=xis[0] if xis else 0.0,
        )
    except ParameterError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    base = RunSetup(params=template, propagator=_propagator_from(raw), **_grid_args_from(raw))
    spec = SweepSpec(detuning_ratios=tuple(detunings), xi_ratios=tuple(xis), base=base)
    try:
        spec.jobs()
    except ParameterError as exc:
        raise ConfigError(f"{path}: invalid sweep point: {exc}") from None
    return spec
