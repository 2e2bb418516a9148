"""Run configuration for the CLI: JSON (de)serialization plus validation.

The accepted document shape, with units, is described in
``config_schema.json`` next to this module.  Command-line flags override
config fields.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .cavity import CavityParams
from .protocols import ProtocolSpec


class ConfigError(ValueError):
    """Invalid or missing configuration input (CLI exit code 2)."""


@dataclass(frozen=True)
class SweepGrid:
    g_over_kappa: tuple[float, float]
    g_over_gamma: tuple[float, float]
    steps: int

    def __post_init__(self) -> None:
        for name in ("g_over_kappa", "g_over_gamma"):
            lo, hi = getattr(self, name)
            if lo <= 0 or hi <= 0:
                raise ConfigError(f"sweep range {name} must be positive")
            if hi < lo:
                raise ConfigError(f"sweep range {name} must be ordered low, high")
        if self.steps < 2:
            raise ConfigError("sweep steps must be >= 2")


@dataclass(frozen=True)
class OutputSpec:
    path: str | None = None
    format: str | None = None   # None: command default (json for run, csv for tables)

    def __post_init__(self) -> None:
        if self.format not in (None, "csv", "json"):
            raise ConfigError(f"unknown output format {self.format!r}")


@dataclass(frozen=True)
class RunConfig:
    protocol: ProtocolSpec | None = None
    sweep: SweepGrid | None = None
    trials: int = 1
    seed: int | None = None
    output: OutputSpec = field(default_factory=OutputSpec)

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")


def _check_keys(section: str, data: dict, allowed: set[str]) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown {section} keys: {sorted(unknown)}")


def _protocol_from_dict(data: dict) -> ProtocolSpec:
    _check_keys(
        "protocol",
        data,
        {"n_photons", "max_iterations", "gate_mode", "homodyne_mode", "params", "theta", "alpha", "standardize_flipped"},
    )
    if "n_photons" not in data:
        raise ConfigError("protocol.n_photons is required")
    kwargs = dict(data)
    params = kwargs.pop("params", None)
    try:
        if params is not None:
            _check_keys("params", params, {"g", "kappa", "gamma", "omega_c", "omega_0", "omega_p"})
            kwargs["params"] = CavityParams(**params)
        return ProtocolSpec(**kwargs)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"invalid protocol section: {err}") from err


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config document must be a JSON object")
    _check_keys("config", data, {"protocol", "sweep", "trials", "seed", "output"})
    protocol = _protocol_from_dict(data["protocol"]) if data.get("protocol") is not None else None
    sweep = None
    if data.get("sweep") is not None:
        sweep_data = data["sweep"]
        _check_keys("sweep", sweep_data, {"g_over_kappa", "g_over_gamma", "steps"})
        try:
            sweep = SweepGrid(
                tuple(float(x) for x in sweep_data["g_over_kappa"]),
                tuple(float(x) for x in sweep_data["g_over_gamma"]),
                int(sweep_data["steps"]),
            )
        except (KeyError, TypeError) as err:
            raise ConfigError(f"invalid sweep section: {err}") from err
    output = OutputSpec(**data["output"]) if data.get("output") is not None else OutputSpec()
    seed = data.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise ConfigError("seed must be an integer")
    return RunConfig(protocol=protocol, sweep=sweep, trials=int(data.get("trials", 1)), seed=seed, output=output)


def config_to_dict(config: RunConfig) -> dict:
    out: dict = {
        "protocol": None,
        "sweep": None,
        "trials": config.trials,
        "seed": config.seed,
        "output": {"path": config.output.path, "format": config.output.format},
    }
    if config.protocol is not None:
        p = config.protocol
        out["protocol"] = {
            "n_photons": p.n_photons,
            "max_iterations": p.max_iterations,
            "gate_mode": p.gate_mode,
            "homodyne_mode": p.homodyne_mode,
            "params": asdict(p.params),
            "theta": p.theta,
            "alpha": p.alpha,
            "standardize_flipped": p.standardize_flipped,
        }
    if config.sweep is not None:
        out["sweep"] = {
            "g_over_kappa": list(config.sweep.g_over_kappa),
            "g_over_gamma": list(config.sweep.g_over_gamma),
            "steps": config.sweep.steps,
        }
    return out


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config: {err}") from err
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"malformed config JSON: {err}") from err
    return config_from_dict(data)


def schema_path() -> Path:
    return Path(__file__).with_name("config_schema.json")
