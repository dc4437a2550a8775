"""Run configuration: a TOML file plus one environment override."""

from __future__ import annotations

import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .core import ConfigError

FIXTURE_DIR_ENV = "CARBON_PULSE_FIXTURES"

DEFAULT_SECTOR_TOGGLES = {
    "power": True,
    "industry": True,
    "ground_transport": True,
    "residential": True,
    "aviation": True,
    "shipping": True,
    "uncertainty": True,
}


@dataclass
class TemperatureAdjustmentConfig:
    start: date
    end: date
    factor: float


@dataclass
class RunConfig:
    fixture_dir: Path
    output_dir: Path
    window_start: date
    window_end: date
    countries: list[str] | str = "all"
    seed: int = 42
    mc_trials: int = 10000
    threads: int = 1
    sectors: dict[str, bool] = field(default_factory=lambda: dict(DEFAULT_SECTOR_TOGGLES))
    thermal_categories: dict[str, list[str]] = field(default_factory=dict)
    use_total_generation: list[str] = field(default_factory=list)
    excluded_power_countries: list[str] = field(default_factory=list)
    temp_adjustment: TemperatureAdjustmentConfig | None = None
    shipping_annual_mt_2019: float = 0.0
    shipping_international_share: float = 0.87
    hdd_base_c: float = 18.0
    nox_shares: dict[str, float] = field(default_factory=dict)
    deterministic_manifest: bool = False

    def validate(self) -> None:
        if self.window_start > self.window_end:
            raise ConfigError(f"window start {self.window_start} after end {self.window_end}")
        if self.sectors.get("uncertainty", False) and self.mc_trials < 1000:
            raise ConfigError(f"mc_trials must be at least 1000 when uncertainty is enabled, got {self.mc_trials}")
        if self.threads < 1:
            raise ConfigError(f"threads must be positive, got {self.threads}")

    def config_hash(self) -> str:
        """Hash of the semantic configuration.

        Filesystem locations and the thread count stay out of the hash: the
        same inputs staged elsewhere or scheduled differently must still
        produce byte-identical outputs, and the manifest's fixture checksums
        already pin the input content.
        """
        excluded = ("fixture_dir", "output_dir", "threads")
        payload = {k: v for k, v in _jsonable(self).items() if k not in excluded}  # type: ignore[union-attr]
        canonical = json.dumps(payload, sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _jsonable(obj: object) -> object:
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, date):
        return obj.isoformat()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "__dict__"):
        return {k: _jsonable(v) for k, v in vars(obj).items()}
    raise ConfigError(f"cannot serialize config value {obj!r}")


def _require(raw: dict, key: str) -> object:
    if key not in raw:
        raise ConfigError(f"missing config key: {key}")
    return raw[key]


def _as_date(value: object, key: str) -> date:
    if isinstance(value, date):
        return value
    if isinstance(value, str):
        try:
            return date.fromisoformat(value)
        except ValueError:
            pass
    raise ConfigError(f"{key} must be a date, got {value!r}")


def load_config(path: Path) -> RunConfig:
    """Parse a run-config file; CARBON_PULSE_FIXTURES overrides fixture_dir."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None

    fixture_dir = Path(os.environ.get(FIXTURE_DIR_ENV) or str(_require(raw, "fixture_dir")))
    if not fixture_dir.is_absolute():
        fixture_dir = path.parent / fixture_dir
    output_dir = Path(str(_require(raw, "output_dir")))
    if not output_dir.is_absolute():
        output_dir = path.parent / output_dir

    sectors = dict(DEFAULT_SECTOR_TOGGLES)
    for name, enabled in raw.get("sectors", {}).items():
        if name not in sectors:
            raise ConfigError(f"unknown sector toggle: {name}")
        sectors[name] = bool(enabled)

    power = raw.get("power", {})
    adj = None
    if "temp_adjustment" in power:
        block = power["temp_adjustment"]
        adj = TemperatureAdjustmentConfig(
            start=_as_date(_require(block, "start"), "power.temp_adjustment.start"),
            end=_as_date(_require(block, "end"), "power.temp_adjustment.end"),
            factor=float(_require(block, "factor")),
        )

    shipping = raw.get("shipping", {})
    residential = raw.get("residential", {})

    config = RunConfig(
        fixture_dir=fixture_dir,
        output_dir=output_dir,
        window_start=_as_date(_require(raw, "window_start"), "window_start"),
        window_end=_as_date(_require(raw, "window_end"), "window_end"),
        countries=raw.get("countries", "all"),
        seed=int(raw.get("seed", 42)),
        mc_trials=int(raw.get("mc_trials", 10000)),
        threads=int(raw.get("threads", 1)),
        sectors=sectors,
        thermal_categories={k: list(v) for k, v in power.get("thermal_categories", {}).items()},
        use_total_generation=list(power.get("use_total_generation", [])),
        excluded_power_countries=list(power.get("excluded_countries", [])),
        temp_adjustment=adj,
        shipping_annual_mt_2019=float(shipping.get("annual_mt_2019", 0.0)),
        shipping_international_share=float(shipping.get("international_share", 0.87)),
        hdd_base_c=float(residential.get("hdd_base_c", 18.0)),
        nox_shares={k: float(v) for k, v in raw.get("nox_shares", {}).items()},
        deterministic_manifest=bool(raw.get("deterministic_manifest", False)),
    )
    config.validate()
    return config
