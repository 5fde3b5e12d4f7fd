"""Run configuration documents, CSV output, and run manifests.

Configs are JSON with nested sections mirroring the dataclasses. Parsing is
strict: unknown keys are rejected by name, defaults fill anything omitted,
and dump -> parse round-trips losslessly. Floats are written with
shortest-round-trip precision so repeated runs produce byte-identical
files.
"""
from __future__ import annotations

import dataclasses
import json
import sys
from pathlib import Path
from typing import Any

import numpy as np

from .config import (
    ClimateParams,
    DisasterPenalty,
    NegotiationConfig,
    SimParams,
    VariantConfig,
)
from .errors import ConfigError

EXPERIMENT_NAMES = (
    "episode",
    "sweep",
    "pariah",
    "trade-effect",
    "tariff-effect",
    "horizon",
    "masking-demo",
    "calibrate",
)


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce a run."""

    sim: SimParams
    variant: VariantConfig
    experiment: str = "episode"
    options: dict[str, Any] = dataclasses.field(default_factory=dict)
    seed: int | None = None
    out_dir: str | None = None

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENT_NAMES:
            raise ConfigError(
                f"experiment: unknown experiment {self.experiment!r}; "
                f"expected one of {EXPERIMENT_NAMES}"
            )


def _dataclass_from_dict(cls, data: dict, key_prefix: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{key_prefix}: expected an object, got {type(data).__name__}")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in fields:
            raise ConfigError(f"unknown key: {key_prefix}.{key}" if key_prefix else f"unknown key: {key}")
        path = f"{key_prefix}.{key}" if key_prefix else key
        ftype = fields[key].type
        if key == "climate":
            kwargs[key] = _dataclass_from_dict(ClimateParams, value, path)
        elif key == "negotiation":
            kwargs[key] = _dataclass_from_dict(NegotiationConfig, value, path)
        elif key == "disaster":
            kwargs[key] = None if value is None else _dataclass_from_dict(DisasterPenalty, value, path)
        elif isinstance(value, list):
            kwargs[key] = _tuplify(value)
        else:
            kwargs[key] = value
        del ftype
    try:
        return cls(**kwargs)
    except ConfigError:
        raise
    except TypeError as exc:
        raise ConfigError(f"{key_prefix or cls.__name__}: {exc}") from exc


def _tuplify(value):
    if isinstance(value, list):
        return tuple(_tuplify(v) for v in value)
    return value


def _plain(value):
    """JSON-compatible representation of dataclasses/tuples/numpy scalars."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: _plain(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def config_to_dict(config: RunConfig) -> dict:
    return {
        "sim": _plain(config.sim),
        "variant": _plain(config.variant),
        "experiment": config.experiment,
        "options": _plain(config.options),
        "seed": config.seed,
        "out_dir": config.out_dir,
    }


def parse_config(text: str) -> RunConfig:
    """Parse and validate a config document, applying defaults."""
    try:
        data = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be an object")

    known = {"sim", "variant", "experiment", "options", "seed", "out_dir", "versions"}
    for key in data:
        if key not in known:
            raise ConfigError(f"unknown key: {key}")
    options = data.get("options", {})
    if not isinstance(options, dict):
        raise ConfigError("options: expected an object")
    return RunConfig(
        sim=_dataclass_from_dict(SimParams, data.get("sim", {}), "sim"),
        variant=_dataclass_from_dict(VariantConfig, data.get("variant", {}), "variant"),
        experiment=data.get("experiment", "episode"),
        options=options,
        seed=data.get("seed"),
        out_dir=data.get("out_dir"),
    )


def dump_config(config: RunConfig) -> str:
    return json.dumps(config_to_dict(config), indent=2, sort_keys=True) + "\n"


def load_config(path: str | Path) -> RunConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def format_value(value) -> str:
    """Full-precision, locale-independent cell formatting."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ""
    return str(value)


def write_csv(path: str | Path, header: list[str], rows) -> Path:
    """UTF-8, LF line endings, header always present."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines.extend(",".join(format_value(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def write_manifest(out_dir: str | Path, config: RunConfig) -> Path:
    """Write the resolved config plus tool versions; feeding the manifest
    back through --config reproduces the run."""
    import ricensim

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    doc = config_to_dict(config)
    doc["versions"] = {
        "ricensim": ricensim.__version__,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
