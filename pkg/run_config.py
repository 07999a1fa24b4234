import os
import json
import math
import logging
from dataclasses import dataclass
from typing import Any, Set

import numpy as np
import pandas as pd

import settings
from dielectric import DielectricModel
from errors import CasimirError, ConfigError
from potential import AtomParams, UNIT_SYSTEMS

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

# --------------------------------------------------------------------
# Schema definition (canonical source of truth)
# --------------------------------------------------------------------
# {
#   "schema_version": 1,
#   "atom":   {"k0": ..., "alpha0": ...},
#   "model":  {"kind": "constant", "epsilon": 2.0}
#           | {"kind": "single_relaxation", "chi0": 1.0, "kc": 1e8}
#           | {"kind": "tabulated", "table": [[k, eps], ...] | "table_path": "eps.csv",
#              "interpolation": "pchip"},
#   "z_grid": {"min": ..., "max": ..., "points": 50, "spacing": "log"},
#   "tol": 1e-10,
#   "units": "si",
#   "output": {"path": "sweep.csv", "format": "csv"}
# }
EXPECTED_KEYS: Set[str] = {"schema_version", "atom", "model", "z_grid", "tol", "units", "output"}
REQUIRED_KEYS: Set[str] = {"schema_version", "atom", "model"}
MODEL_KEYS: Set[str] = {"kind", "epsilon", "chi0", "kc", "table", "table_path", "interpolation"}
OUTPUT_FORMATS = ("csv", "json")


@dataclass(frozen=True)
class ZGrid:
    min: float
    max: float
    points: int = 1
    spacing: str = "log"

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.min])
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)


@dataclass(frozen=True)
class OutputSpec:
    path: str | None = None
    format: str = "csv"


@dataclass(frozen=True)
class RunConfig:
    atom: AtomParams
    model: DielectricModel
    z_grid: ZGrid | None = None
    tol: float = settings.DEFAULT_TOL
    units: str = "si"
    output: OutputSpec = OutputSpec()


def _number(block: dict, key: str, where: str) -> float:
    value = block.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {value!r}")
    return float(value)


def read_table(table_path: str) -> list[tuple[float, float]]:
    """Read (k, epsilon) samples from a two-column CSV file."""
    try:
        frame = pd.read_csv(table_path)
    except (OSError, ValueError) as e:
        raise ConfigError(f"cannot read permittivity table {table_path}: {e}") from e
    if list(frame.columns) != ["k", "epsilon"]:
        raise ConfigError(f"{table_path} must have exactly the columns k, epsilon; got {list(frame.columns)}")
    logger.info(f"Loaded {len(frame)} permittivity samples from {table_path}")
    return list(frame.itertuples(index=False, name=None))


def _parse_model(block: Any, base_dir: str) -> DielectricModel:
    if not isinstance(block, dict):
        raise ConfigError("model must be an object")
    unknown = set(block) - MODEL_KEYS
    if unknown:
        raise ConfigError(f"unknown model fields: {', '.join(sorted(unknown))}")
    kind = block.get("kind")
    try:
        if kind == "constant":
            return DielectricModel.constant(_number(block, "epsilon", "model"))
        if kind == "single_relaxation":
            return DielectricModel.single_relaxation(_number(block, "chi0", "model"), _number(block, "kc", "model"))
        if kind == "tabulated":
            if ("table" in block) == ("table_path" in block):
                raise ConfigError("a tabulated model needs exactly one of table, table_path")
            if "table_path" in block:
                path = block["table_path"]
                samples = read_table(path if os.path.isabs(path) else os.path.join(base_dir, path))
            else:
                samples = block["table"]
                if not isinstance(samples, list) or not all(
                    isinstance(row, list) and len(row) == 2 for row in samples
                ):
                    raise ConfigError("model.table must be a list of [k, epsilon] pairs")
            return DielectricModel.tabulated(samples, block.get("interpolation", "pchip"))
    except ConfigError:
        raise
    except (CasimirError, TypeError) as e:
        raise ConfigError(f"invalid dielectric model: {e}") from e
    raise ConfigError(f"unknown model kind {kind!r}")


def _parse_z_grid(block: Any) -> ZGrid:
    if not isinstance(block, dict):
        raise ConfigError("z_grid must be an object")
    lo = _number(block, "min", "z_grid")
    hi = _number(block, "max", "z_grid") if "max" in block else lo
    points = block.get("points", 1)
    spacing = block.get("spacing", "log")
    if not (math.isfinite(lo) and lo > 0):
        raise ConfigError(f"z_grid.min must be positive, got {lo}")
    if not (math.isfinite(hi) and hi >= lo):
        raise ConfigError(f"z_grid.max must be finite and >= min, got {hi}")
    if isinstance(points, bool) or not isinstance(points, int) or points < 1:
        raise ConfigError(f"z_grid.points must be a positive integer, got {points!r}")
    if spacing not in ("log", "linear"):
        raise ConfigError(f"z_grid.spacing must be 'log' or 'linear', got {spacing!r}")
    return ZGrid(lo, hi, points, spacing)


def parse_config(raw: Any, base_dir: str = ".") -> RunConfig:
    """Validate a decoded configuration document and build a RunConfig."""
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object")
    missing = REQUIRED_KEYS - set(raw)
    if missing:
        raise ConfigError(f"configuration missing fields: {', '.join(sorted(missing))}")
    unknown = set(raw) - EXPECTED_KEYS
    if unknown:
        raise ConfigError(f"unknown configuration fields: {', '.join(sorted(unknown))}")
    if raw["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {raw['schema_version']!r}; expected {SCHEMA_VERSION}")

    atom_block = raw["atom"]
    if not isinstance(atom_block, dict):
        raise ConfigError("atom must be an object")
    try:
        atom = AtomParams(_number(atom_block, "k0", "atom"), _number(atom_block, "alpha0", "atom"))
    except CasimirError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"invalid atom: {e}") from e

    model = _parse_model(raw["model"], base_dir)
    z_grid = _parse_z_grid(raw["z_grid"]) if "z_grid" in raw else None

    tol = _number(raw, "tol", "config") if "tol" in raw else settings.DEFAULT_TOL
    if not settings.MIN_TOL <= tol <= settings.MAX_TOL:
        raise ConfigError(f"tol must lie in [{settings.MIN_TOL}, {settings.MAX_TOL}], got {tol}")

    units = str(raw.get("units", "si")).lower()
    if units not in UNIT_SYSTEMS:
        raise ConfigError(f"units must be one of {', '.join(UNIT_SYSTEMS)}, got {units!r}")

    out_block = raw.get("output", {})
    if not isinstance(out_block, dict):
        raise ConfigError("output must be an object")
    fmt = out_block.get("format", "csv")
    if fmt not in OUTPUT_FORMATS:
        raise ConfigError(f"output.format must be csv or json, got {fmt!r}")
    output = OutputSpec(out_block.get("path"), fmt)

    return RunConfig(atom, model, z_grid, tol, units, output)


def load_config(path: str) -> RunConfig:
    """Read and validate a JSON run configuration."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read configuration {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed configuration {path}: {e}") from e
    config = parse_config(raw, os.path.dirname(os.path.abspath(path)))
    logger.info(f"Loaded {config.model.kind} model configuration from {path}")
    return config
