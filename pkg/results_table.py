import os
import json
import math
import sys
import logging
from typing import Any, Sequence

import pandas as pd

from errors import ConfigError

logger = logging.getLogger(__name__)

# Column order is part of the output contract
EVAL_COLUMNS = ["z", "x0", "v_reduced", "V_physical", "regime", "error_estimate"]
SWEEP_COLUMNS = [
    "z",
    "x0",
    "v_reduced",
    "V_physical",
    "v_perfect_conductor",
    "ratio_to_conductor",
    "error_estimate",
]
LIMITS_COLUMNS = ["quantity", "value"]
NONADD_COLUMNS = ["kappa", "series_1", "series_2", "series_3", "numeric"]

FLOAT_FORMAT = "%.17g"


def _plain(value: Any) -> Any:
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


class ResultsTable:
    """Buffers records in memory and writes them in a fixed column order."""

    def __init__(self, columns: Sequence[str], sort_by: str | None = None):
        self.columns = list(columns)
        self.sort_by = sort_by
        self._records: list[dict[str, Any]] = []

    def add_record(self, **fields: Any) -> None:
        unknown = set(fields) - set(self.columns)
        if unknown:
            raise KeyError(f"unknown columns: {', '.join(sorted(unknown))}")
        self._records.append({c: fields.get(c) for c in self.columns})
        logger.debug(f"Record {len(self._records)} buffered")

    def __len__(self) -> int:
        return len(self._records)

    def get_records(self) -> pd.DataFrame:
        frame = pd.DataFrame(self._records, columns=self.columns)
        if self.sort_by and not frame.empty:
            frame = frame.sort_values(self.sort_by, kind="mergesort", ignore_index=True)
        return frame

    def to_text(self, fmt: str = "csv") -> str:
        frame = self.get_records()
        if fmt == "csv":
            return frame.to_csv(index=False, float_format=FLOAT_FORMAT)
        if fmt == "json":
            records = [{k: _plain(v) for k, v in row.items()} for row in frame.to_dict("records")]
            # json writes floats by repr, which reads back bit for bit
            return json.dumps(records, indent=2)
        raise ConfigError(f"unknown output format {fmt!r}")

    def write(self, path: str | None = None, fmt: str = "csv") -> None:
        """Write to ``path``, or to stdout when no path is given."""
        text = self.to_text(fmt)
        if path is None:
            sys.stdout.write(text if text.endswith("\n") else text + "\n")
            return
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        logger.info(f"Wrote {len(self)} records to {path}")


def read_results(path: str, fmt: str = "csv") -> pd.DataFrame:
    """Load an emitted table back without losing precision."""
    if fmt == "csv":
        return pd.read_csv(path, float_precision="round_trip")
    if fmt == "json":
        with open(path, encoding="utf-8") as fh:
            return pd.DataFrame(json.load(fh))
    raise ConfigError(f"unknown output format {fmt!r}")
