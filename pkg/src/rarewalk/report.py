"""Report assembly and CSV / JSON emission.

A report is a flat table of rows plus metadata.  Exact rationals become two
fields, ``name`` as a "p/q" string and ``name_float``; floats are written
with 17 significant digits.  Only the ``metadata`` block carries wall-clock
data, so data rows are reproducible byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Optional

from . import __version__

SCHEMA_ID = "rarewalk-report/1"


def fmt_float(x: float) -> str:
    return format(x, ".17g")


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _expand(row: dict) -> dict:
    out = {}
    for k, v in row.items():
        if isinstance(v, Fraction):
            out[k] = fraction_str(v)
            out[f"{k}_float"] = float(v)
        else:
            out[k] = v
    return out


def _jsonable(v: Any):
    if isinstance(v, Fraction):
        return fraction_str(v)
    if isinstance(v, float):
        return None if math.isnan(v) else float(fmt_float(v))
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):  # numpy scalars
        return _jsonable(v.item())
    return v


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    if hasattr(v, "item"):
        return _cell(v.item())
    if isinstance(v, (dict, list)):
        return json.dumps(_jsonable(v), sort_keys=True)
    return str(v)


@dataclass
class Report:
    command: str
    parameters: dict
    rows: list[dict]
    summary: dict = field(default_factory=dict)
    master_seed: Optional[int] = None
    seed_source: Optional[str] = None
    replicas: Optional[int] = None
    threads: Optional[int] = None

    def __post_init__(self):
        self.rows = [_expand(r) for r in self.rows]

    @property
    def columns(self) -> list[str]:
        cols: list[str] = []
        for r in self.rows:
            for k in r:
                if k not in cols:
                    cols.append(k)
        # keep each name_float next to its name, whichever row introduced it
        paired = [c for c in cols if c.endswith("_float") and c[: -len("_float")] in cols]
        out = []
        for c in cols:
            if c in paired:
                continue
            out.append(c)
            if f"{c}_float" in paired:
                out.append(f"{c}_float")
        return out

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_ID,
            "command": self.command,
            "engine_version": __version__,
            "master_seed": self.master_seed,
            "seed_source": self.seed_source,
            "replicas": self.replicas,
            "parameters": _jsonable(self.parameters),
            "columns": self.columns,
            "rows": [_jsonable(r) for r in self.rows],
            "summary": _jsonable(self.summary),
            "metadata": {
                "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                "threads": self.threads,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        meta = self.to_dict()
        buf.write(f"# schema: {SCHEMA_ID}\n")
        buf.write(f"# command: {self.command}\n")
        buf.write(f"# engine_version: {__version__}\n")
        for key in ("master_seed", "seed_source", "replicas"):
            if meta[key] is not None:
                buf.write(f"# {key}: {meta[key]}\n")
        for k, v in meta["parameters"].items():
            buf.write(f"# param.{k}: {_cell(v)}\n")
        for k, v in meta["summary"].items():
            buf.write(f"# summary.{k}: {_cell(v)}\n")
        for k, v in meta["metadata"].items():
            buf.write(f"# meta.{k}: {_cell(v)}\n")
        cols = self.columns
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for r in self.rows:
            writer.writerow([_cell(r.get(c)) for c in cols])
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown output format {fmt!r}")


def data_rows(text: str) -> list[str]:
    """The non-metadata lines of a CSV report."""
    return [line for line in text.splitlines() if not line.startswith("#")]
