"""Sweep-artifact ingestion: CSV + metadata JSON with hash verification.

The producer writes cells as '%.17g' floats, the sentinel 'none' for
undefined values, and 'true'/'false' for booleans; metadata records the
SHA-256 of the exact CSV bytes. Nothing numeric is recomputed here.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ArtifactMismatchError, SchemaError

NONE_SENTINEL = "none"


@dataclass(frozen=True)
class SweepTable:
    """Parsed sweep artifact: header, string-valued rows, and metadata."""

    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    metadata: dict

    def column_index(self, name: str) -> int:
        try:
            return self.columns.index(name)
        except ValueError:
            raise SchemaError(
                f"column {name!r} not in CSV header "
                f"(available: {', '.join(self.columns)})"
            ) from None

    def numeric(self, name: str) -> np.ndarray:
        """Column as float array; the 'none' sentinel becomes NaN."""
        idx = self.column_index(name)
        out = np.empty(len(self.rows))
        for i, row in enumerate(self.rows):
            cell = row[idx]
            if cell == NONE_SENTINEL or cell == "":
                out[i] = math.nan
            else:
                try:
                    out[i] = float(cell)
                except ValueError:
                    raise SchemaError(
                        f"column {name!r} row {i} holds non-numeric {cell!r}"
                    ) from None
        return out

    def grid(self, x_name: str, y_name: str, value_name: str):
        """Pivot a value column over two axis columns.

        Returns (x_values, y_values, matrix) with matrix[j, i] the value at
        (x_values[i], y_values[j]); NaN marks 'none' cells. Duplicate or
        missing grid points are schema errors: the artifact must be a full
        rectangular sweep over the two axes.
        """
        xs = self.numeric(x_name)
        ys = self.numeric(y_name)
        values = self.numeric(value_name)
        if np.isnan(xs).any() or np.isnan(ys).any():
            raise SchemaError(
                f"axis columns {x_name!r}/{y_name!r} contain undefined cells"
            )
        x_values = np.unique(xs)
        y_values = np.unique(ys)
        if x_values.size * y_values.size != len(self.rows):
            raise SchemaError(
                f"rows do not form a full {x_values.size} x {y_values.size} "
                f"grid over ({x_name!r}, {y_name!r})"
            )
        matrix = np.full((y_values.size, x_values.size), math.nan)
        filled = np.zeros(matrix.shape, dtype=bool)
        x_pos = {v: i for i, v in enumerate(x_values.tolist())}
        y_pos = {v: j for j, v in enumerate(y_values.tolist())}
        for x, y, value in zip(xs.tolist(), ys.tolist(), values.tolist()):
            i, j = x_pos[x], y_pos[y]
            if filled[j, i]:
                raise SchemaError(
                    f"duplicate grid point ({x!r}, {y!r}) in the sweep"
                )
            filled[j, i] = True
            matrix[j, i] = value
        return x_values, y_values, matrix


def load_table(csv_path: str | Path, metadata_path: str | Path) -> SweepTable:
    """Load an artifact pair, enforcing the metadata hash precondition."""
    csv_file = Path(csv_path)
    meta_file = Path(metadata_path)
    try:
        data = csv_file.read_bytes()
    except OSError as exc:
        raise SchemaError(f"cannot read CSV {csv_file}: {exc}") from exc
    try:
        metadata = json.loads(meta_file.read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read metadata {meta_file}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid metadata JSON {meta_file}: {exc}") from exc
    recorded = metadata.get("csv_sha256")
    if not isinstance(recorded, str):
        raise SchemaError(f"metadata {meta_file} lacks a csv_sha256 string")
    digest = hashlib.sha256(data).hexdigest()
    if digest != recorded:
        raise ArtifactMismatchError(
            f"CSV {csv_file} hashes to {digest[:12]}… but metadata records "
            f"{recorded[:12]}…; the artifact pair is inconsistent"
        )
    reader = csv.reader(io.StringIO(data.decode("utf-8")))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError(f"CSV {csv_file} is empty") from None
    rows = []
    for line_no, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise SchemaError(
                f"CSV {csv_file} line {line_no} has {len(row)} cells, "
                f"header has {len(header)}"
            )
        rows.append(tuple(row))
    if not rows:
        raise SchemaError(f"CSV {csv_file} has a header but no rows")
    return SweepTable(columns=tuple(header), rows=tuple(rows), metadata=metadata)
