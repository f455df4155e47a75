"""Deterministic parameter sweeps with CSV + metadata artifacts.

Row order follows the declared axis order (first axis outermost). Floats are
written with 17 significant digits so re-running a config reproduces the file
byte for byte; missing or undefined values are written as the sentinel
string "none". No timestamps or environment details enter the artifacts.
"""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from ._version import __version__
from .bounds import normalize_rate, plob_bounds
from .channel import PhaseNoise, ThermalLossChannel
from .compare import (
    COMPARE_CV,
    COMPARE_DV,
    advantage_map,
    loss_frontier_map,
    noise_frontier_map,
    relative_rate_advantage,
)
from .config import AxisSpec, CompareConfig, SweepConfig, config_hash
from .dv import KeyRateResult
from .errors import (
    KeyRateError,
    NormalizationUnavailableError,
    UndefinedComparisonError,
)
from .link import distance_from_eta, eta_from_distance
from .protocols import CV_PROTOCOLS, evaluate_rate

NONE_SENTINEL = "none"

COMPARE_COLUMNS = {
    "kmap": ("distance_km", "nth", "eta", "sigma2", "rate_cv", "rate_dv", "k_tilde"),
    "noise-frontier": ("sigma2", "distance_km", "n_max_cv", "n_max_dv", "n_tilde"),
    "loss-frontier": ("sigma2", "nth", "d_max_cv", "d_max_dv", "l_tilde"),
}


def format_cell(value: Any) -> str:
    """Render one CSV cell: 17 significant digits for floats, sentinel for None."""
    if value is None:
        return NONE_SENTINEL
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return f"{float(value):.17g}"
    return str(value)


def _axis_document(axis: AxisSpec) -> dict:
    return {
        "name": axis.name,
        "min": axis.minimum,
        "max": axis.maximum,
        "count": axis.count,
        "scale": axis.scale,
    }


@dataclass(frozen=True)
class SweepResult:
    """Assembled table plus everything the metadata document needs."""

    kind: str
    columns: tuple[str, ...]
    rows: tuple[tuple[Any, ...], ...]
    axes: tuple[AxisSpec, ...]
    config_document: dict

    def render_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_cell(value) for value in row])
        return buffer.getvalue()

    def metadata(self, csv_sha256: str) -> dict:
        return {
            "kind": self.kind,
            "version": __version__,
            "config_hash": config_hash(self.config_document),
            "csv_sha256": csv_sha256,
            "axes": [_axis_document(axis) for axis in self.axes],
            "columns": list(self.columns),
            "row_count": len(self.rows),
        }


def sweep_columns(config: SweepConfig) -> tuple[str, ...]:
    columns = ["eta", "distance_km", "nth", "sigma2", "k_lower", "k_upper", "eb_breaking"]
    for protocol in config.protocols:
        columns += [
            f"{protocol.value}_raw",
            f"{protocol.value}_rate",
            f"{protocol.value}_norm",
        ]
    if COMPARE_CV in config.protocols and COMPARE_DV in config.protocols:
        columns.append("k_tilde")
    columns.append("error")
    return tuple(columns)


def _cell_coordinates(config: SweepConfig) -> list[dict[str, float]]:
    names = [axis.name for axis in config.axes]
    grids = [axis.values() for axis in config.axes]
    cells = []
    for point in itertools.product(*grids):
        cell = {"nth": 0.0, "sigma2": 0.0}
        cell.update(config.fixed)
        cell.update(zip(names, (float(v) for v in point)))
        cells.append(cell)
    return cells


def _resolve_loss(cell: dict[str, float], attenuation: float) -> tuple[float, Optional[float]]:
    """Return (eta, distance_km); distance is None at eta = 0."""
    if "eta" in cell:
        eta = cell["eta"]
        if eta <= 0.0:
            return eta, None
        if eta >= 1.0:
            return eta, 0.0
        return eta, distance_from_eta(eta, attenuation)
    distance = cell["distance_km"]
    return eta_from_distance(distance, attenuation), distance


def run_sweep(config: SweepConfig) -> SweepResult:
    """Evaluate every protocol on every grid cell.

    Cell-level evaluation failures are recorded in the row's error column
    (with the sentinel in the affected rate columns) instead of aborting the
    whole sweep.
    """
    columns = sweep_columns(config)
    want_k_tilde = "k_tilde" in columns
    rows = []
    for cell in _cell_coordinates(config):
        errors: list[str] = []
        eta, distance = _resolve_loss(cell, config.attenuation_db_per_km)
        row: list[Any] = [eta, distance, cell["nth"], cell["sigma2"]]
        try:
            channel = ThermalLossChannel(eta=eta, n_th=cell["nth"])
            bounds = plob_bounds(channel)
        except KeyRateError as exc:
            errors.append(f"channel: {exc}")
            channel = None
            bounds = None
        if bounds is None:
            row += [None, None, None]
        else:
            row += [bounds.lower, bounds.upper, bounds.eb_breaking]
        phase = PhaseNoise(cell["sigma2"])
        results: dict = {}
        for protocol in config.protocols:
            if channel is None:
                row += [None, None, None]
                continue
            options = dict(config.cv.rate_options()) if protocol in CV_PROTOCOLS else {}
            try:
                result = evaluate_rate(protocol, channel, phase, **options)
            except KeyRateError as exc:
                errors.append(f"{protocol.value}: {exc}")
                row += [None, None, None]
                continue
            results[protocol] = result
            try:
                norm: Optional[float] = normalize_rate(result, bounds)
            except NormalizationUnavailableError:
                norm = None
            row += [result.raw_rate, result.rate, norm]
        if want_k_tilde:
            row.append(_k_tilde(results.get(COMPARE_CV), results.get(COMPARE_DV)))
        row.append("; ".join(errors))
        rows.append(tuple(row))
    return SweepResult(
        kind="sweep",
        columns=columns,
        rows=tuple(rows),
        axes=config.axes,
        config_document=dict(config.document),
    )


def _k_tilde(
    k_cv: Optional[KeyRateResult], k_dv: Optional[KeyRateResult]
) -> Optional[float]:
    if k_cv is None or k_dv is None:
        return None
    try:
        return relative_rate_advantage(k_cv, k_dv)
    except UndefinedComparisonError:
        return None


def run_compare(config: CompareConfig) -> SweepResult:
    """Build one of the comparison maps as a table."""
    columns = COMPARE_COLUMNS[config.kind]
    first = config.axes[0].values()
    second = config.axes[1].values()
    mu_max = config.cv.mu_max
    if config.kind == "kmap":
        sigma2 = float(config.fixed.get("sigma2", 0.0))
        records = advantage_map(
            sigma2, first, second, config.attenuation_db_per_km, mu_max
        )
    elif config.kind == "noise-frontier":
        records = noise_frontier_map(
            first, second, config.k0, config.attenuation_db_per_km, mu_max
        )
    else:
        records = loss_frontier_map(
            first, second, config.k0, config.attenuation_db_per_km, mu_max
        )
    rows = tuple(tuple(record[name] for name in columns) for record in records)
    return SweepResult(
        kind=config.kind,
        columns=columns,
        rows=rows,
        axes=config.axes,
        config_document=dict(config.document),
    )


def write_artifacts(
    result: SweepResult, csv_path: str | Path, metadata_path: str | Path
) -> dict:
    """Write the CSV and its metadata JSON; returns the metadata document."""
    text = result.render_csv()
    data = text.encode("utf-8")
    digest = hashlib.sha256(data).hexdigest()
    csv_file = Path(csv_path)
    csv_file.parent.mkdir(parents=True, exist_ok=True)
    csv_file.write_bytes(data)
    document = result.metadata(digest)
    meta_file = Path(metadata_path)
    meta_file.parent.mkdir(parents=True, exist_ok=True)
    meta_file.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n")
    return document
