"""Figure specs: JSON/TOML documents selecting what to draw from a sweep CSV.

The file format mirrors the sweep configs of the data producer: a flat
document of nested tables, JSON or TOML by extension, unknown keys rejected
by name.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .errors import FigureConfigError

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

FIGURE_KINDS = ("lines", "normalized", "region-map", "contour")
AXIS_SCALES = ("linear", "log")


def load_document(path: str | Path) -> dict:
    """Read a JSON or TOML mapping from disk."""
    file = Path(path)
    try:
        data = file.read_bytes()
    except OSError as exc:
        raise FigureConfigError(f"cannot read spec {file}: {exc}") from exc
    if file.suffix.lower() == ".toml":
        try:
            return tomllib.loads(data.decode("utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise FigureConfigError(f"invalid TOML in {file}: {exc}") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise FigureConfigError(f"invalid JSON in {file}: {exc}") from exc
    if not isinstance(doc, dict):
        raise FigureConfigError(f"spec root in {file} must be a mapping")
    return doc


def _take(doc: Any, context: str, **fields: bool) -> dict:
    """Destructure a mapping, rejecting unknown keys.

    ``fields`` maps key name to required flag.
    """
    if not isinstance(doc, dict):
        raise FigureConfigError(f"{context} must be a mapping, got {type(doc).__name__}")
    unknown = sorted(set(doc) - set(fields))
    if unknown:
        raise FigureConfigError(
            f"unknown key {unknown[0]!r} in {context} "
            f"(known: {', '.join(sorted(fields))})"
        )
    missing = sorted(k for k, required in fields.items() if required and k not in doc)
    if missing:
        raise FigureConfigError(f"{context} is missing required key {missing[0]!r}")
    return dict(doc)


def _string(value: Any, context: str) -> str:
    if not isinstance(value, str) or not value:
        raise FigureConfigError(f"{context} must be a non-empty string")
    return value


def _scale(value: Any, context: str) -> str:
    scale = _string(value, context)
    if scale not in AXIS_SCALES:
        raise FigureConfigError(
            f"{context} must be one of {', '.join(AXIS_SCALES)}, got {scale!r}"
        )
    return scale


@dataclass(frozen=True)
class AxisSelection:
    """One plot axis: a CSV column and a scale."""

    column: str
    scale: str = "linear"


@dataclass(frozen=True)
class FigureSpec:
    """Everything needed to draw one figure from one sweep artifact."""

    kind: str
    csv_path: str
    metadata_path: str
    x: AxisSelection
    y_columns: tuple[str, ...] = ()
    y_scale: str = "linear"
    y: Optional[AxisSelection] = None
    value_column: Optional[str] = None
    levels: tuple[float, ...] = ()
    title: str = ""
    dpi: int = 120
    width_in: float = 6.4
    height_in: float = 4.8
    out_path: str = ""
    document: dict = field(default_factory=dict, repr=False, compare=False)


def _parse_axis(raw: Any, context: str, default_scale: str = "linear") -> AxisSelection:
    fields = _take(raw, context, column=True, scale=False)
    return AxisSelection(
        column=_string(fields["column"], f"{context}.column"),
        scale=_scale(fields.get("scale", default_scale), f"{context}.scale"),
    )


def _parse_input(raw: Any, context: str) -> tuple[str, str]:
    fields = _take(raw, context, csv=True, metadata=False)
    csv_path = _string(fields["csv"], f"{context}.csv")
    if "metadata" in fields:
        metadata_path = _string(fields["metadata"], f"{context}.metadata")
    else:
        metadata_path = str(Path(csv_path).with_suffix(".meta.json"))
    return csv_path, metadata_path


def _parse_render(raw: Any, context: str) -> dict:
    fields = _take(
        raw, context, dpi=False, width_in=False, height_in=False, title=False
    )
    out: dict = {}
    if "dpi" in fields:
        dpi = fields["dpi"]
        if not isinstance(dpi, int) or dpi < 20 or dpi > 600:
            raise FigureConfigError(f"{context}.dpi must be an int in [20, 600]")
        out["dpi"] = dpi
    for key in ("width_in", "height_in"):
        if key in fields:
            size = fields[key]
            if not isinstance(size, (int, float)) or not 1.0 <= float(size) <= 30.0:
                raise FigureConfigError(f"{context}.{key} must be in [1, 30] inches")
            out[key] = float(size)
    if "title" in fields:
        out["title"] = _string(fields["title"], f"{context}.title")
    return out


def parse_figure_spec(document: dict, base_dir: str | Path = ".") -> FigureSpec:
    """Validate a spec document against the figure-kind schemas.

    Paths inside the document resolve relative to ``base_dir`` (the spec
    file's directory when loaded from disk).
    """
    kind_probe = _take(
        dict(document), "spec",
        kind=True, input=True, x=True, y=False, value=False, levels=False,
        render=False,
    )
    kind = _string(kind_probe["kind"], "spec.kind")
    if kind not in FIGURE_KINDS:
        raise FigureConfigError(
            f"spec.kind must be one of {', '.join(FIGURE_KINDS)}, got {kind!r}"
        )
    base = Path(base_dir)
    csv_path, metadata_path = _parse_input(kind_probe["input"], "spec.input")
    x_axis = _parse_axis(kind_probe["x"], "spec.x")
    render_opts = _parse_render(kind_probe.get("render", {}), "spec.render")

    y_columns: tuple[str, ...] = ()
    y_scale = "linear"
    y_axis: Optional[AxisSelection] = None
    value_column: Optional[str] = None
    levels: tuple[float, ...] = ()

    if kind in ("lines", "normalized"):
        if "value" in kind_probe or "levels" in kind_probe:
            raise FigureConfigError(f"{kind} figures take y columns, not value/levels")
        y_fields = _take(kind_probe.get("y"), "spec.y", columns=True, scale=False)
        raw_cols = y_fields["columns"]
        if not isinstance(raw_cols, list) or not raw_cols:
            raise FigureConfigError("spec.y.columns must be a non-empty list")
        y_columns = tuple(_string(c, "spec.y.columns[]") for c in raw_cols)
        default = "log" if kind == "lines" else "linear"
        y_scale = _scale(y_fields.get("scale", default), "spec.y.scale")
    else:
        y_axis = _parse_axis(kind_probe.get("y"), "spec.y")
        value_fields = _take(kind_probe.get("value"), "spec.value", column=True)
        value_column = _string(value_fields["column"], "spec.value.column")
        raw_levels = kind_probe.get("levels", [0.0] if kind == "region-map" else [])
        if not isinstance(raw_levels, list) or not all(
            isinstance(v, (int, float)) for v in raw_levels
        ):
            raise FigureConfigError("spec.levels must be a list of numbers")
        levels = tuple(float(v) for v in raw_levels)
        if kind == "contour" and not levels:
            raise FigureConfigError("contour figures need at least one level")

    return FigureSpec(
        kind=kind,
        csv_path=str(base / csv_path),
        metadata_path=str(base / metadata_path),
        x=x_axis,
        y_columns=y_columns,
        y_scale=y_scale,
        y=y_axis,
        value_column=value_column,
        levels=levels,
        title=render_opts.get("title", ""),
        dpi=render_opts.get("dpi", 120),
        width_in=render_opts.get("width_in", 6.4),
        height_in=render_opts.get("height_in", 4.8),
        document=dict(document),
    )


def load_figure_spec(path: str | Path) -> FigureSpec:
    """Load and validate a figure spec file."""
    file = Path(path)
    return parse_figure_spec(load_document(file), base_dir=file.parent)
