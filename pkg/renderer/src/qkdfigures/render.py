"""Drawing: four figure kinds over one sweep artifact.

All pixel content derives from CSV values; nothing is recomputed. Output is
deterministic for identical inputs (fixed style, no timestamps in the PNG).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .data import SweepTable, load_table
from .errors import FigureConfigError, SchemaError
from .spec import FigureSpec

# fixed, order-stable line palette
LINE_COLORS = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
)
ZERO_CONTOUR_COLOR = "#0a8f3c"
PNG_METADATA = {"Software": "qkdfigures"}


def _axis_values(table: SweepTable, name: str, scale: str) -> np.ndarray:
    values = table.numeric(name)
    if scale == "log" and np.nanmin(values) <= 0.0:
        raise SchemaError(
            f"log scale on {name!r} requires positive data "
            f"(min is {np.nanmin(values)!r})"
        )
    return values


def _edges(centers: np.ndarray) -> np.ndarray:
    """Cell edges bracketing sorted center coordinates."""
    if centers.size == 1:
        half = 0.5 if centers[0] == 0.0 else 0.5 * abs(centers[0])
        return np.array([centers[0] - half, centers[0] + half])
    mids = 0.5 * (centers[1:] + centers[:-1])
    first = centers[0] - (mids[0] - centers[0])
    last = centers[-1] + (centers[-1] - mids[-1])
    return np.concatenate([[first], mids, [last]])


def _new_axes(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(spec.width_in, spec.height_in), dpi=spec.dpi)
    if spec.title:
        ax.set_title(spec.title)
    return fig, ax


def _save(fig, out_path: str | Path, dpi: int) -> Path:
    out = Path(out_path)
    if out.suffix.lower() != ".png":
        raise FigureConfigError(
            f"output {out} must be a .png path (deterministic raster output)"
        )
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=dpi, metadata=PNG_METADATA)
    plt.close(fig)
    return out


def _render_lines(spec: FigureSpec, table: SweepTable, out_path: str | Path) -> Path:
    x = _axis_values(table, spec.x.column, spec.x.scale)
    order = np.argsort(x, kind="stable")
    fig, ax = _new_axes(spec)
    for i, name in enumerate(spec.y_columns):
        y = table.numeric(name)
        ax.plot(
            x[order], y[order],
            label=name, color=LINE_COLORS[i % len(LINE_COLORS)], linewidth=1.6,
        )
    ax.set_xscale(spec.x.scale)
    ax.set_yscale(spec.y_scale)
    ax.set_xlabel(spec.x.column)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    if spec.kind == "normalized":
        ax.set_ylim(0.0, 1.05)
        ax.axhline(1.0, color="black", linestyle="--", linewidth=0.8)
        ax.set_ylabel("rate / upper bound")
    else:
        ax.set_ylabel("bits per channel use")
    fig.tight_layout()
    return _save(fig, out_path, spec.dpi)


def _render_region_map(spec: FigureSpec, table: SweepTable, out_path: str | Path) -> Path:
    x_values, y_values, matrix = table.grid(
        spec.x.column, spec.y.column, spec.value_column
    )
    if spec.x.scale == "log" and x_values.min() <= 0.0:
        raise SchemaError(f"log scale on {spec.x.column!r} requires positive data")
    if spec.y.scale == "log" and y_values.min() <= 0.0:
        raise SchemaError(f"log scale on {spec.y.column!r} requires positive data")
    fig, ax = _new_axes(spec)
    cmap = matplotlib.colormaps["RdBu_r"].copy()
    cmap.set_bad("white", 1.0)  # 'none' cells
    mesh = ax.pcolormesh(
        _edges(x_values), _edges(y_values), np.ma.masked_invalid(matrix),
        cmap=cmap, vmin=-1.0, vmax=1.0, shading="flat",
    )
    finite = np.isfinite(matrix)
    for level in spec.levels:
        # a level only has a curve when the defined data straddles it
        if finite.any() and matrix[finite].min() < level < matrix[finite].max():
            ax.contour(
                x_values, y_values, np.ma.masked_invalid(matrix),
                levels=[level], colors=[ZERO_CONTOUR_COLOR], linewidths=1.8,
            )
    ax.set_xscale(spec.x.scale)
    ax.set_yscale(spec.y.scale)
    ax.set_xlabel(spec.x.column)
    ax.set_ylabel(spec.y.column)
    fig.colorbar(mesh, ax=ax, label=spec.value_column)
    fig.tight_layout()
    return _save(fig, out_path, spec.dpi)


def _render_contour(spec: FigureSpec, table: SweepTable, out_path: str | Path) -> Path:
    x_values, y_values, matrix = table.grid(
        spec.x.column, spec.y.column, spec.value_column
    )
    if spec.x.scale == "log" and x_values.min() <= 0.0:
        raise SchemaError(f"log scale on {spec.x.column!r} requires positive data")
    if spec.y.scale == "log" and y_values.min() <= 0.0:
        raise SchemaError(f"log scale on {spec.y.column!r} requires positive data")
    fig, ax = _new_axes(spec)
    ax.set_facecolor("white")  # NaN ('none') regions show through as white
    masked = np.ma.masked_invalid(matrix)
    filled = ax.contourf(x_values, y_values, masked, levels=12, cmap="viridis")
    ax.contour(
        x_values, y_values, masked,
        levels=sorted(spec.levels), colors="black", linewidths=1.2,
    )
    ax.set_xscale(spec.x.scale)
    ax.set_yscale(spec.y.scale)
    ax.set_xlabel(spec.x.column)
    ax.set_ylabel(spec.y.column)
    fig.colorbar(filled, ax=ax, label=spec.value_column)
    fig.tight_layout()
    return _save(fig, out_path, spec.dpi)


def render(spec: FigureSpec, out_path: str | Path) -> Path:
    """Draw the figure described by ``spec`` to ``out_path`` (PNG).

    Loads the artifact pair (verifying the metadata hash), checks that every
    referenced column exists, and dispatches on the figure kind.
    """
    table = load_table(spec.csv_path, spec.metadata_path)
    referenced = [spec.x.column]
    referenced += list(spec.y_columns)
    if spec.y is not None:
        referenced.append(spec.y.column)
    if spec.value_column is not None:
        referenced.append(spec.value_column)
    for name in referenced:
        table.column_index(name)
    if spec.kind in ("lines", "normalized"):
        return _render_lines(spec, table, out_path)
    if spec.kind == "region-map":
        return _render_region_map(spec, table, out_path)
    return _render_contour(spec, table, out_path)
