"""Rendering: PNG output, white undefined cells, contour marking, locality.

The pixel-level tests pin the consumer contract: image content derives only
from CSV values, undefined cells stay white, the diverging map is normalized
to a fixed [-1, 1] range, and editing one cell changes only its own patch.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path

import matplotlib.colors
import matplotlib.image as mpimg
import numpy as np
import pytest

from qkdfigures.cli import main
from qkdfigures.errors import FigureConfigError, SchemaError
from qkdfigures.render import ZERO_CONTOUR_COLOR, render
from qkdfigures.spec import parse_figure_spec

from tablegen import grid_csv, write_artifact

DATA_DIR = Path(__file__).parent / "data"
PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
GREEN = matplotlib.colors.to_rgb(ZERO_CONTOUR_COLOR)


def golden_doc(kind: str, **overrides) -> dict:
    doc: dict = {"kind": kind, "input": {"csv": "golden.csv"}}
    if kind in ("lines", "normalized"):
        doc["x"] = {"column": "distance_km"}
        columns = ["BB84_rate", "6S_rate", "Sqz-Hom_rate", "GG02_rate"]
        if kind == "normalized":
            columns = ["BB84_norm", "6S_norm", "Sqz-Hom_norm", "GG02_norm"]
        doc["y"] = {"columns": columns}
    else:
        doc["x"] = {"column": "distance_km"}
        doc["y"] = {"column": "nth", "scale": "log"}
        doc["value"] = {"column": "k_tilde"}
        if kind == "contour":
            doc["levels"] = [0.0, 0.5]
    doc.update(overrides)
    return doc


def render_doc(doc: dict, out_path: Path, base_dir: Path = DATA_DIR) -> Path:
    return render(parse_figure_spec(doc, base_dir=base_dir), out_path)


def read_png(path: Path) -> np.ndarray:
    img = mpimg.imread(path)
    assert img.ndim == 3 and img.shape[2] == 4
    return img


def color_mask(img: np.ndarray, rgb, atol: float = 1.5 / 255) -> np.ndarray:
    return np.all(np.abs(img[:, :, :3] - np.asarray(rgb)) <= atol, axis=2)


def white_mask(img: np.ndarray) -> np.ndarray:
    return np.all(img == 1.0, axis=2)


@pytest.mark.parametrize("kind", ["lines", "normalized", "region-map", "contour"])
def test_every_kind_renders_a_png(kind, tmp_path):
    out = render_doc(golden_doc(kind), tmp_path / f"{kind}.png")
    blob = out.read_bytes()
    assert blob.startswith(PNG_SIGNATURE)
    assert len(blob) > 2000
    img = read_png(out)
    assert img.shape[0] > 100 and img.shape[1] > 100
    # something was drawn: the axes area is not all one color
    assert np.unique(img.reshape(-1, 4), axis=0).shape[0] > 10


def test_rendering_is_deterministic(tmp_path):
    first = render_doc(golden_doc("region-map"), tmp_path / "a.png")
    second = render_doc(golden_doc("region-map"), tmp_path / "b.png")
    assert first.read_bytes() == second.read_bytes()


def test_undefined_cells_render_white(tmp_path):
    def cell(hole_value):
        return lambda x, y: hole_value if (x, y) == (3.0, 20.0) else "0.6"

    xs, ys = [1.0, 2.0, 3.0, 4.0], [10.0, 20.0, 30.0]
    with_hole = tmp_path / "hole"
    with_hole.mkdir()
    write_artifact(with_hole, grid_csv(xs, ys, cell("none")), stem="golden")
    filled = tmp_path / "filled"
    filled.mkdir()
    write_artifact(filled, grid_csv(xs, ys, cell("0.7")), stem="golden")

    doc = {
        "kind": "region-map",
        "input": {"csv": "golden.csv"},
        "x": {"column": "x"},
        "y": {"column": "y"},
        "value": {"column": "v"},
    }
    img_hole = read_png(render_doc(doc, tmp_path / "hole.png", base_dir=with_hole))
    img_fill = read_png(render_doc(doc, tmp_path / "fill.png", base_dir=filled))
    assert img_hole.shape == img_fill.shape

    diff = np.any(img_hole != img_fill, axis=2)
    assert diff.any()
    rows, cols = np.nonzero(diff)
    cy, cx = int(round(rows.mean())), int(round(cols.mean()))
    # the undefined cell's center pixel is pure white; the filled variant is not
    assert tuple(img_hole[cy, cx]) == (1.0, 1.0, 1.0, 1.0)
    assert tuple(img_fill[cy, cx]) != (1.0, 1.0, 1.0, 1.0)
    # and the hole contributes a full cell of extra white area
    assert white_mask(img_hole).sum() > white_mask(img_fill).sum() + 5000


def test_diverging_map_uses_fixed_unit_range(tmp_path):
    cmap = matplotlib.colormaps["RdBu_r"]
    extremes = (cmap(1.0)[:3], cmap(0.0)[:3])

    def table(amplitude):
        return grid_csv(
            [1.0, 2.0, 3.0, 4.0], [10.0, 20.0, 30.0],
            lambda x, y: f"{amplitude}" if x <= 2.0 else f"{-amplitude}",
        )

    doc = {
        "kind": "region-map",
        "input": {"csv": "golden.csv"},
        "x": {"column": "x"},
        "y": {"column": "y"},
        "value": {"column": "v"},
    }
    full = tmp_path / "full"
    full.mkdir()
    write_artifact(full, table(1.0), stem="golden")
    img_full = read_png(render_doc(doc, tmp_path / "full.png", base_dir=full))
    half = tmp_path / "half"
    half.mkdir()
    write_artifact(half, table(0.5), stem="golden")
    img_half = read_png(render_doc(doc, tmp_path / "half.png", base_dir=half))

    # the colorbar on the right spans the full range in both renders, so
    # only the data area (left 70% of the canvas) discriminates the two
    data_area = slice(None), slice(0, int(img_full.shape[1] * 0.7))
    for extreme in extremes:
        # |v| = 1 reaches the colormap ends, |v| = 0.5 must not: the color
        # range is pinned to [-1, 1], not rescaled to the data
        assert color_mask(img_full[data_area], extreme).sum() > 100
        assert color_mask(img_half[data_area], extreme).sum() == 0
    # both tables straddle zero, so both carry the marked zero contour
    assert color_mask(img_full, GREEN).sum() > 50
    assert color_mask(img_half, GREEN).sum() > 50


def test_zero_contour_only_when_data_straddles_zero(tmp_path):
    positive = tmp_path / "pos"
    positive.mkdir()
    write_artifact(
        positive,
        grid_csv([1.0, 2.0, 3.0], [10.0, 20.0], lambda x, y: "0.4"),
        stem="golden",
    )
    doc = {
        "kind": "region-map",
        "input": {"csv": "golden.csv"},
        "x": {"column": "x"},
        "y": {"column": "y"},
        "value": {"column": "v"},
    }
    img = read_png(render_doc(doc, tmp_path / "pos.png", base_dir=positive))
    assert color_mask(img, GREEN).sum() == 0


def _perturb_one_cell(golden_text: str, distance: float, nth: float, new_value: str) -> str:
    rows = list(csv.reader(golden_text.splitlines()))
    header = rows[0]
    d_idx = header.index("distance_km")
    n_idx = header.index("nth")
    k_idx = header.index("k_tilde")
    old = None
    for row in rows[1:]:
        if float(row[d_idx]) == distance and math.isclose(float(row[n_idx]), nth):
            old = row[k_idx]
            break
    assert old is not None and old != "none"
    assert golden_text.count(old) == 1, "cell value must be unique to patch in place"
    assert (float(old) > 0) == (float(new_value) > 0), "perturbation must keep the sign"
    return golden_text.replace(old, new_value, 1)


def test_perturbing_one_cell_changes_only_its_patch(golden_csv, tmp_path):
    perturbed_dir = tmp_path / "perturbed"
    perturbed_dir.mkdir()
    patched = _perturb_one_cell(golden_csv.read_text(), 5.0, 0.05, "0.93")
    csv_path = perturbed_dir / "golden.csv"
    csv_path.write_text(patched)
    (perturbed_dir / "golden.meta.json").write_text(json.dumps({
        "csv_sha256": hashlib.sha256(csv_path.read_bytes()).hexdigest(),
    }))

    # linear y keeps every cell a small rectangle of the canvas
    doc = golden_doc("region-map", y={"column": "nth", "scale": "linear"})
    img_base = read_png(render_doc(doc, tmp_path / "base.png"))
    img_pert = read_png(render_doc(doc, tmp_path / "pert.png", base_dir=perturbed_dir))
    assert img_base.shape == img_pert.shape

    diff = np.any(img_base != img_pert, axis=2)
    assert diff.any(), "changing a cell value must change the image"
    height, width = diff.shape
    assert diff.sum() / diff.size < 0.02, "a one-cell edit must not repaint the figure"
    rows, cols = np.nonzero(diff)
    assert (rows.max() - rows.min() + 1) / height < 0.25
    assert (cols.max() - cols.min() + 1) / width < 0.35
    # regions away from the edited cell (bottom-left) are untouched
    assert not diff[: height // 2, :].any()
    assert not diff[:, width // 2:].any()
    # the perturbation kept the cell's sign, so the zero contour is identical
    assert np.array_equal(color_mask(img_base, GREEN), color_mask(img_pert, GREEN))


def test_missing_column_is_a_schema_error(tmp_path):
    doc = golden_doc("lines", y={"columns": ["BB84_rate", "bogus"]})
    with pytest.raises(SchemaError, match="bogus"):
        render_doc(doc, tmp_path / "x.png")


def test_log_axis_rejects_nonpositive_data(tmp_path):
    write_artifact(
        tmp_path,
        grid_csv([0.0, 1.0, 2.0], [10.0, 20.0], lambda x, y: "0.5"),
        stem="golden",
    )
    doc = {
        "kind": "lines",
        "input": {"csv": "golden.csv"},
        "x": {"column": "x", "scale": "log"},
        "y": {"columns": ["v"]},
    }
    with pytest.raises(SchemaError, match="positive"):
        render_doc(doc, tmp_path / "x.png", base_dir=tmp_path)


def test_output_must_be_png(tmp_path):
    with pytest.raises(FigureConfigError, match="png"):
        render_doc(golden_doc("region-map"), tmp_path / "figure.pdf")


def test_cli_renders_and_reports_path(tmp_path, capsys):
    doc = golden_doc("region-map")
    doc["input"]["csv"] = str(DATA_DIR / "golden.csv")
    spec_file = tmp_path / "fig.json"
    spec_file.write_text(json.dumps(doc))
    out = tmp_path / "fig.png"
    assert main(["--spec", str(spec_file), "--out", str(out)]) == 0
    assert out.read_bytes().startswith(PNG_SIGNATURE)
    assert str(out) in capsys.readouterr().out


def test_cli_config_errors_exit_2(tmp_path, capsys):
    doc = golden_doc("region-map", palette="viridis")
    spec_file = tmp_path / "fig.json"
    spec_file.write_text(json.dumps(doc))
    assert main(["--spec", str(spec_file), "--out", str(tmp_path / "f.png")]) == 2
    assert "palette" in capsys.readouterr().err


def test_cli_artifact_errors_exit_3(golden_csv, golden_meta, tmp_path, capsys):
    tampered = tmp_path / "golden.csv"
    tampered.write_bytes(golden_csv.read_bytes() + b"tail")
    (tmp_path / "golden.meta.json").write_text(golden_meta.read_text())
    spec_file = tmp_path / "fig.json"
    spec_file.write_text(json.dumps(golden_doc("region-map")))
    assert main(["--spec", str(spec_file), "--out", str(tmp_path / "f.png")]) == 3
    assert "inconsistent" in capsys.readouterr().err

    missing = golden_doc("region-map", input={"csv": "absent.csv"})
    spec_file.write_text(json.dumps(missing))
    assert main(["--spec", str(spec_file), "--out", str(tmp_path / "f.png")]) == 3
