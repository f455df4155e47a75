"""Builders for synthetic sweep artifacts used across the tests."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path


def write_artifact(dir_path: Path, csv_text: str, stem: str = "table") -> tuple[Path, Path]:
    """Write a CSV and a metadata file whose hash matches it."""
    csv_path = dir_path / f"{stem}.csv"
    csv_path.write_text(csv_text)
    meta_path = dir_path / f"{stem}.meta.json"
    digest = hashlib.sha256(csv_path.read_bytes()).hexdigest()
    meta_path.write_text(json.dumps({"csv_sha256": digest}))
    return csv_path, meta_path


def grid_csv(xs, ys, cell) -> str:
    """Build a full rectangular x,y,v table; ``cell(x, y)`` returns the v string."""
    lines = ["x,y,v"]
    for y in ys:
        for x in xs:
            lines.append(f"{x},{y},{cell(x, y)}")
    return "\n".join(lines) + "\n"
