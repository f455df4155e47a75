"""Shared fixtures: the committed golden sweep artifact."""

from __future__ import annotations

from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def golden_csv() -> Path:
    return DATA_DIR / "golden.csv"


@pytest.fixture
def golden_meta() -> Path:
    return DATA_DIR / "golden.meta.json"
