"""Figure renderer for key-rate sweep artifacts (CSV + metadata JSON)."""

from .data import SweepTable, load_table
from .errors import ArtifactMismatchError, FigureConfigError, SchemaError
from .render import render
from .spec import FigureSpec, load_figure_spec, parse_figure_spec

__version__ = "0.1.0"

__all__ = [
    "ArtifactMismatchError",
    "FigureConfigError",
    "FigureSpec",
    "SchemaError",
    "SweepTable",
    "__version__",
    "load_figure_spec",
    "load_table",
    "parse_figure_spec",
    "render",
]
