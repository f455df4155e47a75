"""Command line entry point: render --spec <file> --out <path>."""

from __future__ import annotations

import argparse
import sys

from .errors import ArtifactMismatchError, FigureConfigError, SchemaError
from .render import render
from .spec import load_figure_spec


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render a figure from a key-rate sweep artifact "
        "(CSV + metadata JSON).",
    )
    parser.add_argument("--spec", required=True, help="figure spec (JSON or TOML)")
    parser.add_argument("--out", required=True, help="output PNG path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_figure_spec(args.spec)
        out = render(spec, args.out)
    except FigureConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SchemaError, ArtifactMismatchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
