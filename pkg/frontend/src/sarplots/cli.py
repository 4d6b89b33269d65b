"""sarplots command line: render figures from egosar CSV outputs."""

from __future__ import annotations

import argparse
import json
import sys

from .figures import FigureSpec, SchemaMismatch, auto_specs, render


def _specs_from_file(path):
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if isinstance(raw, dict):
        raw = [raw]
    specs = []
    for entry in raw:
        specs.append(
            FigureSpec(
                input_csv=entry["input_csv"],
                kind=entry["kind"],
                output=entry["output"],
                title=entry.get("title"),
                xlabel=entry.get("xlabel"),
                ylabel=entry.get("ylabel"),
                legend=entry.get("legend", {}),
            )
        )
    return specs


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sarplots", description="Render figures from egosar CSV reports."
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--spec", help="JSON figure spec (object or list)")
    source.add_argument("--auto", help="render every recognized CSV in a directory")
    parser.add_argument("--out-dir", help="output directory for --auto")
    parser.add_argument("--format", choices=("png", "svg"), default="png",
                        help="image format for --auto (default png)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.spec:
            specs = _specs_from_file(args.spec)
        else:
            specs = auto_specs(args.auto, args.out_dir, args.format)
            if not specs:
                print(f"no recognized CSV files in {args.auto}", file=sys.stderr)
                return 1
        for spec in specs:
            print(f"rendered {render(spec)}")
    except (SchemaMismatch, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
