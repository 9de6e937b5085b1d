"""CLI for the generator bridge: latent export and grid synthesis."""

from __future__ import annotations

import argparse
import csv
import sys

from .config import BridgeConfig
from .errors import BridgeError
from .export import export_latents
from .grid import synthesize_grid


def _config_from(args) -> BridgeConfig:
    return BridgeConfig(family=args.family, checkpoint=args.checkpoint,
                        space=args.space, device=args.device,
                        class_label=args.class_label,
                        batch_size=args.batch_size)


def _read_indices(path) -> list[int]:
    """Index list from a spectrum/selection CSV (first integer column)."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#") or not row[0].lstrip("-").isdigit():
                continue
            # spectrum.csv is rank,index,m; plain lists are a single column
            out.append(int(row[1] if len(row) >= 2 else row[0]))
    return out


def cmd_export(args):
    export_latents(_config_from(args), count=args.count, seed=args.seed,
                   out=args.out)


def cmd_grid(args):
    if args.indices:
        indices = [int(i) for i in args.indices.split(",") if i]
    else:
        indices = _read_indices(args.index_file)
    if args.limit:
        indices = indices[:args.limit]
    synthesize_grid(_config_from(args), args.latents, indices, args.out,
                    columns=args.columns)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hubbridge")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_args(p):
        p.add_argument("--family", required=True)
        p.add_argument("--checkpoint", required=True)
        p.add_argument("--space", default="Z", choices=["Z", "W"])
        p.add_argument("--device", default="cpu")
        p.add_argument("--class-label", dest="class_label", type=int)
        p.add_argument("--batch-size", dest="batch_size", type=int, default=256)

    p = sub.add_parser("export", help="export Z- or W-space latents to a .hubl file")
    add_model_args(p)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("grid", help="render selected latents into a PNG grid")
    add_model_args(p)
    p.add_argument("--latents", required=True)
    p.add_argument("--indices", help="comma-separated index list")
    p.add_argument("--index-file", dest="index_file",
                   help="CSV with an index column (e.g. spectrum.csv)")
    p.add_argument("--limit", type=int)
    p.add_argument("--columns", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_grid)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        args.func(args)
    except BridgeError as exc:
        print(f"error: {exc.category}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: internal: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
