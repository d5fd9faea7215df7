"""Command line interface: run one experiment kind and write its report.

Exit codes: 0 success, 1 partial or failed run, 2 invalid manifest or
arguments, 3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .groups import CapExceeded
from .manifests import (
    KINDS,
    SchemaError,
    build_manifest,
    emit_report,
    load_manifest,
    run_manifest,
)

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matgrouplab",
        description="Exact experiments on finitely generated integer matrix groups.",
    )
    parser.add_argument("--version", action="version", version=f"matgrouplab {__version__}")
    sub = parser.add_subparsers(dest="kind", metavar="KIND")
    descriptions = {
        "expander": "mod-q closures and Cayley graph spectral gaps",
        "monodromy": "integral hypergeometric monodromy and its closure class",
        "cartan": "roots, involutions, and pairing graphs of a hyperbolic lattice",
        "rotation": "averaging operator gaps on spherical harmonics",
        "zaremba": "denominators with bounded continued fraction quotients",
        "apollonian": "curvatures in an integer circle packing orbit",
        "walk": "characteristic polynomial statistics of random words",
        "ball": "word-metric balls and short relations",
    }
    for kind in KINDS:
        p = sub.add_parser(kind, help=descriptions[kind])
        p.add_argument("--manifest", type=Path, default=None, help="manifest file (JSON or key=value)")
        p.add_argument(
            "--set",
            dest="sets",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override one manifest key (repeatable); VALUE is parsed as JSON when possible",
        )
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--format", choices=("json", "csv", "both"), default="both")
        p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--cap-elements", type=int, default=None, dest="cap_elements")
        p.add_argument("--quiet", action="store_true", help="print only the output directory")
    return parser


def _parse_set(item: str) -> tuple[str, object]:
    key, sep, value = item.partition("=")
    key = key.strip()
    if not sep or not key:
        raise SchemaError(f"--set expects KEY=VALUE, got {item!r}")
    value = value.strip()
    try:
        return key, json.loads(value)
    except json.JSONDecodeError:
        return key, value


def _resolve_out(args) -> Path:
    if args.out is not None:
        return args.out
    env = os.environ.get("MATGROUPLAB_OUT")
    if env:
        return Path(env) / args.kind
    return Path.cwd() / "matgrouplab_out" / args.kind


def _print_summary(bundle, out_dir: Path, written) -> None:
    print(f"kind = {bundle.kind}")
    print(f"status = {bundle.status}")
    for key in sorted(bundle.outputs):
        value = bundle.outputs[key]
        if isinstance(value, (dict,)):
            continue
        if isinstance(value, (list, tuple)):
            if len(value) > 8 or any(isinstance(v, (list, dict)) for v in value):
                continue
            value = " ".join(str(v) for v in value)
        print(f"{key} = {value}")
    for note in bundle.notes:
        print(f"note: {note}")
    print(f"out = {out_dir}")
    print("files = " + ", ".join(p.name for p in written))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.kind is None:
        parser.print_help()
        return 2
    try:
        raw = load_manifest(args.manifest) if args.manifest else {}
        file_kind = raw.pop("kind", None)
        if file_kind is not None and file_kind != args.kind:
            raise SchemaError(
                f"manifest kind {file_kind!r} does not match the {args.kind!r} command"
            )
        overrides: dict = {}
        for item in args.sets:
            key, value = _parse_set(item)
            overrides[key] = value
        for flag in ("seed", "threads", "cap_elements"):
            value = getattr(args, flag)
            if value is not None:
                overrides[flag] = value
        manifest = build_manifest({**raw, "kind": args.kind}, overrides)
        bundle = run_manifest(manifest)
        out_dir = _resolve_out(args)
        written = emit_report(
            bundle, out_dir, fmt=args.format, figures=not args.no_figures
        )
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 3
    except RuntimeError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 1
    if args.quiet:
        print(out_dir)
    else:
        _print_summary(bundle, out_dir, written)
    return 0 if bundle.status == "ok" else 1


if __name__ == "__main__":
    sys.exit(main())
