"""Command-line entry point: ``higgstwist verify | twist | example | list-examples``.

Exit codes: 0 verified (or success), 1 some check failed, 2 input error.
A manifest argument is a file path or ``builtin:<name>`` for a corpus entry.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from .errors import HiggsTwistError, ManifestError, UnknownExample
from .forms import render_form1
from .laurent import render
from .manifest import Manifest, dumps, parse_manifest
from .report import CHECK_KINDS
from .twist import build_atlas

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

_CORPUS = "corpus"


def corpus_names() -> list:
    root = resources.files(__package__) / _CORPUS
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def cmd_example(name: str) -> str:
    """Text of a built-in manifest."""
    names = corpus_names()
    if name not in names:
        raise UnknownExample(name, names)
    return (resources.files(__package__) / _CORPUS / f"{name}.json").read_text(encoding="utf-8")


def load_manifest(source: str) -> Manifest:
    if source.startswith("builtin:"):
        text = cmd_example(source[len("builtin:"):])
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ManifestError(f"cannot read manifest: {exc.strerror}", path=source) from None
    return parse_manifest(text)


def run_manifest(m: Manifest, checks=None, corrupt=None):
    return build_atlas(m.patches, m.higgs, checks=checks, corrupt=corrupt, title=m.title)


def atlas_to_dict(m: Manifest, atlas) -> dict:
    out = {"title": m.title, "p": m.field.p, "e": m.field.e, "dim": m.dim, "rank": m.rank, "exponent": m.exponent}
    out["connections"] = {
        name: [[render_form1(atlas.locals[name].A.entry(i, j)) for j in range(m.rank)] for i in range(m.rank)]
        for name in atlas.names()
    }
    out["gluing"] = [
        {"from": a, "to": b, "z": [render(z) for z in data.hom.z], "G": data.G.to_text()}
        for (a, b), data in sorted(atlas.pairs.items())
    ]
    return out


def cmd_verify(source, report_path=None, fmt="text", checks=None, corrupt=None, out=None) -> int:
    out = out or sys.stdout
    try:
        m = load_manifest(source)
        atlas = run_manifest(m, checks=checks, corrupt=corrupt)
    except HiggsTwistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = atlas.report
    out.write(report.to_json() if fmt == "json" else report.to_text())
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    if report.verified:
        return EXIT_OK
    if report.kinds_failed() == ["input-validation"]:
        return EXIT_INPUT
    return EXIT_FAILED


def cmd_twist(source, out_path) -> int:
    try:
        m = load_manifest(source)
        atlas = run_manifest(m)
    except HiggsTwistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not atlas.report.verified:
        print(atlas.report.to_text(), file=sys.stderr, end="")
        return EXIT_FAILED
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(dumps(atlas_to_dict(m, atlas)))
    return EXIT_OK


def _check_list(text):
    kinds = [k.strip() for k in text.split(",") if k.strip()]
    bad = [k for k in kinds if k not in CHECK_KINDS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown check kind {bad[0]!r}; choose from {', '.join(CHECK_KINDS)}")
    return kinds


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="higgstwist", description="Exact replay of the exponential twist of a nilpotent Higgs bundle.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="build the flat bundle and replay every identity")
    v.add_argument("manifest", help="manifest path or builtin:<name>")
    v.add_argument("--report", metavar="PATH", help="also write the report as JSON")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--checks", type=_check_list, metavar="KINDS", help="comma-separated subset of " + ",".join(CHECK_KINDS))
    v.add_argument("--corrupt", help=argparse.SUPPRESS)

    t = sub.add_parser("twist", help="write connection forms, z vectors and gluing matrices")
    t.add_argument("manifest")
    t.add_argument("out")

    e = sub.add_parser("example", help="print a built-in manifest")
    e.add_argument("name")

    sub.add_parser("list-examples", help="list built-in manifests")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command == "verify":
        return cmd_verify(args.manifest, args.report, args.format, args.checks, args.corrupt)
    if args.command == "twist":
        return cmd_twist(args.manifest, args.out)
    if args.command == "example":
        try:
            sys.stdout.write(cmd_example(args.name))
        except UnknownExample as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        return EXIT_OK
    for name in corpus_names():
        title = json.loads(cmd_example(name)).get("metadata", {}).get("title", "")
        print(f"{name:<24} {title}")
    return EXIT_OK
