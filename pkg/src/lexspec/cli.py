"""Command-line front end.

One input format across subcommands: the observable / resolution JSON
documents of this package, told apart by their "kind" field.  Exit codes:
0 success, 1 a check failed (axioms, bounds, reconstruction, suite), 2 usage
or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .boxgeom import GeometryError, parse_point
from .charpoints import (
    MismatchReport,
    ReconstructionError,
    all_blocks,
    bounds_check,
    level_regions,
    format_ext_point,
    reconstruct,
)
from .gallery import UnknownExampleError, build_example, example_names
from .lexalg import AlgebraError, format_element
from .observable import (
    DiscreteObservable,
    ObservableError,
    observable_from_doc,
    observable_to_doc,
)
from .render import RenderError, render_ascii, render_svg
from .spectral import (
    ResolutionError,
    StepResolution,
    check_axioms,
    eval_F,
    from_observable,
    resolution_from_doc,
)
from .verify import TrialConfig, run_suite

_INPUT_ERRORS = (
    AlgebraError,
    GeometryError,
    ObservableError,
    ResolutionError,
    UnknownExampleError,
    RenderError,
    json.JSONDecodeError,
    OSError,
)


def _color_enabled() -> bool:
    return sys.stdout.isatty() and os.environ.get("LEXSPEC_COLOR") != "0"


def _paint(text: str, code: str) -> str:
    return f"\x1b[{code}m{text}\x1b[0m" if _color_enabled() else text


def _ok(text: str) -> str:
    return _paint(text, "32")


def _bad(text: str) -> str:
    return _paint(text, "31")


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_doc(args, doc: dict) -> None:
    _emit(args, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_document(path: str) -> tuple[str, DiscreteObservable | StepResolution]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    kind = doc.get("kind")
    if kind is None:
        kind = "observable" if "atoms" in doc else "resolution"
    if kind == "observable":
        return "observable", observable_from_doc(doc)
    if kind == "resolution":
        return "resolution", resolution_from_doc(doc)
    raise ObservableError(f"unknown document kind {kind!r}")


def _as_resolution(kind: str, obj) -> StepResolution:
    return from_observable(obj) if kind == "observable" else obj


def cmd_eval(args) -> int:
    kind, obj = load_document(args.input)
    F = _as_resolution(kind, obj)
    point = parse_point(args.point)
    value = eval_F(F, point)
    if args.json:
        _emit_doc(args, {"point": args.point, "value": {"h": value.h, "g": list(value.g)}})
    else:
        _emit(args, format_element(value) + "\n")
    return 0


def cmd_regions(args) -> int:
    kind, obj = load_document(args.input)
    F = _as_resolution(kind, obj)
    decomp = level_regions(F)
    if args.json:
        _emit_doc(args, decomp.to_doc())
    else:
        lines = [f"T_{i} = {r}" for i, r in sorted(decomp.regions.items())]
        if decomp.pathological:
            lines.append("warning: resolution fails spectral conditions")
        _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_charpoints(args) -> int:
    kind, obj = load_document(args.input)
    F = _as_resolution(kind, obj)
    report = all_blocks(F)
    if args.json:
        _emit_doc(args, report.to_doc() | {"bounds": bounds_check(report).to_doc()})
    else:
        _emit(args, _describe_blocks(report))
    return 0


def _describe_blocks(report) -> str:
    lines = []
    for i in sorted(report.levels):
        for b in report.levels[i]:
            inf = "undefined" if b.infimum is None else format_element(b.infimum)
            adj = "T0-adjoined" if b.t0_adjoined else "not adjoined"
            lines.append(
                f"level {i}  char {format_ext_point(b.char_point)}  "
                f"region {b.region}  infimum {inf}  {adj}"
                + (f"  flags: {', '.join(b.flags)}" if b.flags else "")
            )
    pts = report.char_points()
    lines.append(
        f"characteristic points ({len(pts)}): "
        + ", ".join(format_ext_point(p) for p in pts)
    )
    bc = bounds_check(report)
    for entry in bc.to_doc()["per_level"]:
        lines.append(
            f"bound level {entry['level']}: {entry['count']} <= {entry['limit']} "
            + (_ok("ok") if entry["count"] <= entry["limit"] else _bad("exceeded"))
        )
    lines.append(
        f"bound total: {bc.total} <= {bc.total_limit} "
        + (_ok("ok") if bc.total <= bc.total_limit else _bad("exceeded"))
    )
    return "\n".join(lines) + "\n"


def cmd_axioms(args) -> int:
    kind, obj = load_document(args.input)
    F = _as_resolution(kind, obj)
    report = check_axioms(F)
    if args.json:
        _emit_doc(args, {"ok": report.ok, "axioms": report.to_doc()})
    else:
        lines = []
        for name, status in sorted(report.statuses.items()):
            mark = _ok("pass") if status.ok else _bad("FAIL")
            line = f"{name}: {mark}"
            if status.note:
                line += f"  ({status.note})"
            if status.witness:
                line += f"  witness: {json.dumps(status.witness, sort_keys=True)}"
            lines.append(line)
        _emit(args, "\n".join(lines) + "\n")
    return 0 if report.ok else 1


def cmd_reconstruct(args) -> int:
    kind, obj = load_document(args.input)
    F = _as_resolution(kind, obj)
    try:
        result = reconstruct(F)
    except ReconstructionError as exc:
        if args.json:
            _emit_doc(args, {"reconstructible": False, "reason": str(exc)})
        else:
            _emit(args, _bad("not reconstructible") + f": {exc}\n")
        return 1
    if isinstance(result, MismatchReport):
        if args.json:
            _emit_doc(args, result.to_doc())
        else:
            _emit(
                args,
                _bad("mismatch")
                + f": cell {result.witness_cell} has value {format_element(result.value_f)} "
                f"but the induced observable gives {format_element(result.value_candidate)}\n",
            )
        return 1
    if args.json:
        _emit_doc(args, observable_to_doc(result))
    else:
        lines = [f"  {_format_atom_point(a.point)} -> {format_element(a.weight)}" for a in result.atoms]
        _emit(args, "reconstructed atoms:\n" + "\n".join(lines) + "\n")
    return 0


def _format_atom_point(point) -> str:
    from .boxgeom import format_rational

    return "(" + ", ".join(format_rational(c) for c in point) + ")"


def cmd_verify(args) -> int:
    config = TrialConfig(
        seed=args.seed,
        trials=args.trials,
        k_range=(1, args.k) if args.k else (1, 6),
    )
    summary = run_suite(config)
    if args.json:
        _emit_doc(args, summary.to_doc())
    else:
        lines = [f"seed {summary.seed}, {summary.trials} trials"]
        for name, stats in summary.to_doc()["checks"].items():
            mark = _ok("ok") if stats["failures"] == 0 else _bad("FAIL")
            lines.append(f"{name}: {stats['runs']} runs, {stats['failures']} failures {mark}")
        _emit(args, "\n".join(lines) + "\n")
    return 0 if summary.ok else 1


def cmd_render(args) -> int:
    kind, obj = load_document(args.input)
    F = _as_resolution(kind, obj)
    text = render_svg(F) if args.format == "svg" else render_ascii(F)
    _emit(args, text)
    return 0


def cmd_example(args) -> int:
    kind, obj, note = build_example(args.name, k=args.k)
    out = []
    if note:
        out.append(f"note: {note}")
    F = _as_resolution(kind, obj)
    if kind == "observable":
        out.append(f"atoms (k={obj.signature.k}, d={obj.signature.d}, n={obj.n}):")
        out += [
            f"  {_format_atom_point(a.point)} -> {format_element(a.weight)}" for a in obj.atoms
        ]
    decomp = level_regions(F)
    out += [f"T_{i} = {r}" for i, r in sorted(decomp.regions.items())]
    report = all_blocks(F)
    out.append(_describe_blocks(report).rstrip("\n"))
    if args.name == "3.7/9":
        try:
            result = reconstruct(F)
        except ReconstructionError as exc:
            out.append(f"reconstruction: {exc}")
        else:
            if isinstance(result, MismatchReport):
                out.append(
                    "reconstruction mismatch: cell "
                    f"{result.witness_cell} has value {format_element(result.value_f)} "
                    f"but the induced observable gives {format_element(result.value_candidate)}"
                )
            else:
                out.append("reconstruction: round-trip succeeded")
    _emit(args, "\n".join(out) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexspec",
        description="Observables and spectral resolutions on k-perfect algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="observable or resolution JSON file")
        p.add_argument("--json", action="store_true", help="emit JSON")
        p.add_argument("--out", help="write output to this path instead of stdout")

    p = sub.add_parser("eval", help="evaluate the resolution at a point")
    add_common(p)
    p.add_argument("--point", required=True, help='comma-separated rationals, e.g. "4,4"')
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("regions", help="print the level-set regions T_i")
    add_common(p)
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("charpoints", help="blocks, characteristic points, bounds")
    add_common(p)
    p.set_defaults(func=cmd_charpoints)

    p = sub.add_parser("axioms", help="check the spectral-resolution conditions")
    add_common(p)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("reconstruct", help="rebuild an observable from adjoined blocks")
    add_common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", help="run the randomized theorem suite")
    add_common(p, needs_input=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--k", type=int, default=None, help="largest unit height to draw")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="draw the 2-D level map")
    add_common(p)
    p.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("example", help="analyze a built-in example")
    p.add_argument("name", help=f"one of: {', '.join(example_names())}")
    p.add_argument("--k", type=int, default=None, help="algebra height for patho/M")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.set_defaults(func=cmd_example)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
