"""Command line interface: ``gysin validate|homology|pages|gysin|verify-all``.

Exit codes: 0 success, 1 certificate or validation failure, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .algebra.complex import GradedDims, homology, validate
from .algebra.dense import oracle_homology_dims
from .errors import GysinError, InputError, ParseError
from .filtration import pages as compute_pages
from .gysin import gysin_sequence
from .io import chain_to_json, dumps, read_complex_file
from .scenarios.corpus import corpus_dir, find_scenario, verify_all
from .scenarios.pipeline import COEFFICIENT_NOTE, class_complex

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def parse_window(text):
    try:
        a, b = text.split(":")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like a:b, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return lo, hi


def _resolve(args):
    if getattr(args, "scenario", None):
        path = find_scenario(args.scenario)
        if path is None:
            raise InputError(f"no scenario named {args.scenario!r} in {corpus_dir()}")
        return path
    if not args.path:
        raise InputError("give a file path or --scenario NAME")
    return Path(args.path)


# -- commands ----------------------------------------------------------------


def cmd_validate(args):
    cf = read_complex_file(_resolve(args))
    report = validate(cf.complex())
    out = {
        "file": cf.name or str(args.path),
        "valid": report.valid,
        "violations": [
            {"kind": v.kind, "generators": list(v.generators), "detail": v.detail} for v in report.violations
        ],
    }
    return out, EXIT_OK if report.valid else EXIT_FAIL


def cmd_homology(args):
    cf = read_complex_file(_resolve(args))
    cx = cf.complex()
    h = homology(cx, args.window)
    out = {"file": cf.name, "window": list(h.window) if h.window else None, "dims": h.dims.to_json()}
    out["representatives"] = {
        str(k): [chain_to_json(c) for c in h.representatives(k)] for k in sorted(h.dims)
    }
    code = EXIT_OK
    if args.oracle:
        oracle = GradedDims(oracle_homology_dims(cx, h.window)) if h.window else GradedDims()
        out["oracle"] = oracle.to_json()
        out["oracle_agrees"] = oracle == h.dims
        if not out["oracle_agrees"]:
            code = EXIT_FAIL
    return out, code


def _p_window(window, cf):
    if window is None or cf.orbit_set is None:
        return window
    s = cf.n - 3
    return (window[0] - s, window[1] - s)


def _filtered_by_class(cf):
    if cf.orbit_set is None:
        return {"": cf.filtered()}
    labels = sorted({o.class_label for o in cf.orbit_set.orbits})
    return {lbl: class_complex(cf, lbl) for lbl in labels}


def cmd_pages(args):
    cf = read_complex_file(_resolve(args))
    out = {"file": cf.name, "classes": {}}
    for lbl, fc in _filtered_by_class(cf).items():
        pgs = compute_pages(fc, args.up_to)
        if args.window:
            lo, hi = args.window
            keep = lambda pq: lo <= pq[0] <= hi  # noqa: E731
        else:
            keep = lambda pq: True  # noqa: E731
        out["classes"][lbl] = [
            {
                **pg.to_json(),
                "slots": [s for s in pg.to_json()["slots"] if keep((s["p"], s["q"]))],
            }
            for pg in pgs
        ]
    return out, EXIT_OK


def cmd_gysin(args):
    cf = read_complex_file(_resolve(args))
    n = cf.n if cf.orbit_set is not None else None
    out = {"file": cf.name, "n": cf.n, "note": COEFFICIENT_NOTE, "classes": {}}
    code = EXIT_OK
    for lbl, fc in _filtered_by_class(cf).items():
        seq, _ = gysin_sequence(fc, _p_window(args.window, cf), n=n)
        out["classes"][lbl] = seq.to_json()
        if not seq.certificate().exact:
            code = EXIT_FAIL
    return out, code


def cmd_verify_all(args):
    report = verify_all(args.corpus)
    for w in report["warnings"]:
        print(f"warning: {w}", file=sys.stderr)
    for name in report["failed"]:
        print(f"failed: {name}", file=sys.stderr)
    return report, EXIT_OK if report["ok"] else EXIT_FAIL


# -- text rendering ------------------------------------------------------------


def _dims_line(dims):
    return ", ".join(f"{k}: {v}" for k, v in sorted(((int(k), v) for k, v in dims.items()))) or "(all zero)"


def _render_les(les, lines):
    if les["window"]:
        lines.append(f"  window (filtration levels) {les['window'][0]}..{les['window'][1]}")
    for note in les["notes"]:
        lines.append(f"  note: {note}")
    nodes = les["nodes"]
    for i, nd in enumerate(nodes):
        flag = " (contaminated)" if nd["contaminated"] else ""
        lines.append(f"  {nd['label']:<14} dim {nd['dim']}{flag}")
        if i < len(les["maps"]):
            lines.append(f"      | rank {les['maps'][i]['rank']}")
    for dm in les["D"]:
        lines.append(f"  D in degree {dm['k']}: rank {dm['rank']}, matrix {dm['D']}")
    cert = les["certificate"]
    verdict = "exact" if cert["exact"] else "NOT exact at " + ", ".join(cert["failing"])
    lines.append(f"  certificate: {verdict}")


def render_text(command, out):
    lines = []
    if command == "validate":
        lines.append(f"{out['file']}: {'valid' if out['valid'] else 'INVALID'}")
        for v in out["violations"]:
            lines.append(f"  {v['kind']}: {v['detail']}")
    elif command == "homology":
        lines.append(f"{out['file']} homology over {out['window']}")
        lines.append(f"  dims  {_dims_line(out['dims'])}")
        for k, reps in out["representatives"].items():
            for r in reps:
                lines.append(f"  H_{k}: " + " + ".join(f"{c}*{g}" for g, c in r.items()))
        if "oracle" in out:
            lines.append(f"  oracle {_dims_line(out['oracle'])} ({'agrees' if out['oracle_agrees'] else 'DISAGREES'})")
    elif command == "pages":
        for lbl, pgs in out["classes"].items():
            if lbl:
                lines.append(f"class {lbl}")
            for pg in pgs:
                cells = ", ".join(
                    f"({s['p']},{s['q']}):{s['dim']}{'*' if s['contaminated'] else ''}" for s in pg["slots"]
                )
                lines.append(f"  E^{pg['r']}: {cells or '(empty)'}")
        lines.append("  * marks slots contaminated by truncation")
    elif command == "gysin":
        lines.append(out["note"])
        for lbl, les in out["classes"].items():
            lines.append(f"class {lbl}" if lbl else "sequence")
            _render_les(les, lines)
    elif command == "verify-all":
        for e in out["scenarios"]:
            status = "ok" if e["ok"] else "FAILED"
            extra = e.get("error") or ", ".join(e.get("checks_failed", []))
            lines.append(f"{e['name']:<20} {status}  golden {e.get('golden', '-')}{'  ' + extra if extra else ''}")
        for w in out["warnings"]:
            lines.append(f"warning: {w}")
        lines.append("all scenarios verified" if out["ok"] else f"failures: {', '.join(out['failed'])}")
    return "\n".join(lines) + "\n"


# -- entry point ---------------------------------------------------------------


def build_parser():
    fmt = argparse.ArgumentParser(add_help=False)
    g = fmt.add_mutually_exclusive_group()
    g.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (default)")
    g.add_argument("--text", dest="fmt", action="store_const", const="text", help="human readable report")
    fmt.set_defaults(fmt="json")

    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("path", nargs="?", help="complex file (JSON)")
    src.add_argument("--scenario", help="name of a corpus scenario instead of a path")

    win = argparse.ArgumentParser(add_help=False)
    win.add_argument("--window", type=parse_window, help="inclusive degree window a:b")

    parser = argparse.ArgumentParser(prog="gysin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[src, fmt], help="schema and complex validation")
    p = sub.add_parser("homology", parents=[src, win, fmt], help="homology dims and representatives")
    p.add_argument("--oracle", action="store_true", help="cross-check with dense elimination")
    p = sub.add_parser("pages", parents=[src, win, fmt], help="spectral sequence pages")
    p.add_argument("--up-to", type=int, default=2, help="last page to compute (default 2)")
    sub.add_parser("gysin", parents=[src, win, fmt], help="long exact sequence with certificate")
    p = sub.add_parser("verify-all", parents=[fmt], help="run the scenario corpus")
    p.add_argument("--corpus", help="corpus directory (default: $GYSIN_CORPUS_DIR or the shipped corpus)")
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "homology": cmd_homology,
    "pages": cmd_pages,
    "gysin": cmd_gysin,
    "verify-all": cmd_verify_all,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        out, code = COMMANDS[args.command](args)
    except (InputError, ParseError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GysinError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    sys.stdout.write(dumps(out) if args.fmt == "json" else render_text(args.command, out))
    return code
