"""Command-line front end.

Subcommands: eval, track, classify, levelset, report.  Function specs are
``builtin:<name>`` or JSON documents (see registry).  All delimited output
uses 17 significant digits, '.' decimals and LF line endings so identical
invocations produce byte-identical files.  Exit codes: 0 success, 2 config
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .classify import CASE_PAIRING, classify
from .errors import ConfigError, GzntError, NumericalError
from .levelset import departure_points, trace_im_zero
from .n1 import ZERO_ONLY, eval_Q, eval_Q_extended, local_case
from .registry import function_to_dict, parse_spec
from .tracker import (
    contact_angles,
    dense_contact_schedule,
    curve_diagnostics,
    track_full_circle,
    track_path,
)


def format_complex(v):
    """Render a complex value as re+imi (e.g. 0+2i), 17 significant digits."""
    re, im = v.real + 0.0, v.imag + 0.0  # normalize -0.0
    return f"{re:.17g}{im:+.17g}i"


def _parse_pair(text, what):
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"{what}: expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ConfigError(f"{what}: {exc}") from exc


def _parse_box(text):
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError(f"--box: expected 'x0,x1,y0,y1', got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"--box: {exc}") from exc


def _cmd_eval(args):
    Q = parse_spec(args.spec)
    z = _parse_pair(args.z, "--z")
    value = eval_Q_extended(Q, z) if args.extended else eval_Q(Q, z)
    print(format_complex(value))
    return 0


def _cmd_track(args):
    Q = parse_spec(args.spec)
    if args.full_circle:
        path = track_full_circle(Q, steps=args.steps)
    else:
        path = track_path(Q, np.linspace(args.tau_min, args.tau_max, args.steps + 1))
    out = Path(args.out)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        path.write_csv(fh)
    events_file = out.with_suffix(".events.json")
    events_file.write_text(path.events_json() + "\n", encoding="utf-8")
    diag = curve_diagnostics(path)
    print(f"wrote {out} ({len(path.samples)} rows) and {events_file} ({len(path.events)} events)")
    print(f"max chordal step {diag['max_chordal_step']:.3e}, closure gap {diag['closure_gap']:.3e}")
    return 0


def _cmd_classify(args):
    Q = parse_spec(args.spec)
    evidence = classify(Q, args.alpha)
    print(evidence.decided)
    print(evidence.to_json())
    return 0


def _cmd_levelset(args):
    Q = parse_spec(args.spec)
    box = _parse_box(args.box)
    curves = trace_im_zero(Q, box, args.nx, args.ny)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        curves.write_csv(fh)
    msg = f"wrote {args.out} ({len(curves.polylines)} polylines)"
    if args.svg:
        from .plots import render_levelset

        render_levelset(curves, title=args.spec, outfile=args.svg)
        msg += f" and {args.svg}"
    print(msg)
    dep = departure_points(curves)
    if dep:
        print("axis contacts: " + ", ".join(f"{x:.6g}" for x in dep))
    return 0


def _expected_angles(report):
    if report.case == 1:
        return 0.0, math.pi
    if report.case == 2:
        return (math.pi - report.theta0) / 2.0, (2.0 * math.pi - report.theta0) / 2.0
    return math.pi / 3.0, 2.0 * math.pi / 3.0


def _cmd_report(args):
    Q = parse_spec(args.spec)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    report = {"spec": function_to_dict(Q)}

    alpha = Q.factor.alpha
    if Q.factor.kind == ZERO_ONLY and alpha is not None and alpha.imag == 0.0:
        evidence = classify(Q, alpha.real)
        case = local_case(Q, alpha.real)
        report["classification"] = evidence.as_dict()
        report["local_case"] = case.as_dict()
        report["pairing_consistent"] = CASE_PAIRING[evidence.decided] == case.case
    else:
        report["classification"] = None
        report["note"] = "classification requires the normalized form with a real zero"

    path = track_path(Q, dense_contact_schedule(0.0, coarse_span=args.tau_span))
    track_file = outdir / "track.csv"
    with open(track_file, "w", encoding="utf-8", newline="\n") as fh:
        path.write_csv(fh)
    (outdir / "track.events.json").write_text(path.events_json() + "\n", encoding="utf-8")
    report["track"] = {
        "file": track_file.name,
        "events_file": "track.events.json",
        "samples": len(path.samples),
        "events": [e.as_dict() for e in path.events],
    }
    if path.events:
        ev = path.events[0]
        want = _expected_angles(ev.report)
        try:
            got = contact_angles(path, ev.z0, fit_window=1e-4)
            report["contact_angles"] = {
                "left": got[0],
                "right": got[1],
                "expected_left": want[0],
                "expected_right": want[1],
            }
        except GzntError as exc:
            report["contact_angles"] = {"error": str(exc)}

    curves = trace_im_zero(Q, _parse_box(args.box), args.nx, args.ny)
    levelset_file = outdir / "levelset.csv"
    with open(levelset_file, "w", encoding="utf-8", newline="\n") as fh:
        curves.write_csv(fh)
    report["levelset"] = {
        "file": levelset_file.name,
        "polylines": len(curves.polylines),
        "axis_contacts": departure_points(curves),
    }

    from .plots import render_levelset, render_trajectory

    render_levelset(curves, path, path.events, title=args.spec,
                    outfile=outdir / "levelset.png")
    render_trajectory(path, title=f"{args.spec} trajectory",
                      outfile=outdir / "trajectory.png")
    report["figures"] = ["levelset.png", "trajectory.png"]

    report_file = outdir / "report.json"
    report_file.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {report_file}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gznt-lab",
        description="Zeros of nonpositive type: evaluation, tracking, classification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate Q at a point")
    p.add_argument("--spec", required=True)
    p.add_argument("--z", required=True, help="complex point as re,im")
    p.add_argument("--extended", action="store_true", help="use the continuation across the axis")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("track", help="sample the zero trajectory")
    p.add_argument("--spec", required=True)
    p.add_argument("--tau-min", type=float, default=-1.0)
    p.add_argument("--tau-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--full-circle", action="store_true",
                   help="one loop of the parameter circle through infinity")
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=_cmd_track)

    p = sub.add_parser("classify", help="classify a real zero of nonpositive type")
    p.add_argument("--spec", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("levelset", help="trace the Im Q = 0 curves")
    p.add_argument("--spec", required=True)
    p.add_argument("--box", required=True, help="x0,x1,y0,y1")
    p.add_argument("--nx", type=int, required=True)
    p.add_argument("--ny", type=int, required=True)
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--svg", help="also render the curves to this file")
    p.set_defaults(func=_cmd_levelset)

    p = sub.add_parser("report", help="full pipeline: classify, track, angles, figures")
    p.add_argument("--spec", required=True)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--box", default="-2,2,0,2")
    p.add_argument("--nx", type=int, default=400)
    p.add_argument("--ny", type=int, default=200)
    p.add_argument("--tau-span", type=float, default=2.0)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except GzntError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
