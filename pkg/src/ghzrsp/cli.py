"""Command-line front end.

Exit codes: 0 success, 1 audit discrepancy or failed check, 2 usage error,
3 protocol stage unavailable.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__, serialize
from .audit import audit_tables
from .bases import BasisUnavailable
from .checks import run_suites
from .protocol import Enumerate, ProtocolUnavailable, Sample, run_qubit_rsp, run_qudit_rsp
from .qudit import COMPARE_TOL, Angles2, Angles4, Angles8, StateError

OUTPUT_DIR_ENV = "GHZRSP_OUTPUT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNAVAILABLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ghzrsp", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--output", "-o", help=f"output path, '-' for stdout (default: ${OUTPUT_DIR_ENV} or stdout)")
        sp.add_argument("--format", choices=("json", "text"), default="json")

    run = sub.add_parser("run", help="run a protocol and emit traces")
    run.add_argument("--protocol", choices=("qubit", "d4", "d8"), required=True)
    run.add_argument("--params", type=Path, help="JSON parameter file")
    run.add_argument("--theta", type=float)
    run.add_argument("--phi", type=float)
    for i in (1, 2, 3):
        run.add_argument(f"--gamma{i}", type=float)
        run.add_argument(f"--alpha{i}", type=float)
    run.add_argument("--thetas", type=_floats, help="8 comma-separated angles (d8)")
    run.add_argument("--phis", type=_floats, help="8 comma-separated phases, first is 0 (d8)")
    run.add_argument("--mode", choices=("sample", "enumerate"), default="enumerate")
    run.add_argument("--seed", type=int)
    common(run)

    audit = sub.add_parser("audit", help="check the listed correction tables against the oracle")
    audit.add_argument("--protocol", choices=("qubit", "d4"), required=True)
    audit.add_argument("--samples", type=int, default=100)
    audit.add_argument("--seed", type=int, default=0)
    common(audit)

    check = sub.add_parser("check-bases", help="orthonormality suites for the measurement bases")
    check.add_argument("--d", type=int, choices=(2, 4, 8), required=True)
    check.add_argument("--samples", type=int, default=1000)
    check.add_argument("--seed", type=int, default=0)
    common(check)
    return p


def _load_params(args) -> dict:
    values = {}
    if args.params is not None:
        try:
            values.update(json.loads(args.params.read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read parameter file: {exc}") from exc
    for key in ("theta", "phi", "gamma1", "gamma2", "gamma3", "alpha1", "alpha2", "alpha3",
                "thetas", "phis"):
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    return values


def parse_angles(protocol: str, values: dict):
    try:
        if protocol == "qubit":
            return Angles2(float(values["theta"]), float(values["phi"]))
        if protocol == "d4":
            return Angles4(*(float(values[k]) for k in
                             ("gamma1", "gamma2", "gamma3", "alpha1", "alpha2", "alpha3")))
        return Angles8(tuple(values["thetas"]), tuple(values["phis"]))
    except KeyError as exc:
        raise UsageError(f"missing parameter {exc.args[0]!r} for protocol {protocol}") from exc
    except (StateError, TypeError, ValueError) as exc:
        raise UsageError(f"invalid parameters: {exc}") from exc


def _emit(args, text: str):
    dest = args.output
    if dest is None and os.environ.get(OUTPUT_DIR_ENV):
        name = f"{args.command}-{getattr(args, 'protocol', None) or f'd{args.d}'}"
        dest = str(Path(os.environ[OUTPUT_DIR_ENV]) / f"{name}.{'json' if args.format == 'json' else 'txt'}")
    if dest is None or dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).parent.mkdir(parents=True, exist_ok=True)
        Path(dest).write_text(text)


def _fmt_outcomes(o):
    return ",".join(str(x) for x in o)


def _run_text(traces) -> str:
    lines = [f"{'outcomes':<10}{'probability':>14}  {'correction':<22}{'fidelity':>20}  bits"]
    for t in traces:
        lines.append(f"{_fmt_outcomes(t.outcomes):<10}{t.probability:>14.12f}  "
                     f"{t.corrections[-1].name:<22}{t.fidelity:>20.17f}  {t.total_bits}")
    return "\n".join(lines) + "\n"


def cmd_run(args) -> int:
    if args.mode == "sample" and args.seed is None:
        raise UsageError("--mode sample requires --seed")
    params = parse_angles(args.protocol, _load_params(args))
    mode = Sample(args.seed) if args.mode == "sample" else Enumerate()
    try:
        if args.protocol == "qubit":
            traces = run_qubit_rsp(params, mode)
        else:
            traces = run_qudit_rsp(int(args.protocol[1:]), params, mode)
    except (ProtocolUnavailable, BasisUnavailable) as exc:
        print(f"ghzrsp: protocol {args.protocol} unavailable: {exc}", file=sys.stderr)
        return EXIT_UNAVAILABLE
    if args.format == "json":
        doc = {"schema_version": serialize.SCHEMA_VERSION, "command": "run", "mode": args.mode,
               "seed": args.seed if args.mode == "sample" else None,
               "traces": [serialize.trace_to_dict(t) for t in traces]}
        _emit(args, serialize.dumps(doc))
    else:
        _emit(args, _run_text(traces))
    return EXIT_OK if all(t.fidelity >= 1.0 - COMPARE_TOL for t in traces) else EXIT_FAIL


def cmd_audit(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    report = audit_tables(args.protocol, args.samples, args.seed)
    if args.format == "json":
        doc = {"schema_version": serialize.SCHEMA_VERSION, "command": "audit",
               **serialize.report_to_dict(report)}
        _emit(args, serialize.dumps(doc))
    else:
        lines = [f"{'pair':<6}{'listed':<22}{'agrees':<8}{'max deficit':>14}  oracle constant"]
        for p in report.pairs:
            lines.append(f"{_fmt_outcomes(p.outcomes):<6}{p.listed_name:<22}{str(p.agrees):<8}"
                         f"{p.max_fidelity_deficit:>14.3e}  {p.oracle_constant}")
        lines.append(f"discrepancies: {len(report.discrepancies)}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_check_bases(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    results = run_suites(args.d, args.samples, args.seed)
    if args.format == "json":
        doc = {"schema_version": serialize.SCHEMA_VERSION, "command": "check-bases", "d": args.d,
               "samples": args.samples, "seed": args.seed,
               "suites": [r.as_dict() for r in results]}
        for r in doc["suites"]:
            r["max_deviation"] = serialize.as_float(r["max_deviation"])
        _emit(args, serialize.dumps(doc))
    else:
        lines = [f"{r.name:<16}{r.stage:<7}{r.samples:>6}  {r.max_deviation:.3e}  "
                 f"{'PASS' if r.passed else 'FAIL'} {r.error}".rstrip() for r in results]
        _emit(args, "\n".join(lines) + "\n")
    theta_failed = any(not r.passed for r in results if r.stage == "theta")
    phi_failed = any(not r.passed for r in results if r.stage == "phi")
    if phi_failed or (theta_failed and args.d != 8):
        return EXIT_FAIL
    if theta_failed:
        print("ghzrsp: d=8 theta-stage basis unavailable; phase stage passed", file=sys.stderr)
        return EXIT_UNAVAILABLE
    return EXIT_OK


COMMANDS = {"run": cmd_run, "audit": cmd_audit, "check-bases": cmd_check_bases}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ghzrsp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
