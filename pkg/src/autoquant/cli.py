"""Assess autonomy against capability requirements and monitor capability integrity.

Exit codes: 0 ok, 1 assessment below threshold or integrity events, 2 input error.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from typing import Sequence

import numpy as np

from . import baselines
from .assessment import AssessmentError, assess, sensitivity_sweep, sweep_family
from .documents import SpecDocument, SpecError, parse_spec
from .integrity import IntegrityMonitor, MonitorConfig, TelemetryError, ZeroOperatingTimeError
from .metrics import reliability, responsiveness
from .model import Diagnostic, ValidationError, validate_task_spec
from .report import (
    REPORT_SCHEMA,
    assessment_to_dict,
    dumps_machine,
    render_assessment,
    render_event,
    render_risk,
    risk_to_dict,
    write_csv,
)
from .scenarios import NAMES as SCENARIOS
from .scenarios import load_scenario
from .telemetry import Fault, Profile, TelemetryFormatError, generate_telemetry, iter_telemetry, write_telemetry

EXIT_OK, EXIT_BELOW, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    def __init__(self, message: str, diagnostics: Sequence[Diagnostic] = ()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


def _load(args) -> SpecDocument:
    if getattr(args, "scenario", None):
        try:
            return load_scenario(args.scenario).document
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
    if not getattr(args, "spec", None):
        raise InputError("give a spec file or --scenario")
    try:
        return parse_spec(args.spec, strict=args.strict)
    except OSError as exc:
        raise InputError(f"cannot read {args.spec}: {exc.strerror}") from None
    except SpecError as exc:
        raise InputError(f"invalid spec {args.spec}", exc.diagnostics) from None


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _systems(doc: SpecDocument, names):
    if names:
        try:
            return [doc.system(n) for n in names]
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
    return list(doc.systems) or [None]


def cmd_assess(args) -> int:
    doc = _load(args)
    for w in doc.warnings:
        print(f"warning: {w}", file=sys.stderr)
    reports, problems = [], []
    for system in _systems(doc, args.system):
        diags = validate_task_spec(doc.task, system)
        if any(d.code != "missing-capability" for d in diags):
            problems.extend(diags)
            continue
        try:
            reports.append(assess(doc.task, system))
        except AssessmentError as exc:
            problems.extend(exc.diagnostics)
    if problems:
        n = sum(d.code == "insufficient-specification" for d in problems)
        msg = "assessment refused"
        if n:
            msg += f": insufficient specification ({n} unspecified requirement(s))"
        raise InputError(msg, problems)
    for r in reports:
        sys.stdout.write(render_assessment(r, ascii=args.ascii))
    if args.out:
        payload = {"schema": REPORT_SCHEMA, "reports": [assessment_to_dict(r) for r in reports]}
        with _output(args.out) as fh:
            fh.write(dumps_machine(payload))
    return EXIT_OK if all(r.loa >= 1 for r in reports) else EXIT_BELOW


def cmd_monitor(args) -> int:
    doc = _load(args)
    config = MonitorConfig(args.error_window, args.outcome_window, args.region)
    try:
        monitor = IntegrityMonitor(doc.task, config)
    except (ValidationError, KeyError) as exc:
        raise InputError(f"cannot monitor this task: {exc}") from None
    try:
        with open(args.telemetry, newline="", encoding="utf-8") as fh:
            for ev in iter_telemetry(fh):
                for out in monitor.ingest(ev):
                    print(render_event(out), flush=True)
    except OSError as exc:
        raise InputError(f"cannot read {args.telemetry}: {exc.strerror}") from None
    except TelemetryFormatError as exc:
        raise InputError(f"corrupt telemetry {args.telemetry}:\n{exc}") from None
    except TelemetryError as exc:
        raise InputError(f"telemetry rejected: {exc}") from None
    try:
        summary = monitor.risk_summary()
    except ZeroOperatingTimeError:
        raise InputError("telemetry covers zero operating hours") from None
    sys.stdout.write(render_risk(summary))
    for d in monitor.diagnostics:
        print(f"warning: {d}", file=sys.stderr)
    if args.out:
        payload = {
            "schema": REPORT_SCHEMA,
            "events": [{"capability": e.capability, "kind": e.kind, "timestamp": e.timestamp,
                        "protection_level": e.protection_level, "alert_limit": e.alert_limit}
                       for e in monitor.events],
            "risk": risk_to_dict(summary),
        }
        with _output(args.out) as fh:
            fh.write(dumps_machine(payload))
    integrity = sum(e.integrity_events for e in summary)
    return EXIT_OK if integrity == 0 else EXIT_BELOW


def cmd_generate(args) -> int:
    doc = _load(args)
    try:
        faults = tuple(Fault.parse(f) for f in args.fault)
        profile = Profile(args.duration, args.sigma_scale, faults,
                          tuple(args.capability) if args.capability else None)
        system = doc.system(args.system[0]) if args.system else (doc.systems[0] if doc.systems else None)
        events = generate_telemetry(doc.task, system, profile, seed=args.seed)
    except (ValidationError, KeyError) as exc:
        raise InputError(f"invalid profile: {exc}") from None
    with _output(args.out) as fh:
        write_telemetry(events, fh)
    return EXIT_OK


def _grid(args) -> np.ndarray:
    if not (args.step and args.step > 0 and args.stop >= args.start > 0):
        raise InputError(f"empty or invalid range start={args.start} stop={args.stop} step={args.step}")
    n = int(np.floor((args.stop - args.start) / args.step + 1e-9)) + 1
    return args.start + args.step * np.arange(n)


def cmd_sweep(args) -> int:
    xs = _grid(args)
    refs = [float(r) for r in args.refs.split(",")] if args.refs else []
    if args.curve == "rel":
        if not refs:
            raise InputError("--refs (sigma_ref values) is required for the reliability curve")
        header = ["sigma_act"] + [f"C_rel[sigma_ref={r}]" for r in refs]
        rows = [[x] + [reliability(r * r, x * x) for r in refs] for x in xs]
    elif args.curve == "res":
        if not refs:
            raise InputError("--refs (t_ref values) is required for the responsiveness curve")
        header = ["t_act"] + [f"C_res[t_ref={r}]" for r in refs]
        rows = [[x] + [responsiveness(r, x) for r in refs] for x in xs]
    else:
        doc = _load(args)
        if not args.capability:
            raise InputError("--capability is required for the DoA sweep")
        if not doc.systems:
            raise InputError("the DoA sweep needs a system")
        system = doc.system(args.system[0]) if args.system else doc.systems[0]
        cap = args.capability[0]
        try:
            if refs:
                family = sweep_family(doc.task, system, cap, refs, xs, region=args.region)
                header = ["sigma_act"] + [f"DoA[sigma_ref={r}]" for r in refs]
                rows = [[x] + [family[r][k][1] for r in refs] for k, x in enumerate(xs)]
            else:
                header = ["sigma_act", "DoA"]
                rows = [list(p) for p in sensitivity_sweep(doc.task, system, cap, xs, region=args.region)]
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
    with _output(args.out) as fh:
        write_csv(fh, header, rows)
    return EXIT_OK


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",")]


def cmd_baseline(args) -> int:
    try:
        if args.variant == "level":
            value = baselines.insaurralde_level(_floats(args.deltas), args.n)
        elif args.variant == "ratio":
            value = baselines.insaurralde_ratio(_floats(args.actual), _floats(args.standard), args.n)
        elif args.variant == "curtin":
            value = baselines.curtin_autonomy(args.control_bits, args.total_bits, args.contact_time,
                                              args.total_time, args.c_n, args.i, args.j)
            defaults = [k for k, v in baselines.CURTIN_DEFAULTS.items() if getattr(args, k) == v]
            if defaults:
                print(f"note: uncalibrated default constant(s): {', '.join(defaults)}", file=sys.stderr)
        else:
            grid = np.load(args.grid)
            b = _floats(args.bounds)
            if len(b) != 6:
                raise ValidationError("--bounds needs six numbers: p0,p1,a0,a1,t0,t1")
            value = baselines.doboli_integral(grid, (b[0], b[1]), (b[2], b[3]), (b[4], b[5]))
    except (ValidationError, ValueError, OSError) as exc:
        raise InputError(f"baseline {args.variant}: {exc}") from None
    print(repr(value))
    return EXIT_OK


def cmd_scenario(args) -> int:
    for name in SCENARIOS:
        bundle = load_scenario(name)
        systems = ", ".join(s.name for s in bundle.document.systems) or "none"
        print(f"{name}\t{bundle.document.task.name}\tcapabilities={bundle.document.task.n}\tsystems={systems}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def global_flags(parser, top):
        # accepted before or after the subcommand; SUPPRESS keeps a subparser
        # from overwriting a value given at the top level
        def default(value):
            return value if top else argparse.SUPPRESS

        parser.add_argument("--strict", action="store_true", default=default(False),
                            help="reject unknown fields in spec documents")
        parser.add_argument("--seed", type=int, default=default(0), help="random seed for generated data")
        parser.add_argument("--out", default=default(None), help="machine-readable output path")

    common = argparse.ArgumentParser(add_help=False)
    global_flags(common, top=False)

    spec = argparse.ArgumentParser(add_help=False)
    spec.add_argument("--scenario", choices=SCENARIOS, help="use a bundled scenario instead of a file")
    spec.add_argument("--system", action="append", help="system name (repeatable)")

    p = argparse.ArgumentParser(prog="autoquant", description=__doc__.splitlines()[0])
    global_flags(p, top=True)
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("assess", parents=[common, spec], help="LoA and DoA for each system")
    a.add_argument("spec", nargs="?")
    a.add_argument("--ascii", action="store_true", help="ASCII fixed-point notation")
    a.set_defaults(func=cmd_assess)

    m = sub.add_parser("monitor", parents=[common, spec], help="replay telemetry through the integrity monitor")
    m.add_argument("spec", nargs="?")
    m.add_argument("--telemetry", required=True)
    m.add_argument("--region", help="monitor against this region's requirements (default: essential)")
    m.add_argument("--error-window", type=int, default=100)
    m.add_argument("--outcome-window", type=int, default=200)
    m.set_defaults(func=cmd_monitor)

    g = sub.add_parser("generate", parents=[common, spec], help="write synthetic telemetry")
    g.add_argument("spec", nargs="?")
    g.add_argument("--duration", type=float, default=200.0)
    g.add_argument("--sigma-scale", type=float, help="nominal sigma as a multiple of sigma_ref")
    g.add_argument("--fault", action="append", default=[], help="CAP:step:FACTOR@START or CAP:ramp:FACTOR@START+DUR")
    g.add_argument("--capability", action="append", help="restrict to these capabilities")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("sweep", parents=[common, spec], help="metric and DoA curves as CSV")
    s.add_argument("spec", nargs="?")
    s.add_argument("--curve", choices=("rel", "res", "doa"), default="doa")
    s.add_argument("--capability", action="append")
    s.add_argument("--region")
    s.add_argument("--refs", help="comma-separated reference values for a curve family")
    s.add_argument("--start", type=float, required=True)
    s.add_argument("--stop", type=float, required=True)
    s.add_argument("--step", type=float, required=True)
    s.set_defaults(func=cmd_sweep)

    b = sub.add_parser("baseline", parents=[common], help="earlier autonomy formulas")
    b.add_argument("variant", choices=("level", "ratio", "doboli", "curtin"))
    b.add_argument("--n", type=float, default=5)
    b.add_argument("--deltas", default="0,0,0,0,0")
    b.add_argument("--actual", default="1,1,1,1,1")
    b.add_argument("--standard", default="1,1,1,1,1")
    b.add_argument("--grid", help=".npy file with effort samples, shape (P, A, T)")
    b.add_argument("--bounds", default="0,1,0,1,0,1")
    b.add_argument("--control-bits", type=float, default=1.0)
    b.add_argument("--total-bits", type=float, default=1.0)
    b.add_argument("--contact-time", type=float, default=1.0)
    b.add_argument("--total-time", type=float, default=1.0)
    b.add_argument("--c-n", type=float, default=baselines.CURTIN_DEFAULTS["c_n"])
    b.add_argument("--i", type=float, default=baselines.CURTIN_DEFAULTS["i"])
    b.add_argument("--j", type=float, default=baselines.CURTIN_DEFAULTS["j"])
    b.set_defaults(func=cmd_baseline)

    sc = sub.add_parser("scenario", parents=[common], help="bundled scenarios")
    sc.add_argument("action", choices=("list",))
    sc.set_defaults(func=cmd_scenario)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for d in exc.diagnostics:
            print(f"  {d}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
