"""Human tables, machine (JSON) reports and curve CSV output."""

from __future__ import annotations

import csv
import json
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Iterable, Sequence, TextIO

from .assessment import AssessmentReport
from .integrity import IntegrityEvent, RiskEntry
from .metrics import MetricValue, is_infinite

REPORT_SCHEMA = 1


def format_micro(value: MetricValue, decimals: int = 4, ascii: bool = False) -> str:
    """Fixed-point display in units of 1e-6, rounded to ``decimals`` places.

    >>> format_micro(27.524469301623306)
    '27524500×10⁻⁶'
    """
    suffix = "x10^-6" if ascii else "×10⁻⁶"
    if is_infinite(value):
        return "inf"
    q = Decimal(repr(float(value))).quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_EVEN)
    return f"{int(q.scaleb(6))}{suffix}"


def metric_json(value: MetricValue):
    return "inf" if is_infinite(value) else float(value)


def metric_text(value: MetricValue) -> str:
    return "inf" if is_infinite(value) else repr(float(value))


def assessment_to_dict(report: AssessmentReport) -> dict:
    out = {
        "task": report.task,
        "system": report.system,
        "loa": int(report.loa),
        "loa_label": report.loa.label,
        "loa_description": report.loa.description,
        "loa_extended": report.loa.extended_level,
        "doa": {
            region: {"value": metric_json(v), "fixed": format_micro(v, ascii=True)}
            for region, v in report.doa.items()
        },
        "diagnostics": [
            {"code": d.code, "message": d.message, "capability": d.capability,
             "region": d.region, "field": d.field}
            for d in report.diagnostics
        ],
    }
    if report.weighted_doa:
        out["weighted_doa"] = {r: metric_json(v) for r, v in report.weighted_doa.items()}
    if report.matrix is not None:
        m = report.matrix
        out["pass_matrix"] = {
            cap: {
                region: {"c_rel": metric_json(m.cells[cap, region].c_rel),
                         "c_res": metric_json(m.cells[cap, region].c_res),
                         "rel_pass": m.cells[cap, region].rel_pass,
                         "res_pass": m.cells[cap, region].res_pass}
                for region in m.regions
            } | {"essential": {"rel_pass": m.essential[cap].rel_pass,
                               "res_pass": m.essential[cap].res_pass}}
            for cap in m.capabilities
        }
    return out


def dumps_machine(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def render_assessment(report: AssessmentReport, ascii: bool = False) -> str:
    lines = [f"{report.task} / system {report.system}",
             f"  LoA {int(report.loa)} ({report.loa.label})"]
    if report.matrix is not None:
        m = report.matrix
        width = max(len(c) for c in m.capabilities)
        lines.append("  " + "capability".ljust(width) + "".join(f"  {r:>22}" for r in m.regions))
        for cap in m.capabilities:
            row = "  " + cap.ljust(width)
            for r in m.regions:
                cell = m.cells[cap, r]
                mark = "ok" if cell.passed else "FAIL"
                row += f"  {_short(cell.c_rel):>8} {_short(cell.c_res):>8} {mark:>4}"
            lines.append(row)
    for region, doa in report.doa.items():
        lines.append(f"  DoA[{region}] = {metric_text(doa)}  ({format_micro(doa, ascii=ascii)})")
    for region, doa in report.weighted_doa.items():
        lines.append(f"  weighted DoA[{region}] = {metric_text(doa)}")
    for d in report.diagnostics:
        lines.append(f"  ! {d}")
    return "\n".join(lines) + "\n"


def _short(v: MetricValue) -> str:
    return "inf" if is_infinite(v) else f"{float(v):.4g}"


def render_event(ev: IntegrityEvent) -> str:
    return (f"{ev.timestamp:.6f} {ev.capability} {ev.kind} "
            f"PL={ev.protection_level:.6g} AL={ev.alert_limit:.6g}")


def render_risk(summary: Sequence[RiskEntry]) -> str:
    width = max([len(e.capability) for e in summary] + [10])
    lines = ["  " + "capability".ljust(width) + "  events      hours       rate(FPH)     IR(FPH)  budget"]
    for e in summary:
        rate = "-" if e.observed_rate is None else f"{e.observed_rate:.3e}"
        ir = "-" if e.budget is None else f"{e.budget:.1e}"
        ok = {True: "ok", False: "EXCEEDED", None: "-"}[e.within_budget]
        lines.append(f"  {e.capability.ljust(width)}  {e.integrity_events:6d}  {e.operating_hours:9.5f}"
                     f"  {rate:>14}  {ir:>10}  {ok}")
    return "\n".join(lines) + "\n"


def risk_to_dict(summary: Sequence[RiskEntry]) -> list[dict]:
    return [
        {"capability": e.capability, "integrity_events": e.integrity_events,
         "operating_hours": e.operating_hours, "observed_rate": e.observed_rate,
         "budget": e.budget, "within_budget": e.within_budget}
        for e in summary
    ]


def write_csv(stream: TextIO, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """RFC 4180 CSV (CRLF line endings); infinite values are written as ``inf``."""
    writer = csv.writer(stream, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([metric_text(v) if not isinstance(v, str) else v for v in row])
