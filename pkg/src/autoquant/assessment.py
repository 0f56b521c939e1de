"""Level of autonomy (LoA) classification and degree of autonomy (DoA).

The LoA is decided per operating region: a region is *feasible* when every
requisite capability meets both its reliability and its responsiveness
requirement there. DoA is only reported for feasible regions and is always
computed against that region's local requirements.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Sequence

import numpy as np

from .metrics import (
    INFINITE,
    IndeterminateFormError,
    MetricValue,
    capability_term,
    is_infinite,
    passes,
    reliability,
    reliability_success,
    responsiveness,
)
from .model import (
    CapabilityRequirement,
    Diagnostic,
    Dispersion,
    MeasuredPerformance,
    Repr,
    SystemSpec,
    TaskSpec,
    ValidationError,
    essential_requirement,
    to_variance,
    validate_task_spec,
)


class LoA(IntEnum):
    EXTERNALLY_CONTROLLED = 0
    REL_AND_RES_CONDITIONED = 1
    RELIABILITY_CONDITIONED = 2
    RESPONSIVENESS_CONDITIONED = 3
    UNCONDITIONAL = 4

    @property
    def label(self) -> str:
        return _LABELS[self]

    @property
    def description(self) -> str:
        return _DESCRIPTIONS[self]

    @property
    def extended_level(self) -> str:
        """Level on the ten-step chart that includes supervised modes."""
        return "<=5" if self == 0 else str(self + 5)


_LABELS = {
    0: "externally-controlled",
    1: "rel-and-res-conditioned",
    2: "reliability-conditioned",
    3: "responsiveness-conditioned",
    4: "unconditional",
}
_DESCRIPTIONS = {
    0: "Externally controlled or supervised autonomous functioning.",
    1: "Responsiveness- & reliability-conditioned full autonomy.",
    2: "Reliability-conditioned full autonomy.",
    3: "Responsiveness-conditioned full autonomy.",
    4: "Unconditional full autonomy.",
}


class AssessmentError(ValueError):
    """Specifications cannot be assessed; carries the diagnostics."""

    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        lines = "\n".join(f"  {d}" for d in self.diagnostics)
        super().__init__(f"{len(self.diagnostics)} diagnostic(s):\n{lines}")


def capability_reliability(required: Dispersion, actual: Dispersion) -> MetricValue:
    if required.repr is Repr.PROBABILITY and actual.repr is Repr.PROBABILITY:
        return reliability_success(required.value, actual.value)
    return reliability(to_variance(required), to_variance(actual))


@dataclass(frozen=True)
class CellResult:
    """Outcome of one capability against one requirement."""

    c_rel: MetricValue
    c_res: MetricValue

    @property
    def rel_pass(self) -> bool:
        return passes(self.c_rel)

    @property
    def res_pass(self) -> bool:
        return passes(self.c_res)

    @property
    def passed(self) -> bool:
        return self.rel_pass and self.res_pass


def evaluate(req: CapabilityRequirement, perf: MeasuredPerformance) -> CellResult:
    return CellResult(
        capability_reliability(req.dispersion, perf.dispersion),
        responsiveness(req.timing.period, perf.timing.period),
    )


@dataclass
class PassMatrix:
    """Per (capability, region) results plus the essential (global) row."""

    capabilities: list[str]
    regions: list[str]
    cells: dict[tuple[str, str], CellResult]
    essential: dict[str, CellResult]

    def feasible_regions(self) -> list[str]:
        return [r for r in self.regions
                if all(self.cells[c, r].passed for c in self.capabilities)]

    def failures(self) -> list[tuple[str, str, str]]:
        """Every failed ``(capability, region, dimension)`` triple."""
        out = []
        for r in self.regions:
            for c in self.capabilities:
                cell = self.cells[c, r]
                if not cell.rel_pass:
                    out.append((c, r, "reliability"))
                if not cell.res_pass:
                    out.append((c, r, "responsiveness"))
        return out


def pass_matrix(task: TaskSpec, system: SystemSpec) -> PassMatrix:
    regions = task.region_names
    cells = {}
    for r in regions:
        for req in task.local_requirements(r):
            cells[req.name, r] = evaluate(req, system.capabilities[req.name])
    essential = {
        c: evaluate(essential_requirement(c, task), system.capabilities[c])
        for c in task.capability_names
    }
    return PassMatrix(task.capability_names, regions, cells, essential)


def _level(matrix: PassMatrix) -> LoA:
    feasible = set(matrix.feasible_regions())
    if not feasible:
        return LoA.EXTERNALLY_CONTROLLED
    dims = {d for _, r, d in matrix.failures() if r not in feasible}
    if not dims:
        return LoA.UNCONDITIONAL
    if dims == {"reliability"}:
        return LoA.RELIABILITY_CONDITIONED
    if dims == {"responsiveness"}:
        return LoA.RESPONSIVENESS_CONDITIONED
    return LoA.REL_AND_RES_CONDITIONED


def classify_loa(task: TaskSpec, system: SystemSpec) -> tuple[LoA, PassMatrix | None]:
    """Classify the level of full autonomy of ``system`` at ``task``.

    A system lacking any requisite capability is level 0 (with no matrix).
    Any other specification problem raises :class:`AssessmentError`.
    """
    diags = validate_task_spec(task, system)
    missing = [d for d in diags if d.code == "missing-capability"]
    if missing and len(missing) == len(diags):
        return LoA.EXTERNALLY_CONTROLLED, None
    if diags:
        raise AssessmentError(diags)
    matrix = pass_matrix(task, system)
    return _level(matrix), matrix


def degree_of_autonomy(terms: Sequence[MetricValue]) -> MetricValue:
    """``n**2 / sum(terms)`` where each term is ``1/(c_rel*c_res)``.

    Any infinite term (a failed capability) gives 0. All-zero terms (every
    capability infinitely good) give :data:`INFINITE`.
    """
    terms = list(terms)
    if not terms:
        raise ValidationError("DoA needs at least one capability term")
    if any(is_infinite(t) for t in terms):
        return 0.0
    total = math.fsum(terms)
    if total == 0:
        return INFINITE
    n = len(terms)
    return n * n / total


def weighted_degree_of_autonomy(terms: Sequence[MetricValue], weights: Sequence[float]) -> MetricValue:
    """``n / (sum(w*t) / sum(w))``; equal weights reduce to :func:`degree_of_autonomy`."""
    terms, weights = list(terms), list(weights)
    if len(terms) != len(weights):
        raise ValidationError(f"{len(terms)} terms but {len(weights)} weights")
    if not terms:
        raise ValidationError("DoA needs at least one capability term")
    if any(not (w > 0 and math.isfinite(w)) for w in weights):
        raise ValidationError(f"weights must be positive and finite: {weights}")
    if any(is_infinite(t) for t in terms):
        return 0.0
    num = math.fsum(w * t for w, t in zip(weights, terms))
    if num == 0:
        return INFINITE
    return len(terms) * math.fsum(weights) / num


def region_terms(task: TaskSpec, system: SystemSpec, region: str) -> list[MetricValue]:
    out = []
    for req in task.local_requirements(region):
        cell = evaluate(req, system.capabilities[req.name])
        out.append(capability_term(cell.c_rel, cell.c_res))
    return out


@dataclass
class AssessmentReport:
    task: str
    system: str
    loa: LoA
    doa: dict[str, MetricValue] = field(default_factory=dict)
    weighted_doa: dict[str, MetricValue] = field(default_factory=dict)
    terms: dict[str, list[MetricValue]] = field(default_factory=dict)
    matrix: PassMatrix | None = None
    diagnostics: list[Diagnostic] = field(default_factory=list)


def assess(task: TaskSpec, system: SystemSpec) -> AssessmentReport:
    """LoA plus DoA for every feasible region, with failure diagnostics."""
    loa, matrix = classify_loa(task, system)
    report = AssessmentReport(task.name, system.name, loa, matrix=matrix)
    if matrix is None:
        report.diagnostics = [d for d in validate_task_spec(task, system)]
        return report
    for cap, region, dim in matrix.failures():
        cell = matrix.cells[cap, region]
        value = cell.c_rel if dim == "reliability" else cell.c_res
        report.diagnostics.append(Diagnostic(
            f"{dim}-failure", f"{dim} quotient {value} < 1", cap, region, dim))
    weights = [c.weight for c in task.capabilities]
    uniform = len(set(weights)) == 1
    for region in matrix.feasible_regions():
        try:
            terms = region_terms(task, system, region)
        except IndeterminateFormError as exc:
            report.diagnostics.append(Diagnostic("indeterminate-term", str(exc), "", region))
            continue
        report.terms[region] = terms
        report.doa[region] = doa = degree_of_autonomy(terms)
        if is_infinite(doa):
            report.diagnostics.append(Diagnostic(
                "unbounded-doa", "every capability has an infinite quotient", "", region))
        if not uniform:
            report.weighted_doa[region] = weighted_degree_of_autonomy(terms, weights)
    return report


def _grid(values: Iterable[float] | None, start, stop, step) -> np.ndarray:
    if values is not None:
        return np.asarray(list(values), dtype=float)
    if step is None or not step > 0:
        raise ValidationError(f"sweep step must be positive, got {step}")
    if not (start > 0 and stop >= start):
        raise ValidationError(f"sweep range must be positive and ordered: [{start}, {stop}]")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def sensitivity_sweep(
    task: TaskSpec,
    system: SystemSpec,
    capability: str,
    sigmas: Iterable[float] | None = None,
    *,
    start: float | None = None,
    stop: float | None = None,
    step: float | None = None,
    region: str | None = None,
) -> list[tuple[float, MetricValue]]:
    """DoA as a function of one capability's actual standard deviation.

    Everything else is held fixed. ``region`` defaults to the first region of
    the task. Grid points where any capability fails give DoA 0.
    """
    task.base(capability)
    region = region or task.region_names[0]
    perf = system.capabilities[capability]
    unit = perf.dispersion.unit
    out = []
    for s in _grid(sigmas, start, stop, step):
        s = float(s)
        varied = system.with_dispersion(capability, Dispersion.sigma(s, unit))
        out.append((s, degree_of_autonomy(region_terms(task, varied, region))))
    return out


def sweep_family(
    task: TaskSpec,
    system: SystemSpec,
    capability: str,
    sigma_refs: Sequence[float],
    sigmas: Sequence[float],
    region: str | None = None,
) -> dict[float, list[tuple[float, MetricValue]]]:
    """One :func:`sensitivity_sweep` per required standard deviation."""
    base = task.base(capability)
    out = {}
    for ref in sigma_refs:
        req = dataclasses.replace(base, dispersion=Dispersion.sigma(float(ref), base.dispersion.unit))
        out[float(ref)] = sensitivity_sweep(task.with_requirement(req), system, capability,
                                            sigmas, region=region)
    return out


def slope_at_reference(
    task: TaskSpec,
    system: SystemSpec,
    capability: str,
    sigma_ref: float,
    region: str | None = None,
    rel_step: float = 1e-6,
) -> float:
    """Backward finite-difference slope of DoA w.r.t. sigma_act at sigma_ref.

    The curve has a kink at sigma_ref (DoA drops to 0 beyond it) so only the
    left-hand derivative is meaningful.
    """
    base = task.base(capability)
    req = dataclasses.replace(base, dispersion=Dispersion.sigma(sigma_ref, base.dispersion.unit))
    h = sigma_ref * rel_step
    (_, d0), (_, d1) = sensitivity_sweep(task.with_requirement(req), system, capability,
                                         [sigma_ref - h, sigma_ref], region=region)
    return (d1 - d0) / h


def open_loop_displacement(speed_kmh: float, rate_hz: float) -> float:
    """Distance in metres travelled during one control period."""
    if speed_kmh < 0:
        raise ValidationError(f"speed must be non-negative, got {speed_kmh}")
    if not rate_hz > 0:
        raise ValidationError(f"update rate must be positive, got {rate_hz}")
    return speed_kmh / 3.6 / rate_hz
