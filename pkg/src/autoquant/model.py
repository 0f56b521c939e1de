"""Domain types: capabilities, requirements, operating regions, measurements.

All types are frozen dataclasses. Construction does not validate value
ranges so that malformed specifications can be represented and reported
by :func:`validate_task_spec`; the numeric conversions raise
:class:`ValidationError` when handed out-of-range values.
"""

from __future__ import annotations

import dataclasses
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping

#: Gaussian quantile for a 10 dangerous failures per 1e9 h budget.
INTEGRITY_FACTOR = 5.730729

#: Unit string that marks a success-probability measurement.
PROBABILITY_UNIT = "probability"

#: Region name used when a task declares no operating regions.
GLOBAL_REGION = "global"


class ValidationError(ValueError):
    """A value violates a domain invariant."""


class Repr(str, Enum):
    SIGMA = "sigma"
    VARIANCE = "variance"
    ALERT_LIMIT = "alert_limit"
    PROBABILITY = "probability"


class TimingRepr(str, Enum):
    HZ = "hz"
    SECONDS = "seconds"


@dataclass(frozen=True)
class MeasureKind:
    """Gaussian error in a free-form unit, or a success probability."""

    unit: str

    @property
    def is_success(self) -> bool:
        return self.unit == PROBABILITY_UNIT

    @classmethod
    def gaussian(cls, unit: str) -> "MeasureKind":
        return cls(unit)

    @classmethod
    def success(cls) -> "MeasureKind":
        return cls(PROBABILITY_UNIT)

    def __str__(self) -> str:
        return "success-probability" if self.is_success else f"gaussian-error[{self.unit}]"


@dataclass(frozen=True)
class Dispersion:
    value: float
    repr: Repr
    unit: str = ""

    def __post_init__(self):
        object.__setattr__(self, "repr", Repr(self.repr))
        if self.repr is Repr.PROBABILITY and not self.unit:
            object.__setattr__(self, "unit", PROBABILITY_UNIT)

    @property
    def kind(self) -> MeasureKind:
        return MeasureKind(self.unit)

    @classmethod
    def sigma(cls, value: float, unit: str) -> "Dispersion":
        return cls(value, Repr.SIGMA, unit)

    @classmethod
    def variance(cls, value: float, unit: str) -> "Dispersion":
        return cls(value, Repr.VARIANCE, unit)

    @classmethod
    def alert_limit(cls, value: float, unit: str) -> "Dispersion":
        return cls(value, Repr.ALERT_LIMIT, unit)

    @classmethod
    def probability(cls, value: float) -> "Dispersion":
        return cls(value, Repr.PROBABILITY, PROBABILITY_UNIT)

    @property
    def variance_value(self) -> float:
        return to_variance(self)

    @property
    def sigma_value(self) -> float:
        return math.sqrt(to_variance(self))

    def problems(self) -> list[str]:
        """Invariant violations as short messages; empty when valid."""
        out = []
        if not math.isfinite(self.value):
            out.append(f"non-finite dispersion {self.value!r}")
        elif self.repr is Repr.PROBABILITY:
            if not self.kind.is_success:
                out.append(f"probability representation with unit {self.unit!r}")
            if not 0.0 <= self.value <= 1.0:
                out.append(f"probability out of range: {self.value}")
        elif self.value < 0:
            out.append(f"negative dispersion: {self.value}")
        return out


def to_variance(d: Dispersion) -> float:
    """Convert any dispersion representation to a variance.

    Success probabilities use the per-trial Bernoulli variance ``p(1-p)``;
    the trial count cancels in every variance ratio so it is never needed.
    """
    problems = d.problems()
    if problems:
        raise ValidationError("; ".join(problems))
    v = float(d.value)
    if d.repr is Repr.SIGMA:
        return v * v
    if d.repr is Repr.VARIANCE:
        return v
    if d.repr is Repr.ALERT_LIMIT:
        s = v / INTEGRITY_FACTOR
        return s * s
    return v * (1.0 - v)


@dataclass(frozen=True)
class Timing:
    """A response time, stored as given (period in seconds or rate in Hz)."""

    value: float
    repr: TimingRepr = TimingRepr.SECONDS

    def __post_init__(self):
        object.__setattr__(self, "repr", TimingRepr(self.repr))

    @classmethod
    def hz(cls, value: float) -> "Timing":
        return cls(value, TimingRepr.HZ)

    @classmethod
    def seconds(cls, value: float) -> "Timing":
        return cls(value, TimingRepr.SECONDS)

    @property
    def period(self) -> float:
        if not self.value > 0:
            raise ValidationError(f"timing must be positive, got {self.value}")
        return 1.0 / self.value if self.repr is TimingRepr.HZ else float(self.value)

    @property
    def frequency(self) -> float:
        return 1.0 / self.period


@dataclass(frozen=True)
class CapabilityRequirement:
    """Requirement for one requisite capability.

    ``dispersion`` or ``timing`` may be ``None`` when the source leaves the
    requirement unspecified; such a task cannot be assessed.
    """

    name: str
    dispersion: Dispersion | None
    timing: Timing | None
    integrity_risk: float | None = None
    tta: float = 1.0
    weight: float = 1.0

    @property
    def kind(self) -> MeasureKind | None:
        return None if self.dispersion is None else self.dispersion.kind


OVERRIDABLE = ("dispersion", "timing", "integrity_risk", "tta")


@dataclass(frozen=True)
class OperatingRegion:
    """A named region with per-capability requirement overrides.

    ``overrides`` maps a capability name to a mapping of requirement field
    names (a subset of ``dispersion``, ``timing``, ``integrity_risk``,
    ``tta``) to replacement values. An explicit ``None`` marks the field as
    unspecified in this region.
    """

    name: str
    overrides: Mapping[str, Mapping[str, Any]] = field(default_factory=dict)


@dataclass(frozen=True)
class TaskSpec:
    name: str
    capabilities: tuple[CapabilityRequirement, ...]
    regions: tuple[OperatingRegion, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "capabilities", tuple(self.capabilities))
        object.__setattr__(self, "regions", tuple(self.regions))

    @property
    def n(self) -> int:
        return len(self.capabilities)

    @property
    def capability_names(self) -> list[str]:
        return [c.name for c in self.capabilities]

    @property
    def region_names(self) -> list[str]:
        return [r.name for r in self.regions] or [GLOBAL_REGION]

    def base(self, capability: str) -> CapabilityRequirement:
        for c in self.capabilities:
            if c.name == capability:
                return c
        raise KeyError(f"unknown capability {capability!r} in task {self.name!r}")

    def region(self, name: str) -> OperatingRegion:
        for r in self.regions:
            if r.name == name:
                return r
        if name == GLOBAL_REGION and not self.regions:
            return OperatingRegion(GLOBAL_REGION)
        raise KeyError(f"unknown region {name!r} in task {self.name!r}")

    def local_requirement(self, capability: str, region: str) -> CapabilityRequirement:
        """Requirement in ``region``, falling back to the base requirement."""
        base = self.base(capability)
        override = self.region(region).overrides.get(capability, {})
        return dataclasses.replace(base, **{k: v for k, v in override.items() if k in OVERRIDABLE})

    def local_requirements(self, region: str) -> list[CapabilityRequirement]:
        return [self.local_requirement(c.name, region) for c in self.capabilities]

    def with_requirement(self, req: CapabilityRequirement) -> "TaskSpec":
        """Copy with the base requirement of ``req.name`` replaced.

        Region overrides of the replaced fields are dropped so that the new
        value applies everywhere.
        """
        self.base(req.name)
        caps = tuple(req if c.name == req.name else c for c in self.capabilities)
        old = self.base(req.name)
        changed = {f for f in OVERRIDABLE if getattr(old, f) != getattr(req, f)}
        regions = []
        for r in self.regions:
            ov = dict(r.overrides)
            if req.name in ov:
                ov[req.name] = {k: v for k, v in ov[req.name].items() if k not in changed}
            regions.append(OperatingRegion(r.name, ov))
        return TaskSpec(self.name, caps, tuple(regions))


@dataclass(frozen=True)
class MeasuredPerformance:
    dispersion: Dispersion
    timing: Timing


@dataclass(frozen=True)
class SystemSpec:
    name: str
    capabilities: Mapping[str, MeasuredPerformance]

    def with_dispersion(self, capability: str, dispersion: Dispersion) -> "SystemSpec":
        caps = dict(self.capabilities)
        caps[capability] = dataclasses.replace(caps[capability], dispersion=dispersion)
        return SystemSpec(self.name, caps)


def essential_requirement(capability: str, task: TaskSpec) -> CapabilityRequirement:
    """The global requirement: tightest values over the base and all regions.

    Minimum variance, minimum period, smallest integrity risk and smallest
    TTA win. If any contributing value is unspecified the corresponding
    field of the result is ``None``.
    """
    base = task.base(capability)
    candidates = [base] + [task.local_requirement(capability, r.name) for r in task.regions]

    def tightest(attr, key):
        values = [getattr(c, attr) for c in candidates]
        if any(v is None for v in values):
            return None
        return min(values, key=key)

    return dataclasses.replace(
        base,
        dispersion=tightest("dispersion", to_variance),
        timing=tightest("timing", lambda t: t.period),
        integrity_risk=tightest("integrity_risk", float),
        tta=tightest("tta", float),
    )


@dataclass(frozen=True, order=True)
class Diagnostic:
    """One problem found in a specification or during assessment."""

    code: str
    message: str
    capability: str = ""
    region: str = ""
    field: str = ""

    def __str__(self) -> str:
        where = "/".join(p for p in (self.capability, self.region, self.field) if p)
        return f"{self.code}: {self.message}" + (f" [{where}]" if where else "")


def _requirement_diagnostics(req: CapabilityRequirement, region: str) -> list[Diagnostic]:
    out = []
    for fname in ("dispersion", "timing"):
        if getattr(req, fname) is None:
            out.append(Diagnostic(
                "insufficient-specification",
                f"{fname} requirement not specified",
                req.name, region, fname,
            ))
    if req.dispersion is not None:
        for p in req.dispersion.problems():
            code = "probability-out-of-range" if "probability out" in p else "invalid-dispersion"
            out.append(Diagnostic(code, p, req.name, region, "dispersion"))
    if req.timing is not None and not req.timing.value > 0:
        out.append(Diagnostic("non-positive-timing", f"timing {req.timing.value}",
                              req.name, region, "timing"))
    if req.integrity_risk is not None and not 0.0 < req.integrity_risk <= 1.0:
        out.append(Diagnostic("invalid-integrity-risk", f"integrity risk {req.integrity_risk}",
                              req.name, region, "integrity_risk"))
    if not req.tta > 0:
        out.append(Diagnostic("invalid-tta", f"tta {req.tta}", req.name, region, "tta"))
    return out


def task_diagnostics(task: TaskSpec) -> list[Diagnostic]:
    """Diagnostics for the task alone (no system)."""
    out = []
    if task.n < 1:
        out.append(Diagnostic("empty-task", "task has no requisite capabilities"))
    counts = Counter(task.capability_names)
    for name, k in sorted(counts.items()):
        if k > 1:
            out.append(Diagnostic("duplicate-capability", f"declared {k} times", name))
    names = set(counts)
    for cap in task.capabilities:
        if cap.weight is None or not cap.weight > 0:
            out.append(Diagnostic("invalid-weight", f"weight {cap.weight}", cap.name, "", "weight"))
        out.extend(_requirement_diagnostics(cap, ""))
    for region in task.regions:
        for cap_name, override in region.overrides.items():
            if cap_name not in names:
                out.append(Diagnostic("unknown-capability",
                                      "override references a capability outside the requisite set",
                                      cap_name, region.name))
                continue
            local = task.local_requirement(cap_name, region.name)
            # only report fields the region actually sets
            for d in _requirement_diagnostics(local, region.name):
                if d.field in override:
                    out.append(d)
            for key in override:
                if key not in OVERRIDABLE:
                    out.append(Diagnostic("unknown-field", f"cannot override {key!r}",
                                          cap_name, region.name, key))
            base_kind = task.base(cap_name).kind
            if local.kind is not None and base_kind is not None and local.kind != base_kind:
                out.append(Diagnostic("kind-mismatch",
                                      f"region uses {local.kind}, base uses {base_kind}",
                                      cap_name, region.name, "dispersion"))
    return out


def validate_task_spec(task: TaskSpec, system: SystemSpec | None) -> list[Diagnostic]:
    """All invariant violations of ``task`` and of ``system`` against it.

    Returns an empty list when the pair can be assessed.
    """
    out = task_diagnostics(task)
    if system is None:
        out.append(Diagnostic("missing-system", "no system specification to assess"))
        return out
    for cap in task.capabilities:
        perf = system.capabilities.get(cap.name)
        if perf is None:
            out.append(Diagnostic("missing-capability",
                                  f"system {system.name!r} lacks requisite capability", cap.name))
            continue
        for p in perf.dispersion.problems():
            code = "probability-out-of-range" if "probability out" in p else "invalid-dispersion"
            out.append(Diagnostic(code, p, cap.name, "", "measured.dispersion"))
        if not perf.timing.value > 0:
            out.append(Diagnostic("non-positive-timing", f"timing {perf.timing.value}",
                                  cap.name, "", "measured.timing"))
        if cap.kind is not None and perf.dispersion.kind != cap.kind:
            out.append(Diagnostic("kind-mismatch",
                                  f"measured {perf.dispersion.kind}, required {cap.kind}",
                                  cap.name, "", "measured.dispersion"))
    return out
