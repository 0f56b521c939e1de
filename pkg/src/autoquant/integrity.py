"""Online capability integrity monitoring from telemetry.

Each requisite capability gets a sliding-window estimate of its actual
dispersion. The protection level ``PL = 5.730729 * sigma_hat`` is compared
with the alert limit derived from the requirement; a fault opens when the
actual variance exceeds the required one and becomes an *integrity event*
once it has persisted for longer than the capability's time-to-alert.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Literal

from .metrics import passes, reliability, reliability_success
from .model import (
    INTEGRITY_FACTOR,
    CapabilityRequirement,
    Diagnostic,
    Repr,
    TaskSpec,
    ValidationError,
    essential_requirement,
    to_variance,
)

EventKind = Literal["fault-onset", "integrity-event", "fault-cleared"]


class TelemetryError(ValueError):
    """A telemetry record cannot be ingested."""


class ZeroOperatingTimeError(ValueError):
    pass


@dataclass(frozen=True)
class TelemetryEvent:
    timestamp: float
    capability: str
    kind: Literal["err", "ok"]
    value: float


@dataclass(frozen=True)
class IntegrityEvent:
    capability: str
    kind: EventKind
    timestamp: float
    protection_level: float
    alert_limit: float


class SlidingWindow:
    """Mean and variance over the last ``size`` samples.

    Uses Welford updates for insertion and removal. The accumulators are
    rebuilt from the buffer every ``size`` insertions so rounding error
    cannot build up over long streams.
    """

    def __init__(self, size: int):
        if size < 2:
            raise ValidationError(f"window size must be >= 2, got {size}")
        self.size = size
        self.buffer: deque[float] = deque()
        self.mean = 0.0
        self.m2 = 0.0
        self._since_resync = 0

    @property
    def count(self) -> int:
        return len(self.buffer)

    @property
    def full(self) -> bool:
        return len(self.buffer) == self.size

    def push(self, x: float) -> None:
        if len(self.buffer) == self.size:
            self._remove(self.buffer.popleft())
        self.buffer.append(x)
        n = len(self.buffer)
        delta = x - self.mean
        self.mean += delta / n
        self.m2 += delta * (x - self.mean)
        self._since_resync += 1
        if self._since_resync >= self.size:
            self._resync()

    def _remove(self, x: float) -> None:
        # called after popleft, so the buffer already holds the reduced count
        n = len(self.buffer)
        if n == 0:
            self.mean = self.m2 = 0.0
            return
        delta = x - self.mean
        self.mean -= delta / n
        self.m2 -= delta * (x - self.mean)
        if self.m2 < 0:
            self.m2 = 0.0

    def _resync(self) -> None:
        n = len(self.buffer)
        self.mean = math.fsum(self.buffer) / n
        self.m2 = math.fsum((v - self.mean) ** 2 for v in self.buffer)
        self._since_resync = 0

    def variance(self) -> float:
        """Sample variance (``ddof=1``); 0 with fewer than two samples."""
        n = len(self.buffer)
        return self.m2 / (n - 1) if n > 1 else 0.0

    def std(self) -> float:
        return math.sqrt(self.variance())


@dataclass
class MonitorConfig:
    error_window: int = 100
    outcome_window: int = 200
    region: str | None = None


@dataclass
class CapabilityMonitor:
    """Integrity bookkeeping for one capability."""

    requirement: CapabilityRequirement
    window: SlidingWindow
    fault_since: float | None = None
    integrity_reported: bool = False
    protection_level: float = 0.0
    first_timestamp: float | None = None
    last_timestamp: float | None = None
    biased: bool = False
    integrity_events: int = 0
    samples: int = 0

    @property
    def name(self) -> str:
        return self.requirement.name

    @property
    def outcome(self) -> bool:
        return self.requirement.dispersion.kind.is_success

    @property
    def variance_ref(self) -> float:
        return to_variance(self.requirement.dispersion)

    @property
    def alert_limit(self) -> float:
        return INTEGRITY_FACTOR * math.sqrt(self.variance_ref)

    @property
    def operating_hours(self) -> float:
        if self.first_timestamp is None:
            return 0.0
        return (self.last_timestamp - self.first_timestamp) / 3600.0

    def sigma_hat(self) -> float:
        if self.outcome:
            p = self.window.mean
            return math.sqrt(max(p * (1.0 - p), 0.0))
        return self.window.std()

    def faulted(self) -> bool:
        disp = self.requirement.dispersion
        if self.outcome and disp.repr is Repr.PROBABILITY:
            c_rel = reliability_success(disp.value, min(max(self.window.mean, 0.0), 1.0))
        else:
            c_rel = reliability(self.variance_ref, self.sigma_hat() ** 2)
        return not passes(c_rel)


class IntegrityMonitor:
    """Streams telemetry for every requisite capability of a task.

    Requirements come from ``config.region`` when given, otherwise from the
    essential (tightest) requirement of each capability.
    """

    def __init__(self, task: TaskSpec, config: MonitorConfig | None = None):
        self.config = config or MonitorConfig()
        self.task_name = task.name
        self.events: list[IntegrityEvent] = []
        self.diagnostics: list[Diagnostic] = []
        self.capabilities: dict[str, CapabilityMonitor] = {}
        for cap in task.capabilities:
            if self.config.region is None:
                req = essential_requirement(cap.name, task)
            else:
                req = task.local_requirement(cap.name, self.config.region)
            if req.dispersion is None:
                raise ValidationError(f"capability {cap.name!r} has no dispersion requirement")
            size = self.config.outcome_window if req.dispersion.kind.is_success else self.config.error_window
            self.capabilities[cap.name] = CapabilityMonitor(req, SlidingWindow(size))

    def ingest(self, event: TelemetryEvent) -> list[IntegrityEvent]:
        """Update the capability's window and return any events emitted."""
        mon = self.capabilities.get(event.capability)
        if mon is None:
            raise TelemetryError(f"unknown capability {event.capability!r}")
        expected = "ok" if mon.outcome else "err"
        if event.kind != expected:
            raise TelemetryError(f"{event.capability}: expected {expected!r} samples, got {event.kind!r}")
        if event.kind == "ok" and event.value not in (0, 1):
            raise TelemetryError(f"{event.capability}: outcome must be 0 or 1, got {event.value!r}")
        if not math.isfinite(event.timestamp) or not math.isfinite(event.value):
            raise TelemetryError(f"{event.capability}: non-finite record {event!r}")
        t = event.timestamp
        if mon.last_timestamp is not None and t < mon.last_timestamp:
            raise TelemetryError(
                f"{event.capability}: timestamp {t} precedes {mon.last_timestamp}")
        if mon.first_timestamp is None:
            mon.first_timestamp = t
        mon.last_timestamp = t
        mon.samples += 1
        mon.window.push(float(event.value))
        if not mon.window.full:
            return []

        mon.protection_level = INTEGRITY_FACTOR * mon.sigma_hat()
        self._check_bias(mon, t)
        emitted = []

        def emit(kind):
            ev = IntegrityEvent(mon.name, kind, t, mon.protection_level, mon.alert_limit)
            emitted.append(ev)

        if mon.faulted():
            if mon.fault_since is None:
                mon.fault_since = t
                mon.integrity_reported = False
                emit("fault-onset")
            elif not mon.integrity_reported and t - mon.fault_since > mon.requirement.tta:
                mon.integrity_reported = True
                mon.integrity_events += 1
                emit("integrity-event")
        elif mon.fault_since is not None:
            mon.fault_since = None
            mon.integrity_reported = False
            emit("fault-cleared")
        self.events.extend(emitted)
        return emitted

    def _check_bias(self, mon: CapabilityMonitor, t: float) -> None:
        if mon.outcome:
            return
        biased = abs(mon.window.mean) > math.sqrt(mon.variance_ref)
        if biased and not mon.biased:
            self.diagnostics.append(Diagnostic(
                "bias", f"window mean {mon.window.mean:.6g} exceeds sigma_ref at t={t}",
                mon.name))
        mon.biased = biased

    @property
    def operating_hours(self) -> float:
        return sum(m.operating_hours for m in self.capabilities.values())

    def risk_summary(self) -> list["RiskEntry"]:
        """Observed integrity-event rate per capability against its IR budget."""
        if self.operating_hours <= 0:
            raise ZeroOperatingTimeError("no operating time recorded")
        out = []
        for mon in self.capabilities.values():
            hours = mon.operating_hours
            rate = mon.integrity_events / hours if hours > 0 else None
            budget = mon.requirement.integrity_risk
            within = None if rate is None or budget is None else rate <= budget
            out.append(RiskEntry(mon.name, mon.integrity_events, hours, rate, budget, within))
        return out


@dataclass(frozen=True)
class RiskEntry:
    capability: str
    integrity_events: int
    operating_hours: float
    observed_rate: float | None
    budget: float | None
    within_budget: bool | None


def risk_summary(monitor: IntegrityMonitor) -> list[RiskEntry]:
    return monitor.risk_summary()


@dataclass
class ReplayResult:
    events: list[IntegrityEvent]
    monitor: IntegrityMonitor
    summary: list[RiskEntry] | None = field(default=None)

    @property
    def operating_hours(self) -> float:
        return self.monitor.operating_hours


def replay(
    task: TaskSpec,
    log: Iterable[TelemetryEvent],
    monitor: IntegrityMonitor | None = None,
    config: MonitorConfig | None = None,
) -> ReplayResult:
    """Feed a timestamp-sorted log through a monitor.

    Pass the ``monitor`` of an earlier result to resume where it stopped.
    ``summary`` is ``None`` when no operating time has accumulated.
    """
    mon = monitor if monitor is not None else IntegrityMonitor(task, config)
    start = len(mon.events)
    last = -math.inf
    for ev in log:
        if ev.timestamp < last:
            raise TelemetryError(f"log not sorted: {ev.timestamp} after {last}")
        last = ev.timestamp
        mon.ingest(ev)
    summary = mon.risk_summary() if mon.operating_hours > 0 else None
    return ReplayResult(mon.events[start:], mon, summary)
