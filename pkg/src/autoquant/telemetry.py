"""Telemetry CSV format and a seeded synthetic telemetry generator.

Records are ``timestamp,capability,kind,value`` with a mandatory header.
``kind`` is ``err`` (signed error sample in the capability's unit) or
``ok`` (``1`` success, ``0`` failure).
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

import numpy as np

from .integrity import TelemetryEvent
from .model import (
    Repr,
    SystemSpec,
    TaskSpec,
    ValidationError,
    essential_requirement,
    to_variance,
)

HEADER = ["timestamp", "capability", "kind", "value"]


class TelemetryFormatError(ValueError):
    """Malformed telemetry; ``problems`` holds ``(line, message)`` pairs."""

    def __init__(self, problems: list[tuple[int, str]]):
        self.problems = problems
        super().__init__("\n".join(f"line {n}: {msg}" for n, msg in problems))


def iter_telemetry(stream: TextIO, check_sorted: bool = True) -> Iterator[TelemetryEvent]:
    """Yield events from a CSV stream, raising on the first bad line."""
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        return
    if [h.strip() for h in header] != HEADER:
        raise TelemetryFormatError([(1, f"expected header {','.join(HEADER)!r}, got {','.join(header)!r}")])
    last = -math.inf
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != 4:
            raise TelemetryFormatError([(line, f"expected 4 fields, got {len(row)}")])
        ts, cap, kind, value = (x.strip() for x in row)
        try:
            t = float(ts)
            v = float(value)
        except ValueError:
            raise TelemetryFormatError([(line, f"non-numeric timestamp or value in {row!r}")]) from None
        if not (math.isfinite(t) and math.isfinite(v)):
            raise TelemetryFormatError([(line, "non-finite timestamp or value")])
        if kind not in ("err", "ok"):
            raise TelemetryFormatError([(line, f"kind must be 'err' or 'ok', got {kind!r}")])
        if kind == "ok" and v not in (0.0, 1.0):
            raise TelemetryFormatError([(line, f"outcome value must be 0 or 1, got {value!r}")])
        if check_sorted and t < last:
            raise TelemetryFormatError([(line, f"timestamp {ts} is earlier than the previous record")])
        last = t
        yield TelemetryEvent(t, cap, kind, v)


def read_telemetry(source, check_sorted: bool = True) -> list[TelemetryEvent]:
    if hasattr(source, "read"):
        return list(iter_telemetry(source, check_sorted))
    with open(source, newline="", encoding="utf-8") as fh:
        return list(iter_telemetry(fh, check_sorted))


def format_record(ev: TelemetryEvent) -> str:
    value = str(int(ev.value)) if ev.kind == "ok" else repr(float(ev.value))
    return f"{ev.timestamp:.6f},{ev.capability},{ev.kind},{value}"


def write_telemetry(events: Iterable[TelemetryEvent], stream: TextIO) -> None:
    stream.write(",".join(HEADER) + "\n")
    for ev in events:
        stream.write(format_record(ev) + "\n")


@dataclass(frozen=True)
class Fault:
    """Raise one capability's dispersion to ``factor * sigma_ref``.

    ``step`` switches at ``start``; ``ramp`` interpolates linearly from the
    nominal dispersion over ``duration`` seconds and then holds.
    """

    capability: str
    start: float
    factor: float
    kind: str = "step"
    duration: float = 0.0

    _NUM = r"[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?"
    _SYNTAX = re.compile(rf"^(?P<cap>[^:]+):(?P<kind>step|ramp):x?(?P<factor>{_NUM})"
                         rf"@(?P<start>{_NUM})(?:\+(?P<dur>{_NUM}))?$")

    @classmethod
    def parse(cls, text: str) -> "Fault":
        """Read ``CAP:step:FACTOR@START`` or ``CAP:ramp:FACTOR@START+DURATION``."""
        m = cls._SYNTAX.match(text.strip())
        if not m:
            raise ValidationError(
                f"bad fault {text!r}; expected CAP:step:FACTOR@START or CAP:ramp:FACTOR@START+DURATION")
        kind = m["kind"]
        dur = float(m["dur"]) if m["dur"] else 0.0
        if kind == "ramp" and not dur > 0:
            raise ValidationError("a ramp fault needs a positive duration (CAP:ramp:F@T+D)")
        return cls(m["cap"], float(m["start"]), float(m["factor"]), kind, dur)


@dataclass(frozen=True)
class Profile:
    """What to generate.

    ``sigma_scale`` sets every capability's nominal dispersion to
    ``sigma_scale * sigma_ref``; when ``None`` the system's measured
    dispersion is used instead.
    """

    duration: float = 200.0
    sigma_scale: float | None = None
    faults: tuple[Fault, ...] = field(default_factory=tuple)
    capabilities: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.duration > 0:
            raise ValidationError(f"duration must be positive, got {self.duration}")
        if self.sigma_scale is not None and not self.sigma_scale >= 0:
            raise ValidationError(f"sigma scale must be non-negative, got {self.sigma_scale}")


def success_probability_for_sigma(sigma: float) -> float:
    """The success rate ``p >= 0.5`` whose Bernoulli deviation is ``sigma``."""
    if not 0 <= sigma <= 0.5:
        raise ValidationError(f"a Bernoulli standard deviation lies in [0, 0.5], got {sigma}")
    return 0.5 * (1.0 + math.sqrt(1.0 - 4.0 * sigma * sigma))


def _sigma_schedule(t: np.ndarray, nominal: float, sigma_ref: float, faults: list[Fault]) -> np.ndarray:
    sigma = np.full(t.shape, nominal)
    for f in faults:
        target = f.factor * sigma_ref
        if f.kind == "step":
            sigma = np.where(t >= f.start, target, sigma)
        else:
            frac = np.clip((t - f.start) / f.duration, 0.0, 1.0)
            sigma = np.where(t >= f.start, sigma + frac * (target - sigma), sigma)
    return sigma


def generate_telemetry(
    task: TaskSpec,
    system: SystemSpec | None,
    profile: Profile,
    seed: int = 0,
) -> list[TelemetryEvent]:
    """Seed-reproducible telemetry for the task's requisite capabilities.

    Each capability is sampled at its measured rate (the required rate when
    no system is given) from its own random stream, so adding a fault to one
    capability leaves the others' samples unchanged.
    """
    names = list(profile.capabilities or task.capability_names)
    for f in profile.faults:
        if f.capability not in names:
            raise ValidationError(f"fault targets unknown capability {f.capability!r}")
    streams = np.random.SeedSequence(seed).spawn(len(task.capabilities))
    index = {c: i for i, c in enumerate(task.capability_names)}
    times, caps, values, kinds = [], [], [], []
    for name in names:
        if name not in index:
            raise ValidationError(f"unknown capability {name!r}")
        req = essential_requirement(name, task)
        if req.dispersion is None:
            raise ValidationError(f"{name}: no dispersion requirement to generate against")
        perf = system.capabilities.get(name) if system is not None else None
        timing = perf.timing if perf is not None else req.timing
        if timing is None:
            raise ValidationError(f"{name}: no rate to sample at")
        rate = timing.frequency
        sigma_ref = math.sqrt(to_variance(req.dispersion))
        if profile.sigma_scale is not None:
            nominal = profile.sigma_scale * sigma_ref
        elif perf is not None:
            nominal = math.sqrt(to_variance(perf.dispersion))
        else:
            raise ValidationError("either a system or a sigma scale is required")
        count = int(math.floor(profile.duration * rate + 1e-9))
        t = np.arange(count) / rate
        sigma = _sigma_schedule(t, nominal, sigma_ref,
                                [f for f in profile.faults if f.capability == name])
        rng = np.random.default_rng(streams[index[name]])
        outcome = req.dispersion.kind.is_success
        if outcome:
            if profile.sigma_scale is None and perf is not None and perf.dispersion.repr is Repr.PROBABILITY:
                p_nominal = perf.dispersion.value
            else:
                p_nominal = success_probability_for_sigma(min(nominal, 0.5))
            clipped = np.minimum(sigma, 0.5)
            p = np.where(sigma == nominal, p_nominal, 0.5 * (1.0 + np.sqrt(1.0 - 4.0 * clipped**2)))
            v = (rng.random(count) < p).astype(float)
        else:
            v = rng.standard_normal(count) * sigma
        times.append(t)
        caps.append(np.full(count, index[name]))
        values.append(v)
        kinds.append("ok" if outcome else "err")
    if not times:
        return []
    t_all = np.concatenate(times)
    c_all = np.concatenate(caps)
    v_all = np.concatenate(values)
    order = np.lexsort((c_all, t_all))
    cap_names = task.capability_names
    kind_of = {index[n]: k for n, k in zip(names, kinds)}
    # round timestamps to the on-disk precision so in-memory and file logs agree
    return [
        TelemetryEvent(round(float(t_all[i]), 6), cap_names[c_all[i]], kind_of[c_all[i]], float(v_all[i]))
        for i in order
    ]
