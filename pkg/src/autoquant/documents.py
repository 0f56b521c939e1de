"""Versioned JSON spec documents holding a task and the systems to assess.

Layout (``schema: 1``)::

    {
      "schema": 1,
      "metadata": {...},
      "task": {
        "name": "...",
        "capabilities": [
          {"name": "heading_control",
           "dispersion": {"repr": "alert_limit", "value": 1.5, "unit": "deg"},
           "timing": {"repr": "hz", "value": 150},
           "integrity_risk": 1e-08, "tta": 1.0, "weight": 1.0}
        ],
        "regions": [{"name": "built_up", "overrides": {"heading_control": {"dispersion": ...}}}]
      },
      "systems": [
        {"name": "A", "capabilities": {"heading_control": {"dispersion": ..., "timing": ...}}}
      ]
    }

Dispersions and timings also accept string shorthands on input:
``"0.29 m"`` is an alert limit (or protection level) in metres, ``"95%"`` a
success probability, ``"150 Hz"`` a rate and ``"10 s"`` a period.
Serialization always writes the canonical object form.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Any, TextIO

from .model import (
    OVERRIDABLE,
    CapabilityRequirement,
    Diagnostic,
    Dispersion,
    MeasuredPerformance,
    OperatingRegion,
    Repr,
    SystemSpec,
    TaskSpec,
    Timing,
    TimingRepr,
)

SCHEMA_VERSION = 1


class SpecError(ValueError):
    """The document could not be parsed; ``diagnostics`` locate each problem."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


@dataclass
class SpecDocument:
    task: TaskSpec
    systems: list[SystemSpec] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)
    schema: int = SCHEMA_VERSION
    warnings: list[Diagnostic] = field(default_factory=list, compare=False)

    def system(self, name: str) -> SystemSpec:
        for s in self.systems:
            if s.name == name:
                return s
        known = ", ".join(s.name for s in self.systems) or "none"
        raise KeyError(f"no system {name!r} in document (available: {known})")


_UNSET = object()


class _Parser:
    def __init__(self, strict: bool):
        self.strict = strict
        self.errors: list[Diagnostic] = []
        self.warnings: list[Diagnostic] = []

    def error(self, path: str, msg: str, code: str = "schema"):
        self.errors.append(Diagnostic(code, msg, field=path))

    def obj(self, value, path: str, required=(), optional=()) -> dict | None:
        if not isinstance(value, dict):
            self.error(path, f"expected an object, got {type(value).__name__}")
            return None
        for key in required:
            if key not in value:
                self.error(f"{path}.{key}", "missing required field")
        extra = set(value) - set(required) - set(optional)
        for key in sorted(extra):
            d = Diagnostic("unknown-field", f"unknown field {key!r}", field=f"{path}.{key}")
            (self.errors if self.strict else self.warnings).append(d)
        return value

    def number(self, value, path: str, default=_UNSET, nullable=False):
        if value is None and nullable:
            return None
        if value is _UNSET:
            return default
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.error(path, f"expected a number, got {value!r}")
            return None
        return value

    def string(self, value, path: str) -> str:
        if not isinstance(value, str) or not value:
            self.error(path, f"expected a non-empty string, got {value!r}")
            return "?"
        return value

    def dispersion(self, value, path: str) -> Dispersion | None:
        if value is None:
            return None
        if isinstance(value, str):
            return self._dispersion_shorthand(value, path)
        d = self.obj(value, path, required=("repr", "value"), optional=("unit",))
        if d is None:
            return None
        try:
            rep = Repr(d.get("repr"))
        except ValueError:
            self.error(f"{path}.repr", f"unknown dispersion representation {d.get('repr')!r}")
            return None
        num = self.number(d.get("value", _UNSET), f"{path}.value")
        unit = d.get("unit", "")
        if not isinstance(unit, str):
            self.error(f"{path}.unit", "unit must be a string")
            unit = ""
        if rep is not Repr.PROBABILITY and not unit:
            self.error(f"{path}.unit", "unit is required for this representation")
        return None if num is None else Dispersion(num, rep, unit)

    _QUANTITY = re.compile(r"^\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*(\S.*?)?\s*$")

    def _dispersion_shorthand(self, text: str, path: str) -> Dispersion | None:
        m = self._QUANTITY.match(text)
        if not m or not m.group(2):
            self.error(path, f"cannot read dispersion {text!r}; expected e.g. '0.29 m' or '95%'")
            return None
        number, unit = m.group(1), m.group(2)
        if unit == "%":
            return Dispersion.probability(float(Decimal(number) / 100))
        return Dispersion.alert_limit(float(number), unit)

    def timing(self, value, path: str) -> Timing | None:
        if value is None:
            return None
        if isinstance(value, str):
            m = self._QUANTITY.match(value)
            unit = (m.group(2) or "").lower() if m else ""
            if unit in ("hz", "s"):
                try:
                    num = float(Decimal(m.group(1)))
                except InvalidOperation:  # pragma: no cover - regex guarantees a number
                    num = float("nan")
                return Timing(num, TimingRepr.HZ if unit == "hz" else TimingRepr.SECONDS)
            self.error(path, f"cannot read timing {value!r}; expected e.g. '150 Hz' or '0.1 s'")
            return None
        d = self.obj(value, path, required=("repr", "value"))
        if d is None:
            return None
        try:
            rep = TimingRepr(d.get("repr"))
        except ValueError:
            self.error(f"{path}.repr", f"timing repr must be 'hz' or 'seconds', got {d.get('repr')!r}")
            return None
        num = self.number(d.get("value", _UNSET), f"{path}.value")
        return None if num is None else Timing(num, rep)

    def capability(self, value, path: str) -> CapabilityRequirement | None:
        d = self.obj(value, path, required=("name", "dispersion", "timing"),
                     optional=("integrity_risk", "tta", "weight"))
        if d is None:
            return None
        return CapabilityRequirement(
            name=self.string(d.get("name"), f"{path}.name"),
            dispersion=self.dispersion(d.get("dispersion"), f"{path}.dispersion"),
            timing=self.timing(d.get("timing"), f"{path}.timing"),
            integrity_risk=self.number(d.get("integrity_risk", _UNSET), f"{path}.integrity_risk",
                                       default=None, nullable=True),
            tta=self.number(d.get("tta", _UNSET), f"{path}.tta", default=1.0),
            weight=self.number(d.get("weight", _UNSET), f"{path}.weight", default=1.0),
        )

    def region(self, value, path: str, names: set[str]) -> OperatingRegion | None:
        d = self.obj(value, path, required=("name",), optional=("overrides",))
        if d is None:
            return None
        name = self.string(d.get("name"), f"{path}.name")
        raw = d.get("overrides", {})
        if not isinstance(raw, dict):
            self.error(f"{path}.overrides", "expected an object")
            return None
        overrides = {}
        for cap, fields in raw.items():
            p = f"{path}.overrides.{cap}"
            if cap not in names:
                self.error(p, f"override references unknown capability {cap!r}", "unknown-capability")
                continue
            f = self.obj(fields, p, optional=OVERRIDABLE)
            if f is None:
                continue
            ov = {}
            for key in OVERRIDABLE:
                if key not in f:
                    continue
                if key == "dispersion":
                    ov[key] = self.dispersion(f[key], f"{p}.{key}")
                elif key == "timing":
                    ov[key] = self.timing(f[key], f"{p}.{key}")
                else:
                    ov[key] = self.number(f[key], f"{p}.{key}", nullable=key == "integrity_risk")
            overrides[cap] = ov
        return OperatingRegion(name, overrides)

    def system(self, value, path: str) -> SystemSpec | None:
        d = self.obj(value, path, required=("name", "capabilities"))
        if d is None:
            return None
        name = self.string(d.get("name"), f"{path}.name")
        caps = d.get("capabilities", {})
        if not isinstance(caps, dict):
            self.error(f"{path}.capabilities", "expected an object")
            return None
        perf = {}
        for cap, v in caps.items():
            p = f"{path}.capabilities.{cap}"
            m = self.obj(v, p, required=("dispersion", "timing"))
            if m is None:
                continue
            disp = self.dispersion(m.get("dispersion"), f"{p}.dispersion")
            tim = self.timing(m.get("timing"), f"{p}.timing")
            if disp is None or tim is None:
                self.error(p, "measured dispersion and timing are required")
                continue
            perf[cap] = MeasuredPerformance(disp, tim)
        return SystemSpec(name, perf)

    def document(self, raw) -> SpecDocument | None:
        d = self.obj(raw, "$", required=("schema", "task"), optional=("metadata", "systems"))
        if d is None:
            return None
        if "schema" in d and d["schema"] != SCHEMA_VERSION:
            self.error("$.schema", f"unsupported schema version {d['schema']!r}; expected {SCHEMA_VERSION}")
            return None
        metadata = d.get("metadata", {})
        if not isinstance(metadata, dict):
            self.error("$.metadata", "expected an object")
            metadata = {}
        t = self.obj(d.get("task"), "$.task", required=("name", "capabilities"), optional=("regions",))
        if t is None:
            return None
        raw_caps = t.get("capabilities", [])
        if not isinstance(raw_caps, list) or not raw_caps:
            self.error("$.task.capabilities", "expected a non-empty list")
            raw_caps = []
        caps = [self.capability(c, f"$.task.capabilities[{i}]") for i, c in enumerate(raw_caps)]
        caps = [c for c in caps if c is not None]
        names = {c.name for c in caps}
        raw_regions = t.get("regions", [])
        if not isinstance(raw_regions, list):
            self.error("$.task.regions", "expected a list")
            raw_regions = []
        regions = [self.region(r, f"$.task.regions[{i}]", names) for i, r in enumerate(raw_regions)]
        task = TaskSpec(self.string(t.get("name"), "$.task.name"), tuple(caps),
                        tuple(r for r in regions if r is not None))
        raw_systems = d.get("systems", [])
        if not isinstance(raw_systems, list):
            self.error("$.systems", "expected a list")
            raw_systems = []
        systems = [self.system(s, f"$.systems[{i}]") for i, s in enumerate(raw_systems)]
        return SpecDocument(task, [s for s in systems if s is not None], metadata)


def loads(text: str, strict: bool = False) -> SpecDocument:
    """Parse a spec document from a string."""
    if not text.strip():
        raise SpecError([Diagnostic("syntax", "empty document", field="line 1 column 1")])
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError([Diagnostic("syntax", exc.msg, field=f"line {exc.lineno} column {exc.colno}")])
    parser = _Parser(strict)
    doc = parser.document(raw)
    if parser.errors or doc is None:
        raise SpecError(parser.errors)
    doc.warnings = parser.warnings
    return doc


def parse_spec(source: str | os.PathLike | TextIO, strict: bool = False) -> SpecDocument:
    """Parse a spec document from a path or an open text stream."""
    if hasattr(source, "read"):
        return loads(source.read(), strict)
    with open(source, encoding="utf-8") as fh:
        return loads(fh.read(), strict)


def _dispersion_dict(d: Dispersion | None):
    if d is None:
        return None
    return {"repr": d.repr.value, "value": d.value, "unit": d.unit}


def _timing_dict(t: Timing | None):
    if t is None:
        return None
    return {"repr": t.repr.value, "value": t.value}


def _override_dict(ov) -> dict:
    out = {}
    for key in OVERRIDABLE:
        if key not in ov:
            continue
        if key == "dispersion":
            out[key] = _dispersion_dict(ov[key])
        elif key == "timing":
            out[key] = _timing_dict(ov[key])
        else:
            out[key] = ov[key]
    return out


def to_dict(doc: SpecDocument) -> dict:
    task = doc.task
    return {
        "schema": doc.schema,
        "metadata": doc.metadata,
        "task": {
            "name": task.name,
            "capabilities": [
                {
                    "name": c.name,
                    "dispersion": _dispersion_dict(c.dispersion),
                    "timing": _timing_dict(c.timing),
                    "integrity_risk": c.integrity_risk,
                    "tta": c.tta,
                    "weight": c.weight,
                }
                for c in task.capabilities
            ],
            "regions": [
                {"name": r.name,
                 "overrides": {cap: _override_dict(ov) for cap, ov in r.overrides.items()}}
                for r in task.regions
            ],
        },
        "systems": [
            {"name": s.name,
             "capabilities": {
                 cap: {"dispersion": _dispersion_dict(p.dispersion), "timing": _timing_dict(p.timing)}
                 for cap, p in s.capabilities.items()
             }}
            for s in doc.systems
        ],
    }


def dumps(doc: SpecDocument) -> str:
    """Canonical serialization: stable key order, two-space indent, trailing newline."""
    return json.dumps(to_dict(doc), indent=2, ensure_ascii=False) + "\n"


def write_spec(doc: SpecDocument, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(doc))


def roundtrip(doc: SpecDocument) -> SpecDocument:
    return loads(dumps(doc))
