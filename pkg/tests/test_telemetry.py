import io
import math

import numpy as np
import pytest

from autoquant.integrity import TelemetryEvent
from autoquant.model import CapabilityRequirement, Dispersion, TaskSpec, Timing, ValidationError
from autoquant.telemetry import (
    Fault,
    Profile,
    TelemetryFormatError,
    generate_telemetry,
    read_telemetry,
    success_probability_for_sigma,
    write_telemetry,
)


def _csv(events):
    buf = io.StringIO()
    write_telemetry(events, buf)
    return buf.getvalue()


def _task():
    return TaskSpec("t", (
        CapabilityRequirement("loc", Dispersion.sigma(0.05, "m"), Timing.hz(100)),
        CapabilityRequirement("det", Dispersion.probability(0.95), Timing.hz(50)),
    ))


def test_same_seed_byte_identical(driving, vehicle_a):
    prof = Profile(duration=5, faults=(Fault.parse("heading_control:step:2@2"),))
    a = _csv(generate_telemetry(driving.task, vehicle_a, prof, seed=3))
    b = _csv(generate_telemetry(driving.task, vehicle_a, prof, seed=3))
    c = _csv(generate_telemetry(driving.task, vehicle_a, prof, seed=4))
    assert a == b
    assert a != c


def test_roundtrip_through_csv(driving, vehicle_b):
    events = generate_telemetry(driving.task, vehicle_b, Profile(duration=2), seed=1)
    assert read_telemetry(io.StringIO(_csv(events))) == events


def test_sorted_and_rates(driving, vehicle_a):
    events = generate_telemetry(driving.task, vehicle_a, Profile(duration=10), seed=0)
    ts = [e.timestamp for e in events]
    assert ts == sorted(ts)
    counts = {}
    for e in events:
        counts[e.capability] = counts.get(e.capability, 0) + 1
    for name, perf in vehicle_a.capabilities.items():
        assert counts[name] == round(10 * perf.timing.frequency)


def test_step_fault_variance():
    events = generate_telemetry(_task(), None, Profile(duration=300, sigma_scale=0.5,
                                                       faults=(Fault.parse("loc:step:2@100"),)), seed=9)
    loc = np.array([(e.timestamp, e.value) for e in events if e.capability == "loc"])
    after = loc[loc[:, 0] >= 100, 1][:10_000]
    before = loc[loc[:, 0] < 100, 1]
    assert len(after) == 10_000
    assert np.std(after, ddof=1) == pytest.approx(0.10, rel=0.15)
    assert np.std(before, ddof=1) == pytest.approx(0.025, rel=0.15)


def test_outcome_rate():
    task = TaskSpec("t", (CapabilityRequirement("det", Dispersion.probability(0.95), Timing.hz(100)),))
    sigma = math.sqrt(0.98 * 0.02)
    scale = sigma / math.sqrt(0.95 * 0.05)
    events = generate_telemetry(task, None, Profile(duration=100, sigma_scale=scale), seed=2)
    assert len(events) == 10_000
    rate = np.mean([e.value for e in events])
    assert rate == pytest.approx(0.98, abs=0.01)


def test_measured_probability_used_directly(driving, vehicle_a):
    events = generate_telemetry(driving.task, vehicle_a,
                                Profile(duration=600, capabilities=("object_detection",)), seed=5)
    rate = np.mean([e.value for e in events])
    assert rate == pytest.approx(vehicle_a.capabilities["object_detection"].dispersion.value, abs=0.02)


def test_fault_isolated_to_its_capability():
    prof = Profile(duration=20, sigma_scale=0.5)
    clean = generate_telemetry(_task(), None, prof, seed=1)
    faulty = generate_telemetry(_task(), None, Profile(duration=20, sigma_scale=0.5,
                                                       faults=(Fault.parse("loc:step:3@5"),)), seed=1)
    assert [e for e in clean if e.capability == "det"] == [e for e in faulty if e.capability == "det"]


def test_ramp_fault():
    f = Fault.parse("loc:ramp:4@10+10")
    assert (f.kind, f.factor, f.start, f.duration) == ("ramp", 4.0, 10.0, 10.0)
    events = generate_telemetry(_task(), None, Profile(duration=40, sigma_scale=0.5, faults=(f,)), seed=0)
    loc = np.array([(e.timestamp, e.value) for e in events if e.capability == "loc"])
    mid = np.std(loc[(loc[:, 0] >= 14) & (loc[:, 0] < 16), 1])
    end = np.std(loc[loc[:, 0] >= 25, 1])
    assert 0.025 < mid < end
    assert end == pytest.approx(0.2, rel=0.15)


@pytest.mark.parametrize("text", ["loc:step:2", "loc:spike:2@1", "loc:ramp:2@1", "loc:ramp:2@1+0"])
def test_fault_parse_errors(text):
    with pytest.raises(ValidationError):
        Fault.parse(text)


def test_fault_unknown_capability():
    with pytest.raises(ValidationError):
        generate_telemetry(_task(), None, Profile(sigma_scale=1, faults=(Fault("nav", 1, 2),)))


def test_profile_validation():
    with pytest.raises(ValidationError):
        Profile(duration=0)
    with pytest.raises(ValidationError):
        Profile(sigma_scale=-1)
    with pytest.raises(ValidationError):
        generate_telemetry(_task(), None, Profile())


def test_success_probability_for_sigma():
    assert success_probability_for_sigma(0.0) == 1.0
    assert success_probability_for_sigma(0.5) == 0.5
    p = success_probability_for_sigma(math.sqrt(0.95 * 0.05))
    assert p == pytest.approx(0.95)
    with pytest.raises(ValidationError):
        success_probability_for_sigma(0.6)


HEADER = "timestamp,capability,kind,value\n"


@pytest.mark.parametrize(
    "body, line, fragment",
    [
        ("0.0,loc,err,0.1\n0.1,loc,err\n", 3, "4 fields"),
        ("0.0,loc,err,abc\n", 2, "non-numeric"),
        ("0.0,loc,bad,1\n", 2, "kind"),
        ("0.0,det,ok,0.5\n", 2, "0 or 1"),
        ("1.0,loc,err,0\n0.5,loc,err,0\n", 3, "earlier"),
        ("0.0,loc,err,inf\n", 2, "non-finite"),
    ],
)
def test_format_errors_have_line_numbers(body, line, fragment):
    with pytest.raises(TelemetryFormatError) as exc:
        read_telemetry(io.StringIO(HEADER + body))
    [(n, msg)] = exc.value.problems
    assert n == line and fragment in msg
    assert f"line {line}" in str(exc.value)


def test_bad_header():
    with pytest.raises(TelemetryFormatError) as exc:
        read_telemetry(io.StringIO("t,c,k,v\n"))
    assert exc.value.problems[0][0] == 1


def test_empty_file_and_header_only():
    assert read_telemetry(io.StringIO("")) == []
    assert read_telemetry(io.StringIO(HEADER)) == []


def test_unsorted_allowed_when_unchecked():
    events = read_telemetry(io.StringIO(HEADER + "1,loc,err,0\n0,loc,err,0\n"), check_sorted=False)
    assert [e.timestamp for e in events] == [1.0, 0.0]


def test_record_format():
    out = _csv([TelemetryEvent(1 / 3, "loc", "err", 0.1), TelemetryEvent(2.0, "det", "ok", 1.0)])
    assert out == HEADER + "0.333333,loc,err,0.1\n2.000000,det,ok,1\n"
