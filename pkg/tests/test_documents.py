import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autoquant.documents import SpecError, dumps, loads, parse_spec, roundtrip, to_dict, write_spec
from autoquant.model import Dispersion, Repr, Timing, TimingRepr, to_variance
from autoquant.scenarios import NAMES, load_scenario, scenario_text


def minimal(**task_extra):
    task = {
        "name": "t",
        "capabilities": [{"name": "loc", "dispersion": "0.29 m", "timing": "150 Hz"}],
    }
    task.update(task_extra)
    return {"schema": 1, "task": task}


@pytest.mark.parametrize("name", NAMES)
def test_bundle_is_canonical(name):
    bundle = load_scenario(name)
    assert dumps(bundle.document) == bundle.text
    assert roundtrip(bundle.document) == bundle.document


def test_shorthand_alert_limit():
    doc = loads(json.dumps(minimal()))
    disp = doc.task.base("loc").dispersion
    assert disp == Dispersion.alert_limit(0.29, "m")
    assert to_variance(disp) == pytest.approx((0.29 / 5.730729) ** 2, rel=1e-12)
    assert doc.task.base("loc").timing == Timing(150.0, TimingRepr.HZ)
    assert doc.task.base("loc").tta == 1.0


def test_shorthand_percent_and_seconds():
    raw = minimal()
    raw["task"]["capabilities"][0].update(dispersion="95%", timing="0.1 s")
    cap = loads(json.dumps(raw)).task.base("loc")
    assert cap.dispersion.repr is Repr.PROBABILITY and cap.dispersion.value == 0.95
    assert cap.timing.period == pytest.approx(0.1)


def test_shorthand_normalised_on_write():
    doc = loads(json.dumps(minimal()))
    d = to_dict(doc)["task"]["capabilities"][0]
    assert d["dispersion"] == {"repr": "alert_limit", "value": 0.29, "unit": "m"}
    assert loads(dumps(doc)) == doc


def test_empty_document():
    with pytest.raises(SpecError) as exc:
        loads("  \n")
    [d] = exc.value.diagnostics
    assert d.code == "syntax" and d.field == "line 1 column 1"


def test_syntax_error_position():
    with pytest.raises(SpecError) as exc:
        loads('{\n  "schema": 1,\n  oops\n}')
    assert exc.value.diagnostics[0].field == "line 3 column 3"


def test_unknown_field_strict_vs_lenient():
    raw = minimal(colour="blue")
    doc = loads(json.dumps(raw))
    assert [w.field for w in doc.warnings] == ["$.task.colour"]
    with pytest.raises(SpecError) as exc:
        loads(json.dumps(raw), strict=True)
    assert exc.value.diagnostics[0].code == "unknown-field"


def test_schema_version():
    raw = minimal()
    raw["schema"] = 2
    with pytest.raises(SpecError, match="schema version"):
        loads(json.dumps(raw))


def test_unknown_override_capability():
    raw = minimal(regions=[{"name": "r", "overrides": {"mapping": {"tta": 2}}}])
    with pytest.raises(SpecError) as exc:
        loads(json.dumps(raw))
    [d] = exc.value.diagnostics
    assert d.code == "unknown-capability"
    assert d.field == "$.task.regions[0].overrides.mapping"


def test_errors_carry_paths():
    raw = minimal()
    raw["task"]["capabilities"][0]["dispersion"] = {"repr": "sigma", "value": "x", "unit": "m"}
    raw["task"]["capabilities"][0]["timing"] = "fast"
    with pytest.raises(SpecError) as exc:
        loads(json.dumps(raw))
    fields = sorted(d.field for d in exc.value.diagnostics)
    assert fields == ["$.task.capabilities[0].dispersion.value", "$.task.capabilities[0].timing"]


def test_missing_required_field():
    raw = minimal()
    del raw["task"]["capabilities"][0]["timing"]
    with pytest.raises(SpecError) as exc:
        loads(json.dumps(raw))
    assert exc.value.diagnostics[0].field == "$.task.capabilities[0].timing"


def test_null_is_unspecified():
    raw = minimal()
    raw["task"]["capabilities"][0]["timing"] = None
    doc = loads(json.dumps(raw))
    assert doc.task.base("loc").timing is None
    assert to_dict(doc)["task"]["capabilities"][0]["timing"] is None


def test_parse_spec_sources(tmp_path):
    doc = load_scenario("driving-table4").document
    path = tmp_path / "d.json"
    write_spec(doc, path)
    assert path.read_text() == scenario_text("driving-table4")
    assert parse_spec(path) == doc
    assert parse_spec(str(path)) == doc
    assert parse_spec(io.StringIO(path.read_text())) == doc


def test_unknown_system(driving):
    with pytest.raises(KeyError, match="available"):
        driving.system("C")


def test_unknown_scenario():
    with pytest.raises(KeyError):
        scenario_text("mars")


def test_subt_bundle_has_no_systems(subt):
    assert subt.systems == []
    assert subt.task.region_names == ["virtual", "systems"]


finite = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False)


@settings(max_examples=50)
@given(finite, finite, st.sampled_from(["sigma", "variance", "alert_limit"]), st.sampled_from(["hz", "seconds"]),
       st.one_of(st.none(), st.floats(1e-12, 1e-3)), st.floats(0.1, 10))
def test_roundtrip_property(value, rate, rep, trep, ir, tta):
    raw = {
        "schema": 1,
        "task": {
            "name": "t",
            "capabilities": [{
                "name": "c", "dispersion": {"repr": rep, "value": value, "unit": "m"},
                "timing": {"repr": trep, "value": rate}, "integrity_risk": ir, "tta": tta,
            }],
            "regions": [{"name": "r", "overrides": {"c": {"dispersion": None}}}],
        },
        "systems": [{"name": "s", "capabilities": {"c": {"dispersion": {"repr": "sigma", "value": value,
                                                                        "unit": "m"},
                                                         "timing": {"repr": "hz", "value": rate}}}}],
    }
    doc = loads(json.dumps(raw))
    again = loads(dumps(doc))
    assert again == doc
    assert dumps(again) == dumps(doc)
