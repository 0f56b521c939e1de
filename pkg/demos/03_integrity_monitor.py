"""
Watching capability integrity online
====================================

A seeded log is generated with every capability at half its required
dispersion. Heading control then doubles past its requirement at t = 100 s.
The monitor opens a fault within a few samples and raises an integrity
event once the fault has outlasted the one-second time-to-alert.
"""

from autoquant import load_scenario
from autoquant.integrity import replay
from autoquant.report import render_event, render_risk
from autoquant.telemetry import Fault, Profile, generate_telemetry

doc = load_scenario("driving-table4").document
profile = Profile(duration=120, sigma_scale=0.5, faults=(Fault.parse("heading_control:step:2@100"),))
log = generate_telemetry(doc.task, doc.system("A"), profile, seed=42)
print(f"{len(log)} samples")

result = replay(doc.task, log)
for event in result.events:
    print(render_event(event))
print(render_risk(result.summary), end="")
