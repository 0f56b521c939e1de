"""
Assessing two driving automation candidates
===========================================

Both vehicles are checked against the same dynamic driving task, which has
separate requirements for motorways and built-up areas.
"""

from autoquant import assess, load_scenario, open_loop_displacement
from autoquant.report import format_micro

doc = load_scenario("driving-table4").document
task = doc.task

# The level of autonomy is ordinal: which regions can the vehicle serve?
for name in ("A", "B"):
    report = assess(task, doc.system(name))
    print(f"vehicle {name}: LoA {int(report.loa)} ({report.loa.label})")
    for region, doa in report.doa.items():
        print(f"  DoA[{region}] = {doa:.6f}  ({format_micro(doa)})")
    for d in report.diagnostics:
        print(f"  {d}")

# Vehicle A is more precise on motorways but too coarse for built-up areas,
# so it only earns a conditioned level. Vehicle B passes everywhere.

# How far does a car at 130 km/h travel between two control updates?
for rate in (130, 150, 200):
    print(f"{rate:>3} Hz -> {open_loop_displacement(130, rate):.3f} m")
