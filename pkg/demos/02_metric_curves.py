"""
Reliability, responsiveness and the DoA sweep
=============================================

The quotients are 1 exactly at the requirement, grow above it and drop to
0 once the requirement is missed. DoA reacts more steeply around a tight
requirement than around a loose one.
"""

import numpy as np

from autoquant import load_scenario, reliability, responsiveness
from autoquant.assessment import sensitivity_sweep, slope_at_reference

sigma_act = np.linspace(0.25, 2.5, 10)
for sigma_ref in (0.5, 1.0, 2.0):
    row = [reliability(sigma_ref**2, s**2) for s in sigma_act]
    print(f"C_rel, sigma_ref={sigma_ref}:", " ".join(f"{float(v):6.2f}" for v in row))

t_act = np.array([0.025, 0.05, 0.1, 0.2])
print("C_res, t_ref=0.1:", [responsiveness(0.1, t) for t in t_act])

doc = load_scenario("driving-table4").document
system = doc.system("A")
curve = sensitivity_sweep(doc.task, system, "heading_control", start=0.02, stop=0.3, step=0.04,
                          region="motorways")
for s, doa in curve:
    print(f"heading sigma {s:.2f} deg -> DoA {doa:.3f}")

# the gradient at the requirement scales with 1/sigma_ref
for ref in (0.1, 0.2, 0.4):
    slope = slope_at_reference(doc.task, system, "heading_control", ref, "motorways")
    print(f"sigma_ref {ref}: dDoA/dsigma = {slope:.1f}")
