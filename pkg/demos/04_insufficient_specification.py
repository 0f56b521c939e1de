"""
When the requirements are not there
===================================

The subterranean exploration tasks name their requisite capabilities but
leave most performance requirements open. Every open cell is reported, and
no level of autonomy is assigned.
"""

from collections import Counter

from autoquant import load_scenario
from autoquant.model import validate_task_spec

doc = load_scenario("subt-table5").document
diagnostics = validate_task_spec(doc.task, None)
for d in diagnostics:
    print(d)
print(Counter(d.code for d in diagnostics))

for task, caps in doc.metadata["task_membership"].items():
    print(f"{task}: {', '.join(caps)}")
