"""Requirement-based autonomy assessment for fully autonomous robotic systems.

Level of autonomy (LoA) and degree of autonomy (DoA) from reliability and
responsiveness quotients, plus online integrity monitoring of capabilities.
"""

from .assessment import (
    LoA,
    AssessmentReport,
    AssessmentError,
    assess,
    classify_loa,
    degree_of_autonomy,
    weighted_degree_of_autonomy,
    sensitivity_sweep,
    open_loop_displacement,
)
from .documents import SpecDocument, SpecError, parse_spec, loads, dumps
from .integrity import IntegrityMonitor, MonitorConfig, TelemetryEvent, replay
from .metrics import INFINITE, capability_term, reliability, reliability_success, responsiveness
from .model import (
    INTEGRITY_FACTOR,
    CapabilityRequirement,
    Dispersion,
    MeasuredPerformance,
    OperatingRegion,
    SystemSpec,
    TaskSpec,
    Timing,
    ValidationError,
    essential_requirement,
    to_variance,
    validate_task_spec,
)
from .scenarios import load_scenario

__version__ = "0.1.0"
