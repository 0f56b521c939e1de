"""Reliability and responsiveness quotients and the per-capability DoA term.

Unbounded values are represented by the :data:`INFINITE` singleton rather
than ``float('inf')`` so that sums over terms stay exact and an
indeterminate ``0 * inf`` pairing can be detected instead of producing NaN.
"""

from __future__ import annotations

import functools
import math
from typing import Union

from .model import ValidationError


@functools.total_ordering
class Infinite:
    """Symbolic +infinity. Compares greater than every real number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        if other is self:
            return False
        if isinstance(other, (int, float)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash("autoquant.Infinite")

    def __repr__(self):
        return "INFINITE"

    def __str__(self):
        return "inf"

    def __float__(self):
        return math.inf

    def __reduce__(self):
        return (Infinite, ())


INFINITE = Infinite()

MetricValue = Union[float, Infinite]


class IndeterminateFormError(ValueError):
    """A capability term would require evaluating ``0 * inf``."""


def is_infinite(x) -> bool:
    return x is INFINITE


def _check_non_negative(**values):
    for name, v in values.items():
        if not (isinstance(v, (int, float)) and v >= 0) or math.isnan(v) or math.isinf(v):
            raise ValidationError(f"{name} must be a finite non-negative number, got {v!r}")


def reliability(var_ref: float, var_act: float) -> MetricValue:
    """Quotient of required to actual error variance.

    ``var_ref/var_act`` when ``var_ref >= var_act > 0``, ``0`` when the actual
    variance exceeds the requirement, :data:`INFINITE` when ``var_act == 0``
    (this includes ``var_ref == 0``).
    """
    _check_non_negative(var_ref=var_ref, var_act=var_act)
    if var_act == 0:
        return INFINITE
    if var_act > var_ref:
        return 0.0
    return var_ref / var_act


def _check_probability(**values):
    for name, v in values.items():
        if not (isinstance(v, (int, float)) and 0.0 <= v <= 1.0):
            raise ValidationError(f"{name} must be a probability in [0, 1], got {v!r}")


def reliability_success(p_ref: float, p_act: float) -> MetricValue:
    """Reliability for success-probability capabilities.

    A lower actual success rate always fails, even when its Bernoulli
    variance happens to be smaller than the required one.
    """
    _check_probability(p_ref=p_ref, p_act=p_act)
    if p_act < p_ref:
        return 0.0
    return reliability(p_ref * (1.0 - p_ref), p_act * (1.0 - p_act))


def responsiveness(t_ref: float, t_act: float) -> MetricValue:
    """Quotient of required to actual response time (``0`` when too slow)."""
    _check_non_negative(t_ref=t_ref, t_act=t_act)
    if t_act == 0:
        raise ValidationError("actual response time must be positive")
    if t_act > t_ref:
        return 0.0
    return t_ref / t_act


def capability_term(c_rel: MetricValue, c_res: MetricValue) -> MetricValue:
    """The DoA summand ``1 / (c_rel * c_res)``.

    A zero metric gives an infinite term, an infinite metric paired with a
    nonzero one gives a zero term.
    """
    for v in (c_rel, c_res):
        if not is_infinite(v):
            _check_non_negative(metric=v)
    zero = c_rel == 0 or c_res == 0
    inf = is_infinite(c_rel) or is_infinite(c_res)
    if zero and inf:
        raise IndeterminateFormError(f"indeterminate capability term: {c_rel!r} * {c_res!r}")
    if zero:
        return INFINITE
    if inf:
        return 0.0
    return 1.0 / (c_rel * c_res)


def passes(metric: MetricValue) -> bool:
    return is_infinite(metric) or metric >= 1.0
