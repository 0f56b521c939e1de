"""Earlier ratio-scale autonomy formulas, for side-by-side reporting.

These are plain transcriptions of the published formulas. None of their
constants have a documented calibration; :func:`curtin_autonomy` defaults
to ``C_n = 1, i = j = 1``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .model import ValidationError

#: Default constants for :func:`curtin_autonomy`.
CURTIN_DEFAULTS = {"c_n": 1.0, "i": 1.0, "j": 1.0}


def insaurralde_level(deltas: Sequence[float], n: float = 5) -> float:
    """Mean automation level of the five problem-solving stages.

    ``deltas`` are the levels for definition, exploration, selection,
    implementation and verification.
    """
    if len(deltas) != 5:
        raise ValidationError(f"expected five automation levels, got {len(deltas)}")
    if n == 0:
        raise ValidationError("n must be nonzero")
    return float(sum(deltas)) / n


def insaurralde_ratio(actual: Sequence[float], standard: Sequence[float], n: float = 5) -> float:
    """``10 * sum(act/std) / n`` over the five problem-solving stages."""
    if len(actual) != 5 or len(standard) != 5:
        raise ValidationError("expected five actual and five standard behaviour values")
    if n == 0:
        raise ValidationError("n must be nonzero")
    if any(s == 0 for s in standard):
        raise ValidationError("standard behaviour values must be nonzero")
    return 10.0 * sum(a / s for a, s in zip(actual, standard)) / n


def doboli_integral(
    effort: np.ndarray,
    performance_bounds: tuple[float, float] = (0.0, 1.0),
    area_bounds: tuple[float, float] = (0.0, 1.0),
    time_bounds: tuple[float, float] = (0.0, 1.0),
) -> float:
    """Triple integral of human effort over performance x area x time.

    Parameters
    ----------
    effort : array_like, shape (P, A, T)
        Samples of the effort field on a uniform grid spanning the box,
        endpoints included. Each axis needs at least two points.
    performance_bounds, area_bounds, time_bounds : (float, float)
        Integration limits, in the order they appear in the integral.

    Returns
    -------
    float
        Composite trapezoidal estimate; the error is O(h**2) in the grid
        spacing for smooth fields.
    """
    f = np.asarray(effort, dtype=float)
    if f.ndim != 3:
        raise ValidationError(f"effort grid must be 3-D, got shape {f.shape}")
    if min(f.shape) < 2:
        raise ValidationError(f"every axis needs >= 2 samples, got shape {f.shape}")
    for lo, hi in (performance_bounds, area_bounds, time_bounds):
        if lo == hi:
            raise ValidationError(f"degenerate integration axis [{lo}, {hi}]")
    out = f
    for bounds, size in zip((time_bounds, area_bounds, performance_bounds), f.shape[::-1]):
        x = np.linspace(bounds[0], bounds[1], size)
        out = np.trapezoid(out, x, axis=-1)
    return float(out)


def curtin_autonomy(
    control_bits: float,
    total_bits: float,
    contact_time: float,
    total_time: float,
    c_n: float = CURTIN_DEFAULTS["c_n"],
    i: float = CURTIN_DEFAULTS["i"],
    j: float = CURTIN_DEFAULTS["j"],
) -> float:
    """``c_n * (B_C/B_T)**-i * (T_C/T_T)**-j``."""
    if not (total_bits > 0 and total_time > 0):
        raise ValidationError("total message size and total mission time must be positive")
    bits = control_bits / total_bits
    time = contact_time / total_time
    if (bits <= 0 and i != 0) or (time <= 0 and j != 0):
        raise ValidationError("bandwidth and contact ratios must be positive when their exponent is nonzero")
    return float(c_n * bits ** -i * time ** -j)
