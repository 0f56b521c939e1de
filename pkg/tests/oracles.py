"""Independent reference computations used to freeze expected values.

Nothing here imports the package: the formulas are re-typed from their
definitions and operate on plain numbers.
"""

import math

import numpy as np

K = 5.730729

# (AL motorways, AL built-up, f_ref, PL_A, f_A, PL_B, f_B); probabilities for the last two rows
TABLE = {
    "longitudinal_position_control": (1.40, 0.29, 150, 1.00, 200, 0.15, 160),
    "lateral_position_control": (0.57, 0.29, 150, 0.3, 200, 0.15, 160),
    "heading_control": (1.5, 0.5, 150, 1.0, 200, 0.3, 160),
    "longitudinal_speed_control": (4.1, 3.0, 150, 2.0, 200, 2.0, 160),
    "lateral_speed_control": (1.0, 1.4, 150, 0.7, 200, 1.0, 160),
    "object_detection": (0.95, 0.95, 10, 0.98, 20, 0.96, 15),
    "local_path_planning": (0.95, 0.95, 10, 0.99, 20, 0.98, 15),
}
PROBABILITY_ROWS = {"object_detection", "local_path_planning"}


def c_rel(var_ref, var_act):
    if var_act == 0:
        return math.inf
    if var_act > var_ref:
        return 0.0
    return var_ref / var_act


def c_res(t_ref, t_act):
    if t_act > t_ref:
        return 0.0
    return t_ref / t_act


def table_doa(vehicle: str, region: str) -> float:
    terms = []
    for name, (al_m, al_b, f_ref, pl_a, f_a, pl_b, f_b) in TABLE.items():
        ref = al_m if region == "motorways" else al_b
        act, f_act = (pl_a, f_a) if vehicle == "A" else (pl_b, f_b)
        if name in PROBABILITY_ROWS:
            rel = 0.0 if act < ref else c_rel(ref * (1 - ref), act * (1 - act))
        else:
            rel = c_rel((ref / K) ** 2, (act / K) ** 2)
        res = c_res(1 / f_ref, 1 / f_act)
        terms.append(1 / (rel * res) if rel * res else math.inf)
    n = len(terms)
    return n * n / sum(terms)


def batch_window_events(samples, window, var_ref, tta, outcome=False, p_ref=None):
    """Replay one capability with a fresh two-pass window statistic per sample.

    ``samples`` is a list of ``(timestamp, value)``; returns ``(kind, t)``.
    """
    events = []
    since = None
    reported = False
    values = np.array([v for _, v in samples], dtype=float)
    for k, (t, _) in enumerate(samples):
        if k + 1 < window:
            continue
        w = values[k + 1 - window:k + 1]
        if outcome:
            p = w.mean()
            fault = p < p_ref
        else:
            fault = np.var(w, ddof=1) > var_ref
        if fault:
            if since is None:
                since, reported = t, False
                events.append(("fault-onset", t))
            elif not reported and t - since > tta:
                reported = True
                events.append(("integrity-event", t))
        elif since is not None:
            since = None
            events.append(("fault-cleared", t))
    return events
