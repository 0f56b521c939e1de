"""
Earlier ratio-scale formulas
============================

Provided for side-by-side numbers. Their constants carry no documented
calibration.
"""

import numpy as np

from autoquant.baselines import curtin_autonomy, doboli_integral, insaurralde_level, insaurralde_ratio

print("mean automation level:", insaurralde_level([1, 2, 3, 4, 5]))
print("behaviour ratio:", insaurralde_ratio([2, 2, 2, 2, 2], [1, 1, 1, 1, 1]))
print("bandwidth/time:", curtin_autonomy(1, 2, 1, 2))

# effort falls off with performance and time on a 64^3 grid
x = np.linspace(0, 1, 64)
p, a, t = np.meshgrid(x, x, x, indexing="ij")
print("effort integral:", doboli_integral((1 - p) * np.exp(-t)))
