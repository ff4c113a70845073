"""
Least-squares fits on logarithmic axes.

Used for divergence detection (cutoff increments), small-r slopes of modulus
curves and large-r growth of Morrey local averages.
"""
import math
from typing import NamedTuple, Sequence

import numpy as np


class LineFit(NamedTuple):
    slope: float
    intercept: float
    residual: float  # largest relative deviation of the data from the fit
    points: int


def fit_power_law(x: Sequence[float], y: Sequence[float]) -> LineFit:
    """
    Fit y ≈ C·x^slope by linear regression of log|y| on log x.

    Non-positive or non-finite samples are dropped. The residual is the
    largest |y/fit − 1| over the retained samples.
    """
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    keep = np.isfinite(x) & np.isfinite(y) & (x > 0) & (y > 0)
    x, y = x[keep], y[keep]
    if x.size < 2:
        return LineFit(math.nan, math.nan, math.inf, int(x.size))

    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    residual = float(np.max(np.abs(np.expm1(resid))))
    return LineFit(float(slope), float(intercept), residual, int(x.size))


def local_slopes(x: Sequence[float], y: Sequence[float]) -> np.ndarray:
    """Slopes between consecutive samples on log–log axes."""
    x = np.log(np.asarray(x, dtype=float))
    y = np.log(np.abs(np.asarray(y, dtype=float)))
    return np.diff(y) / np.diff(x)
