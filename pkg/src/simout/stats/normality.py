"""Shapiro-Wilk W test, following Royston's AS R94 algorithm.

The coefficients of the W statistic come from Royston's polynomial
approximation rather than exact expected normal order statistics, and the
p-value from his normalizing transformation of W (log(1 - W) for n >= 12,
-log(gamma - log(1 - W)) for 4 <= n <= 11). n = 3 has an exact p-value.
Censored samples are not supported.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DegenerateSample, SampleSizeOutOfRange
from ..numerics import normal_quantile, normal_sf
from .descriptive import as_sample, is_constant

__all__ = ["shapiro_wilk", "swilk_coefficients"]

_N_MIN = 3
_N_MAX = 5000

# Polynomials in ascending powers.
_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_C3 = (0.5440, -0.39978, 0.025054, -6.714e-4)
_C4 = (1.3822, -0.77857, 0.062767, -0.0020322)
_C5 = (-1.5861, -0.31082, -0.083751, 0.0038915)
_C6 = (-0.4803, -0.082676, 0.0030302)
_G = (-2.273, 0.459)

_SQRTH = math.sqrt(0.5)
_SIX_OVER_PI = 6.0 / math.pi
_ASIN_SQRT_3_4 = math.pi / 3.0


def _poly(coefs, x: float) -> float:
    out = 0.0
    for c in reversed(coefs):
        out = out * x + c
    return out


def swilk_coefficients(n: int) -> np.ndarray:
    """Royston's approximate W coefficients for the upper half of a sample.

    Returns ``n // 2`` positive weights; ``W`` pairs weight ``i`` with
    ``x[n-1-i] - x[i]`` of the sorted sample.
    """
    if not _N_MIN <= n <= _N_MAX:
        raise SampleSizeOutOfRange(f"Shapiro-Wilk needs {_N_MIN} <= n <= {_N_MAX}, got {n}")
    half = n // 2
    if n == 3:
        return np.array([_SQRTH])
    m = np.array([normal_quantile((i - 0.375) / (n + 0.25)) for i in range(1, half + 1)])
    summ2 = 2.0 * float(np.sum(m * m))
    ssumm2 = math.sqrt(summ2)
    rsn = 1.0 / math.sqrt(n)
    a1 = _poly(_C1, rsn) - m[0] / ssumm2
    a = -m.copy()  # m is negative on the lower half; weights are positive
    if n > 5:
        a2 = -m[1] / ssumm2 + _poly(_C2, rsn)
        fac = math.sqrt((summ2 - 2.0 * m[0] ** 2 - 2.0 * m[1] ** 2) / (1.0 - 2.0 * a1**2 - 2.0 * a2**2))
        a[2:] = -m[2:] / fac
        a[1] = a2
    else:
        fac = math.sqrt((summ2 - 2.0 * m[0] ** 2) / (1.0 - 2.0 * a1**2))
        a[1:] = -m[1:] / fac
    a[0] = a1
    return a


def shapiro_wilk(sample) -> tuple[float, float]:
    """Shapiro-Wilk test of normality.

    Parameters
    ----------
    sample : array_like
        3 to 5000 observations, not all equal.

    Returns
    -------
    W : float
        Test statistic in (0, 1].
    p : float
        p-value; small values reject normality.

    Raises
    ------
    SampleSizeOutOfRange
        If n < 3 or n > 5000.
    DegenerateSample
        If all observations are equal.
    """
    x = np.sort(as_sample(sample))
    n = x.size
    if not _N_MIN <= n <= _N_MAX:
        raise SampleSizeOutOfRange(f"Shapiro-Wilk needs {_N_MIN} <= n <= {_N_MAX}, got {n}")
    if is_constant(x):
        raise DegenerateSample("Shapiro-Wilk is undefined for a constant sample")

    a = swilk_coefficients(n)
    half = n // 2
    # Scale by the range so W is affine-invariant in floating point as well.
    z = (x - x[0]) / (x[-1] - x[0])
    numer = float(np.dot(a, z[::-1][:half] - z[:half])) ** 2
    d = z - np.mean(z)
    denom = float(np.dot(d, d))
    w = min(numer / denom, 1.0)

    if n == 3:
        p = _SIX_OVER_PI * (math.asin(math.sqrt(w)) - _ASIN_SQRT_3_4)
        return w, min(max(p, 0.0), 1.0)

    w1 = 1.0 - w
    if w1 <= 0.0:
        return w, 1.0
    y = math.log(w1)
    if n <= 11:
        gamma = _poly(_G, n)
        if y >= gamma:
            return w, 0.0
        y = -math.log(gamma - y)
        mean = _poly(_C3, n)
        sd = math.exp(_poly(_C4, n))
    else:
        lnn = math.log(n)
        mean = _poly(_C5, lnn)
        sd = math.exp(_poly(_C6, lnn))
    p = normal_sf((y - mean) / sd)
    return w, min(max(p, 0.0), 1.0)
