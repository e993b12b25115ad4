"""Descriptive helpers: confidence intervals, skewness, smoothing, binning,
QQ points and the empirical CDF."""

from __future__ import annotations

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import DegenerateSample, DomainError, SimoutError, TooFewObservations
from ..numerics import normal_quantile, student_t_quantile

__all__ = [
    "as_sample",
    "is_constant",
    "confidence_interval",
    "skewness",
    "moving_average",
    "histogram",
    "qq_points",
    "ecdf",
]


def as_sample(sample, *, min_size: int = 1) -> np.ndarray:
    x = np.asarray(sample, dtype=float).ravel()
    if not np.all(np.isfinite(x)):
        raise SimoutError("sample contains non-finite values")
    if x.size < min_size:
        raise TooFewObservations(f"need at least {min_size} observations, got {x.size}")
    return x


def is_constant(x: np.ndarray) -> bool:
    return x.size > 0 and float(x.max()) == float(x.min())


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def confidence_interval(sample, alpha: float = 0.05) -> tuple[float, float]:
    """Two-sided t interval for the mean at confidence level ``1 - alpha``."""
    x = as_sample(sample, min_size=2)
    alpha = _check_alpha(alpha)
    if is_constant(x):
        c = float(x[0])
        return c, c
    n = x.size
    mean = float(np.mean(x))
    half = student_t_quantile(1.0 - alpha / 2.0, n - 1) * float(np.std(x, ddof=1)) / math.sqrt(n)
    return mean - half, mean + half


def skewness(sample) -> float:
    """Biased sample skewness g1 = m3 / m2**1.5 (population moments)."""
    x = as_sample(sample, min_size=2)
    if is_constant(x):
        raise DegenerateSample("skewness of a constant sample is undefined")
    d = x - np.mean(x)
    m2 = float(np.mean(d * d))
    m3 = float(np.mean(d * d * d))
    if m2 == 0.0:
        raise DegenerateSample("sample spread underflows; skewness is undefined")
    return m3 / m2**1.5


def moving_average(series, w: int) -> np.ndarray:
    """Centered moving average with window ``2w + 1``, truncated at the edges.

    Element i is the mean of ``series[max(0, i-w) : min(L, i+w+1)]``;
    ``w = 0`` returns the series unchanged.
    """
    x = np.asarray(series, dtype=float).ravel()
    if int(w) != w or w < 0:
        raise DomainError(f"window must be a non-negative integer, got {w}")
    w = int(w)
    if w == 0 or x.size == 0:
        return x.copy()
    padded = np.concatenate([np.full(w, np.nan), x, np.full(w, np.nan)])
    windows = sliding_window_view(padded, 2 * w + 1)
    out = np.nanmean(windows, axis=1)
    # A window mean can't leave the data range; clip the rounding noise.
    return np.clip(out, x.min(), x.max())


def histogram(sample, nbins: int = 10) -> tuple[np.ndarray, np.ndarray]:
    """Equal-width histogram over ``[min, max]``.

    Bins are half-open ``[e_i, e_{i+1})`` except the last, which is closed.
    A constant sample ``c`` is binned over ``[c - 0.5, c + 0.5]``.

    Returns
    -------
    edges : ndarray, shape (nbins + 1,)
    counts : ndarray of int, shape (nbins,)
    """
    x = as_sample(sample)
    if int(nbins) != nbins or nbins < 1:
        raise DomainError(f"nbins must be a positive integer, got {nbins}")
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, int(nbins) + 1)
    counts, _ = np.histogram(x, bins=edges)
    return edges, counts.astype(int)


def qq_points(sample) -> tuple[np.ndarray, np.ndarray]:
    """Normal QQ coordinates with plotting positions ``(i - 0.5) / n``.

    Returns ``(theoretical, empirical)``; the empirical side is the sorted
    sample.
    """
    x = as_sample(sample, min_size=2)
    n = x.size
    theo = np.array([normal_quantile((i - 0.5) / n) for i in range(1, n + 1)])
    return theo, np.sort(x)


def ecdf(sample) -> tuple[np.ndarray, np.ndarray]:
    """Empirical CDF as (sorted unique values, fraction of sample <= value)."""
    x = as_sample(sample)
    values, counts = np.unique(x, return_counts=True)
    return values, np.cumsum(counts) / x.size
