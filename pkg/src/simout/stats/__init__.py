"""Descriptive statistics, normality testing and density estimation."""

from .analyze import SummaryStats, Undefined, defined, stats_analyze, summarize
from .density import DensityEstimate, kde
from .descriptive import (
    confidence_interval,
    ecdf,
    histogram,
    is_constant,
    moving_average,
    qq_points,
    skewness,
)
from .normality import shapiro_wilk

__all__ = [
    "DensityEstimate",
    "SummaryStats",
    "Undefined",
    "confidence_interval",
    "defined",
    "ecdf",
    "histogram",
    "is_constant",
    "kde",
    "moving_average",
    "qq_points",
    "shapiro_wilk",
    "skewness",
    "stats_analyze",
    "summarize",
]
