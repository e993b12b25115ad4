"""Per-focal-measure summary statistics."""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from ..errors import DegenerateSample, EmptyMatrix, SimoutError
from ..focal import FMMatrix
from .descriptive import as_sample, confidence_interval, is_constant, skewness
from .normality import shapiro_wilk

__all__ = ["Undefined", "SummaryStats", "summarize", "stats_analyze"]


@dataclass(frozen=True)
class Undefined:
    """Stand-in for a statistic that cannot be computed, with the reason."""

    reason: str

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"undefined ({self.reason})"


def defined(v) -> bool:
    return not isinstance(v, Undefined)


@dataclass(frozen=True)
class SummaryStats:
    """Statistics of one focal-measure sample.

    ``ci_lo``/``ci_hi`` bound a t interval at level ``1 - alpha``;
    ``sw_w``/``sw_p`` are the Shapiro-Wilk statistic and p-value; skewness is
    the biased g1 estimator. Fields that can't be computed hold
    :class:`Undefined`.
    """

    name: str
    n: int
    alpha: float
    mean: float
    variance: float | Undefined
    ci_lo: float | Undefined
    ci_hi: float | Undefined
    sw_w: float | Undefined
    sw_p: float | Undefined
    skewness: float | Undefined

    def undefined_fields(self) -> dict[str, str]:
        return {f.name: getattr(self, f.name).reason for f in fields(self)
                if isinstance(getattr(self, f.name), Undefined)}

    def to_dict(self) -> dict:
        """JSON-ready dict; undefined values become null, with reasons under
        ``"undefined"``."""
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = None if isinstance(v, Undefined) else v
        out["undefined"] = self.undefined_fields()
        return out


def summarize(sample, alpha: float = 0.05, name: str = "") -> SummaryStats:
    x = as_sample(sample)
    n = x.size
    mean = float(np.mean(x))
    const = is_constant(x)
    if const:
        mean = float(x[0])

    if n < 2:
        variance = ci_lo = ci_hi = Undefined("fewer than 2 observations")
    else:
        variance = 0.0 if const else float(np.var(x, ddof=1))
        ci_lo, ci_hi = confidence_interval(x, alpha)
        # keep lo <= mean <= hi under rounding
        ci_lo, ci_hi = min(ci_lo, mean), max(ci_hi, mean)

    if n < 2:
        skew = Undefined("fewer than 2 observations")
    elif const:
        skew = Undefined("constant sample")
    else:
        try:
            skew = skewness(x)
        except DegenerateSample as err:
            skew = Undefined(str(err))

    if n < 3:
        sw_w = sw_p = Undefined("fewer than 3 observations")
    elif n > 5000:
        sw_w = sw_p = Undefined("more than 5000 observations")
    elif const:
        sw_w = sw_p = Undefined("constant sample")
    else:
        try:
            sw_w, sw_p = shapiro_wilk(x)
        except DegenerateSample as err:
            sw_w = sw_p = Undefined(str(err))

    return SummaryStats(name, n, float(alpha), mean, variance, ci_lo, ci_hi, sw_w, sw_p, skew)


def stats_analyze(fm: FMMatrix, alpha: float = 0.05) -> list[SummaryStats]:
    """Summary statistics for every column of a focal-measure matrix."""
    if fm is None or fm.m == 0 or fm.n == 0:
        raise EmptyMatrix("focal-measure matrix is empty")
    out = []
    for j, label in enumerate(fm.labels):
        try:
            out.append(summarize(fm.column(j), alpha, label))
        except SimoutError as err:
            raise err.with_context(fm=label) from err
    return out
