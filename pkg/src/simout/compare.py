"""Statistical comparison of focal measures across model implementations.

Two implementations are compared FM by FM with a t-test (parametric) or the
Mann-Whitney U test (non-parametric); three or more with one-way ANOVA or
Kruskal-Wallis. A test "fails" when its p-value is below alpha, flagging a
possible misalignment.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DegenerateInput, FMNameMismatch, SimoutError, TooFewObservations
from .focal import FMMatrix
from .numerics import chi2_sf, f_sf, normal_sf, student_t_two_sided

__all__ = [
    "TestKind",
    "TVariant",
    "TestSpec",
    "CompareResult",
    "PairwiseTable",
    "t_test2",
    "mann_whitney",
    "anova1",
    "kruskal_wallis",
    "rankdata",
    "stats_compare",
    "stats_compare_pw",
]

EXACT_MW_MAX_N = 12


class TestKind(str, Enum):
    __test__ = False  # not a pytest class despite the name

    Parametric = "p"
    NonParametric = "np"


class TVariant(str, Enum):
    PooledT = "pooled"
    WelchT = "welch"


@dataclass(frozen=True)
class TestSpec:
    """Which test family applies to each FM, and at what significance level.

    ``per_fm_tests`` is either a single :class:`TestKind` (applied to every
    FM) or one kind per FM.
    """

    __test__ = False

    per_fm_tests: TestKind | tuple[TestKind, ...] = TestKind.Parametric
    variant: TVariant = TVariant.PooledT
    alpha: float = 0.05

    def __post_init__(self):
        tests = self.per_fm_tests
        if isinstance(tests, (str, TestKind)):
            tests = TestKind(tests)
        else:
            tests = tuple(TestKind(t) for t in tests)
        object.__setattr__(self, "per_fm_tests", tests)
        object.__setattr__(self, "variant", TVariant(self.variant))
        if not 0.0 < self.alpha < 1.0:
            raise SimoutError(f"alpha must lie in (0, 1), got {self.alpha}")

    def tests_for(self, m: int) -> tuple[TestKind, ...]:
        if isinstance(self.per_fm_tests, TestKind):
            return (self.per_fm_tests,) * m
        if len(self.per_fm_tests) != m:
            raise SimoutError(f"{len(self.per_fm_tests)} test kinds given for {m} focal measures")
        return self.per_fm_tests


@dataclass(frozen=True)
class CompareResult:
    fm_names: tuple[tuple[str, str], ...]
    p_values: tuple[float, ...]
    tests_used: tuple[str, ...]
    alpha: float
    tags: tuple[str, ...] = ()

    @property
    def failed(self) -> tuple[bool, ...]:
        return tuple(p < self.alpha for p in self.p_values)

    @property
    def n_failed(self) -> int:
        return sum(self.failed)

    @property
    def labels(self) -> list[str]:
        return [f"{o}:{s}" for o, s in self.fm_names]

    def to_dict(self) -> dict:
        return {
            "tags": list(self.tags),
            "alpha": self.alpha,
            "fm_names": [list(nm) for nm in self.fm_names],
            "p_values": list(self.p_values),
            "tests_used": list(self.tests_used),
            "failed": list(self.failed),
            "n_failed": self.n_failed,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)


@dataclass(frozen=True)
class PairwiseTable:
    labels: tuple[str, ...]
    fail_counts: np.ndarray
    m: int = 0

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "fail_counts": self.fail_counts.tolist(), "m": self.m}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)

    def to_text(self) -> str:
        """Aligned plain-text matrix of failed-test counts."""
        cells = [[""] + list(self.labels)]
        for label, row in zip(self.labels, self.fail_counts):
            cells.append([label] + [str(int(v)) for v in row])
        widths = [max(len(r[c]) for r in cells) for c in range(len(cells[0]))]
        lines = []
        for r, row in enumerate(cells):
            parts = [row[0].ljust(widths[0])] + [v.rjust(w) for v, w in zip(row[1:], widths[1:])]
            lines.append("  ".join(parts).rstrip())
            if r == 0:
                lines.append("-" * len(lines[0]))
        return "\n".join(lines) + "\n"


# -- ranks ------------------------------------------------------------------

def rankdata(values) -> np.ndarray:
    """1-based ranks, ties get the average of the ranks they span."""
    x = np.asarray(values, dtype=float)
    order = np.argsort(x, kind="mergesort")
    sorted_x = x[order]
    ranks = np.empty(x.size)
    i = 0
    while i < x.size:
        j = i
        while j + 1 < x.size and sorted_x[j + 1] == sorted_x[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _tie_sizes(values) -> np.ndarray:
    _, counts = np.unique(np.asarray(values, dtype=float), return_counts=True)
    return counts


# -- two-sample tests -------------------------------------------------------

def _vec(x, name: str, min_size: int) -> np.ndarray:
    v = np.asarray(x, dtype=float).ravel()
    if v.size < min_size:
        raise TooFewObservations(f"sample {name} needs at least {min_size} observations, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise SimoutError(f"sample {name} contains non-finite values")
    return v


def t_test2(a, b, variant: TVariant | str = TVariant.PooledT) -> float:
    """Two-sided two-sample t-test p-value.

    Pooled variance with ``na + nb - 2`` degrees of freedom, or Welch's test
    with Welch-Satterthwaite degrees of freedom. If both samples are
    constant, p is 1 when they are equal and 0 otherwise.
    """
    a, b = _vec(a, "a", 2), _vec(b, "b", 2)
    variant = TVariant(variant)
    na, nb = a.size, b.size
    ma, mb = float(np.mean(a)), float(np.mean(b))
    va = 0.0 if np.ptp(a) == 0 else float(np.var(a, ddof=1))
    vb = 0.0 if np.ptp(b) == 0 else float(np.var(b, ddof=1))
    if va == 0.0 and vb == 0.0:
        return 1.0 if a[0] == b[0] else 0.0
    diff = ma - mb
    if variant is TVariant.PooledT:
        df = na + nb - 2
        sp2 = ((na - 1) * va + (nb - 1) * vb) / df
        se = math.sqrt(sp2 * (1.0 / na + 1.0 / nb))
    else:
        qa, qb = va / na, vb / nb
        se = math.sqrt(qa + qb)
        df = (qa + qb) ** 2 / (qa * qa / (na - 1) + qb * qb / (nb - 1))
    return student_t_two_sided(diff / se, df)


def _u_statistic(a: np.ndarray, b: np.ndarray) -> tuple[float, np.ndarray]:
    ranks = rankdata(np.concatenate([a, b]))
    u = float(np.sum(ranks[: a.size])) - a.size * (a.size + 1) / 2.0
    return u, ranks


def _mw_exact(u: float, na: int, nb: int) -> float:
    """Exact two-sided p by enumerating every assignment of ranks to ``a``."""
    n = na + nb
    offset = na * (na + 1) // 2
    le = ge = total = 0
    for combo in itertools.combinations(range(1, n + 1), na):
        uc = sum(combo) - offset
        le += uc <= u
        ge += uc >= u
        total += 1
    return min(1.0, 2.0 * min(le, ge) / total)


def mann_whitney(a, b, method: str = "auto") -> float:
    """Two-sided Mann-Whitney U test p-value.

    ``method="auto"`` is exact (full enumeration of rank assignments) when
    ``na + nb <= 12`` and there are no ties; otherwise the normal
    approximation with tie correction and a 0.5 continuity correction.
    ``"exact"`` and ``"asymptotic"`` force one route; enumeration cost grows
    as C(na + nb, na) and needs tie-free data.
    """
    if method not in ("auto", "exact", "asymptotic"):
        raise SimoutError(f"unknown method {method!r}")
    a, b = _vec(a, "a", 1), _vec(b, "b", 1)
    na, nb = a.size, b.size
    n = na + nb
    u, ranks = _u_statistic(a, b)
    ties = _tie_sizes(ranks)
    no_ties = bool(np.all(ties == 1))
    if method == "exact" and not no_ties:
        raise DegenerateInput("exact enumeration needs samples without ties")
    if method == "exact" or (method == "auto" and n <= EXACT_MW_MAX_N and no_ties):
        return _mw_exact(u, na, nb)
    tie_term = float(np.sum(ties**3 - ties)) / (n * (n - 1)) if n > 1 else 0.0
    var = na * nb / 12.0 * ((n + 1) - tie_term)
    if var <= 0:
        return 1.0
    dev = abs(u - na * nb / 2.0) - 0.5
    if dev <= 0:
        return 1.0
    return min(1.0, 2.0 * normal_sf(dev / math.sqrt(var)))


# -- k-sample tests ---------------------------------------------------------

def _groups(groups, min_size: int) -> list[np.ndarray]:
    gs = [_vec(g, f"#{i}", min_size) for i, g in enumerate(groups)]
    if len(gs) < 2:
        raise DegenerateInput(f"need at least 2 groups, got {len(gs)}")
    return gs


def anova1(groups: Sequence) -> float:
    """One-way ANOVA p-value, ``P(F(k-1, N-k) >= F)``."""
    gs = _groups(groups, 2)
    allx = np.concatenate(gs)
    if np.ptp(allx) == 0:
        raise DegenerateInput("all observations are identical")
    k, n = len(gs), allx.size
    grand = float(np.mean(allx))
    ssb = sum(g.size * (float(np.mean(g)) - grand) ** 2 for g in gs)
    ssw = sum(float(np.sum((g - np.mean(g)) ** 2)) for g in gs)
    if ssw == 0.0:
        return 0.0
    f = (ssb / (k - 1)) / (ssw / (n - k))
    return f_sf(f, k - 1, n - k)


def kruskal_wallis(groups: Sequence) -> float:
    """Kruskal-Wallis H test p-value with tie correction (chi-square approx.)."""
    gs = _groups(groups, 1)
    allx = np.concatenate(gs)
    n = allx.size
    if n < 3:
        raise DegenerateInput(f"need at least 3 observations in total, got {n}")
    ranks = rankdata(allx)
    ties = _tie_sizes(allx)
    correction = 1.0 - float(np.sum(ties**3 - ties)) / (n**3 - n)
    if correction <= 0:
        raise DegenerateInput("all observations are tied")
    h = 0.0
    start = 0
    for g in gs:
        r = ranks[start:start + g.size]
        h += float(np.sum(r)) ** 2 / g.size
        start += g.size
    h = (12.0 / (n * (n + 1)) * h - 3.0 * (n + 1)) / correction
    return chi2_sf(max(h, 0.0), len(gs) - 1)


# -- FM matrix comparison ---------------------------------------------------

_TEST_NAMES = {
    (TestKind.Parametric, 2, TVariant.PooledT): "t-test (pooled)",
    (TestKind.Parametric, 2, TVariant.WelchT): "t-test (Welch)",
    (TestKind.NonParametric, 2): "Mann-Whitney U",
    (TestKind.Parametric, 3): "one-way ANOVA",
    (TestKind.NonParametric, 3): "Kruskal-Wallis",
}


def _apply(kind: TestKind, cols: list[np.ndarray], variant: TVariant) -> tuple[float, str]:
    if len(cols) == 2:
        if kind is TestKind.Parametric:
            return t_test2(cols[0], cols[1], variant), _TEST_NAMES[(kind, 2, variant)]
        return mann_whitney(cols[0], cols[1]), _TEST_NAMES[(kind, 2)]
    name = _TEST_NAMES[(kind, 3)]
    if np.ptp(np.concatenate(cols)) == 0:
        # Every implementation produced the same constant: perfectly aligned.
        return 1.0, name
    test = anova1 if kind is TestKind.Parametric else kruskal_wallis
    return test(cols), name


def stats_compare(fms: Sequence[FMMatrix], spec: TestSpec = TestSpec()) -> CompareResult:
    """Compare the same focal measures across k >= 2 implementations."""
    fms = list(fms)
    if len(fms) < 2:
        raise SimoutError(f"need at least 2 FM matrices to compare, got {len(fms)}")
    names = fms[0].fm_names
    for i, fm in enumerate(fms[1:], start=1):
        if fm.fm_names != names:
            raise FMNameMismatch(f"FM names of matrix {i} ({fm.tag!r}) differ from matrix 0 ({fms[0].tag!r})")
    kinds = spec.tests_for(len(names))
    p_values, used = [], []
    for j, kind in enumerate(kinds):
        cols = [fm.column(j) for fm in fms]
        try:
            p, name = _apply(kind, cols, spec.variant)
        except SimoutError as err:
            raise err.with_context(fm=fms[0].labels[j]) from err
        p_values.append(min(max(float(p), 0.0), 1.0))
        used.append(name)
    return CompareResult(names, tuple(p_values), tuple(used), spec.alpha, tuple(fm.tag for fm in fms))


def stats_compare_pw(fms: Sequence[FMMatrix], spec: TestSpec = TestSpec()) -> PairwiseTable:
    """Failed-test counts for every pair of implementations."""
    fms = list(fms)
    if len(fms) < 2:
        raise SimoutError(f"need at least 2 FM matrices to compare, got {len(fms)}")
    k = len(fms)
    counts = np.zeros((k, k), dtype=int)
    for i, j in itertools.combinations(range(k), 2):
        counts[i, j] = counts[j, i] = stats_compare([fms[i], fms[j]], spec).n_failed
    labels = tuple(fm.tag or f"impl{i}" for i, fm in enumerate(fms))
    return PairwiseTable(labels, counts, fms[0].m)
