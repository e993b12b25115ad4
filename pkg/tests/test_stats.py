import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simout.errors import DegenerateSample, EmptyMatrix, SampleSizeOutOfRange, TooFewObservations
from simout.focal import FMMatrix
from simout.numerics import normal_quantile, student_t_quantile
from simout.stats import (
    confidence_interval,
    ecdf,
    histogram,
    kde,
    moving_average,
    qq_points,
    shapiro_wilk,
    skewness,
    stats_analyze,
    summarize,
)
from simout.stats.analyze import Undefined

GOLDEN = Path(__file__).parent / "data" / "swilk_golden.json"


# -- descriptive --------------------------------------------------------------

def test_ci_hand_case():
    lo, hi = confidence_interval([1, 2, 3, 4, 5], 0.05)
    assert lo == pytest.approx(1.03682, abs=1e-4)
    assert hi == pytest.approx(4.96318, abs=1e-4)
    # exact: 3 -/+ t(0.975, 4) * sqrt(2.5 / 5)
    half = 2.7764451051977987 * math.sqrt(0.5)
    assert (lo, hi) == pytest.approx((3 - half, 3 + half), abs=1e-12)


def test_ci_constant_and_small():
    assert confidence_interval([4, 4, 4], 0.05) == (4.0, 4.0)
    with pytest.raises(TooFewObservations):
        confidence_interval([1.0], 0.05)


def test_ci_widens_with_confidence():
    x = np.random.default_rng(0).normal(size=12)
    lo95, hi95 = confidence_interval(x, 0.05)
    lo99, hi99 = confidence_interval(x, 0.01)
    assert lo99 < lo95 and hi99 > hi95


def test_skewness():
    assert skewness([1, 2, 3]) == pytest.approx(0.0, abs=1e-15)
    assert skewness([1, 2, 9]) == pytest.approx(0.66542, abs=1e-4)
    assert skewness([1, 2, 9]) == pytest.approx(30 / (38 / 3) ** 1.5, abs=1e-12)
    x = np.random.default_rng(1).exponential(size=30)
    assert skewness(-x) == pytest.approx(-skewness(x), abs=1e-14)
    with pytest.raises(DegenerateSample):
        skewness([2, 2, 2])


def test_moving_average():
    np.testing.assert_allclose(moving_average([1, 2, 3, 4, 5], 1), [1.5, 2, 3, 4, 4.5], atol=1e-12)
    x = np.random.default_rng(2).normal(size=50)
    assert np.array_equal(moving_average(x, 0), x)
    np.testing.assert_array_equal(moving_average(np.full(9, 3.25), 4), np.full(9, 3.25))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=60), st.integers(0, 70))
def test_moving_average_oracle_and_range(xs, w):
    x = np.asarray(xs)
    got = moving_average(x, w)
    want = [np.mean(x[max(0, i - w): i + w + 1]) for i in range(x.size)]
    np.testing.assert_allclose(got, want, rtol=1e-9, atol=1e-9)
    assert got.min() >= x.min() and got.max() <= x.max()


def test_histogram_cases():
    edges, counts = histogram(np.arange(10), 5)
    np.testing.assert_allclose(edges, [0, 1.8, 3.6, 5.4, 7.2, 9])
    np.testing.assert_array_equal(counts, [2, 2, 2, 2, 2])
    edges, counts = histogram([3, 3], 4)
    assert edges[0] == 2.5 and edges[-1] == 3.5
    assert counts.sum() == 2 and np.count_nonzero(counts) == 1
    k = np.nonzero(counts)[0][0]
    assert edges[k] <= 3 <= edges[k + 1]


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=80), st.integers(1, 20))
def test_histogram_conserves_count(xs, nbins):
    edges, counts = histogram(xs, nbins)
    assert counts.sum() == len(xs) and len(edges) == nbins + 1


def test_qq_points():
    theo, emp = qq_points([5.0, 2.0])
    np.testing.assert_allclose(theo, [-0.67449, 0.67449], atol=1e-5)
    np.testing.assert_array_equal(emp, [2.0, 5.0])
    theo, _ = qq_points(np.arange(7.0))
    np.testing.assert_allclose(theo, -theo[::-1], atol=1e-15)
    with pytest.raises(TooFewObservations):
        qq_points([1.0])


def test_ecdf():
    x, f = ecdf([2, 1, 2])
    np.testing.assert_array_equal(x, [1, 2])
    np.testing.assert_allclose(f, [1 / 3, 1])
    x, f = ecdf([7.0])
    assert list(x) == [7.0] and list(f) == [1.0]


@given(st.lists(st.floats(-100, 100), min_size=2, max_size=40), st.randoms())
def test_ecdf_qq_permutation_invariant(xs, rnd):
    ys = list(xs)
    rnd.shuffle(ys)
    for fn in (ecdf, qq_points):
        a, b = fn(xs), fn(ys)
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])
    assert ecdf(xs)[1][-1] == 1.0
    assert np.all(np.diff(ecdf(xs)[1]) > 0)


# -- Shapiro-Wilk --------------------------------------------------------------

def test_swilk_golden():
    cases = json.loads(GOLDEN.read_text())["cases"]
    assert len(cases) == 20 and {c["n"] for c in cases} == {5, 10, 20, 50, 100, 500}
    for c in cases:
        w, p = shapiro_wilk(c["sample"])
        assert abs(p - c["p"]) < 1e-3
        assert abs(w - c["W"]) < 1e-6


def test_swilk_normal_scores():
    n = 50
    x = [normal_quantile((i - 0.375) / (n + 0.25)) for i in range(1, n + 1)]
    w, p = shapiro_wilk(x)
    assert w > 0.99 and p > 0.9


def test_swilk_n3_exact_and_errors():
    w, p = shapiro_wilk([1.0, 2.0, 4.0])
    # n = 3: W has a closed-form null distribution
    assert p == pytest.approx(6 / math.pi * (math.asin(math.sqrt(w)) - math.asin(math.sqrt(0.75))), abs=1e-12)
    with pytest.raises(DegenerateSample):
        shapiro_wilk([1, 1, 1, 1])
    with pytest.raises(SampleSizeOutOfRange):
        shapiro_wilk([1.0, 2.0])
    with pytest.raises(SampleSizeOutOfRange):
        shapiro_wilk(np.arange(5001.0))


def test_swilk_null_uniformity():
    from scipy.stats import kstest  # test-only oracle for the KS statistic

    rng = np.random.default_rng(7)
    for n in (10, 20, 50):
        ps = [shapiro_wilk(rng.normal(size=n))[1] for _ in range(200)]
        assert kstest(ps, "uniform").pvalue > 0.01


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 200), st.floats(-1e3, 1e3).filter(lambda a: abs(a) > 1e-3), st.floats(-1e4, 1e4),
       st.integers(0, 2**32 - 1))
def test_swilk_affine_invariance(n, a, b, seed):
    x = np.random.default_rng(seed).normal(size=n)
    w0, p0 = shapiro_wilk(x)
    w1, p1 = shapiro_wilk(a * x + b)
    assert abs(p1 - p0) <= 1e-10
    assert 0 <= p0 <= 1 and 0 < w0 <= 1


# -- KDE --------------------------------------------------------------------------

def test_kde_peak_standard_normal():
    x = np.random.default_rng(5000).normal(size=5000)
    est = kde(x)
    assert abs(est.density.max() - 0.39894) < 0.05
    assert abs(est.grid[np.argmax(est.density)]) < 0.3
    assert est.method == "diffusion" and est.bandwidth > 0


def test_kde_contract():
    rng = np.random.default_rng(11)
    for _ in range(30):
        n = int(rng.integers(4, 400))
        x = rng.gamma(rng.uniform(0.5, 5), size=n) * rng.uniform(0.1, 100)
        est = kde(x, 2**10)
        assert 0.99 <= est.integral() <= 1.01
        assert np.all(est.density >= 0) and np.all(np.diff(est.grid) > 0) and est.bandwidth > 0


def test_kde_grid_doubling_and_symmetry():
    x = np.random.default_rng(4).normal(size=300)
    a, b = kde(x, 2**10), kde(x, 2**11)
    assert abs(a.integral() - b.integral()) < 1e-3
    m = x.mean()
    e1, e2 = kde(x, 2**10), kde(2 * m - x, 2**10)
    np.testing.assert_allclose(e1.density, e2.density[::-1], atol=1e-10)


def test_kde_errors():
    with pytest.raises(TooFewObservations):
        kde([1.0, 2.0, 3.0])
    with pytest.raises(DegenerateSample):
        kde([2.0] * 10)


# -- stats_analyze ----------------------------------------------------------------

def test_analyze_hand_and_degenerate():
    fm = FMMatrix(np.array([[1, 4], [2, 4], [3, 4], [4, 4], [5, 4.0]]), (("o", "a"), ("o", "b")))
    s1, s2 = stats_analyze(fm, 0.05)
    assert s1.mean == 3 and s1.variance == pytest.approx(2.5)
    assert (s1.ci_lo, s1.ci_hi) == pytest.approx((1.03682, 4.96318), abs=1e-4)
    assert s2.variance == 0 and isinstance(s2.skewness, Undefined) and isinstance(s2.sw_p, Undefined)
    d = s2.to_dict()
    assert d["sw_p"] is None and d["undefined"]["sw_p"] == "constant sample"


def test_analyze_small_samples_and_empty():
    st1 = summarize([1.0], 0.05)
    assert isinstance(st1.variance, Undefined) and isinstance(st1.ci_lo, Undefined)
    st2 = summarize([1.0, 2.0], 0.05)
    assert isinstance(st2.sw_p, Undefined) and st2.ci_lo < st2.mean < st2.ci_hi
    with pytest.raises(EmptyMatrix):
        stats_analyze(None)


def test_analyze_permutation_invariant():
    data = np.random.default_rng(9).normal(size=(25, 3))
    names = tuple(("o", s) for s in "abc")
    a = stats_analyze(FMMatrix(data, names))
    b = stats_analyze(FMMatrix(data[::-1].copy(), names))
    for x, y in zip(a, b):
        for f in ("mean", "variance", "ci_lo", "ci_hi", "sw_w", "sw_p", "skewness"):
            assert getattr(x, f) == pytest.approx(getattr(y, f), rel=1e-12, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e4, 1e4), min_size=2, max_size=60), st.floats(0.001, 0.5))
def test_summary_invariants(xs, alpha):
    s = summarize(xs, alpha)
    assert s.ci_lo <= s.mean <= s.ci_hi
    assert s.variance >= 0
    if not isinstance(s.sw_p, Undefined):
        assert 0 <= s.sw_p <= 1


def test_ci_formula_oracle():
    rng = np.random.default_rng(4)
    for _ in range(200):
        n = int(rng.integers(2, 60))
        x = rng.normal(rng.uniform(-5, 5), rng.uniform(0.1, 10), size=n)
        alpha = float(rng.uniform(0.01, 0.2))
        half = student_t_quantile(1 - alpha / 2, n - 1) * x.std(ddof=1) / math.sqrt(n)
        lo, hi = confidence_interval(x, alpha)
        assert lo == pytest.approx(x.mean() - half, abs=1e-10)
        assert hi == pytest.approx(x.mean() + half, abs=1e-10)
