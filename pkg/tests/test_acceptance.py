"""Acceptance criteria 1 to 11, each reported as one PASS/FAIL line."""

import itertools
import json
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from checks import (
    braces_balanced,
    compile_latex,
    environments_matched,
    latex_engine,
    svg_well_formed,
    wrap_fragment,
)
from simout.compare import TestKind, TestSpec, anova1, mann_whitney, stats_compare, t_test2
from simout.focal import FMMatrix, extract_sixpack
from simout.ingest import read_output_file, write_output_file
from simout.stats import confidence_interval, kde, moving_average, shapiro_wilk

GOLDEN = Path(__file__).parent / "data" / "swilk_golden.json"


def _random_matrix(rng):
    """Values spanning many magnitudes, with exact zeros, negatives and subnormals mixed in."""
    shape = (int(rng.integers(1, 201)), int(rng.integers(1, 11)))
    v = rng.normal(size=shape) * 10.0 ** rng.integers(-300, 300, size=shape)
    mask = rng.random(shape)
    v[mask < 0.02] = 0.0
    v[(mask >= 0.02) & (mask < 0.03)] = 5e-324
    v[(mask >= 0.03) & (mask < 0.05)] = rng.integers(-1000, 1000, size=((mask >= 0.03) & (mask < 0.05)).sum())
    return v


def test_criterion_1_ingest_round_trip(tmp_path, verdict):
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    bad = 0
    for i in range(100):
        m = _random_matrix(rng)
        delim = [",", ";", "\t", " "][i % 4]
        p = tmp_path / f"m{i}.txt"
        write_output_file(p, m, delim)
        back = read_output_file(p).values  # delimiter inferred on the way back
        bad += back.shape != m.shape or back.tobytes() != m.tobytes()
    dt = time.perf_counter() - t0
    verdict(1, bad == 0 and dt < 5, f"{100 - bad}/100 bit-identical, {dt:.2f} s (limit 5 s)")


def _naive_sixpack(xs, ss):
    mx = mn = xs[0]
    amx = amn = 0
    for i, v in enumerate(xs):
        if v > mx:
            mx, amx = v, i
        if v < mn:
            mn, amn = v, i
    tail = xs[ss:]
    mean = math.fsum(tail) / len(tail)
    sd = math.sqrt(math.fsum((v - mean) ** 2 for v in tail) / (len(tail) - 1)) if len(tail) > 1 else 0.0
    return mx, amx, mn, amn, mean, sd


def test_criterion_2_sixpack_oracle(verdict):
    rng = np.random.default_rng(102)
    idx_bad = mom_bad = 0
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 300))
        if rng.random() < 0.3:
            xs = [float(v) for v in rng.integers(-5, 6, size=n)]  # many ties
        else:
            xs = [float(v) for v in rng.normal(rng.uniform(-100, 100), rng.uniform(0.01, 50), size=n)]
        ss = int(rng.integers(0, n))
        got, want = extract_sixpack(xs, ss), _naive_sixpack(xs, ss)
        idx_bad += got[:4] != want[:4]
        for g, w in zip(got[4:], want[4:]):
            err = abs(g - w) / max(1.0, abs(w))
            worst = max(worst, err)
            mom_bad += err > 1e-12
    verdict(2, idx_bad == 0 and mom_bad == 0,
            f"extrema/indices exact in {1000 - idx_bad}/1000, worst moment error {worst:.1e} (limit 1e-12)")


def test_criterion_3_moving_average(verdict):
    rng = np.random.default_rng(103)
    ident = all(np.array_equal(moving_average(x, 0), x)
                for x in (rng.normal(size=int(rng.integers(1, 500))) * 10.0 ** rng.integers(-5, 5) for _ in range(200)))
    hand = moving_average([1, 2, 3, 4, 5], 1)
    err = float(np.max(np.abs(hand - [1.5, 2, 3, 4, 4.5])))
    verdict(3, ident and err <= 1e-12, f"w=0 identity exact on 200 series: {ident}; hand case error {err:.1e} (limit 1e-12)")


def _t_quantile_oracle(p, nu):
    """t quantile to ~50 digits: scipy's estimate polished by an mpmath root solve.

    scipy's ``t.ppf`` alone carries relative errors near 2e-11, too coarse
    for a 1e-10 absolute check on half-widths of order 10 to 100.
    """
    import mpmath as mp
    from scipy.stats import t as student_t

    with mp.workdps(50):
        nu_m, p_m = mp.mpf(nu), mp.mpf(p)

        def cdf(t):
            tail = mp.betainc(nu_m / 2, mp.mpf(1) / 2, 0, nu_m / (nu_m + t * t), regularized=True) / 2
            return 1 - tail if t > 0 else tail

        return float(mp.findroot(lambda t: cdf(t) - p_m, mp.mpf(float(student_t.ppf(p, nu)))))


def test_criterion_4_confidence_interval(verdict):
    lo, hi = confidence_interval([1, 2, 3, 4, 5], 0.05)
    hand_ok = abs(lo - 1.03682) <= 1e-4 and abs(hi - 4.96318) <= 1e-4
    rng = np.random.default_rng(104)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 200))
        x = rng.normal(rng.uniform(-50, 50), rng.uniform(0.01, 20), size=n)
        alpha = float(rng.uniform(0.001, 0.3))
        mean = math.fsum(x) / n
        sd = math.sqrt(math.fsum((v - mean) ** 2 for v in x) / (n - 1))
        half = _t_quantile_oracle(1 - alpha / 2, n - 1) * sd / math.sqrt(n)
        a, b = confidence_interval(x, alpha)
        worst = max(worst, abs(a - (mean - half)), abs(b - (mean + half)))
    verdict(4, hand_ok and worst <= 1e-10,
            f"hand case ({lo:.5f}, {hi:.5f}) vs (1.03682, 4.96318) within 1e-4: {hand_ok}; "
            f"1000 random cases worst {worst:.1e} (limit 1e-10)")


def test_criterion_5_shapiro_wilk(verdict):
    from scipy.stats import kstest  # KS statistic only; the p-values under test are ours

    cases = json.loads(GOLDEN.read_text())["cases"]
    sizes = sorted({c["n"] for c in cases})
    gold = max(abs(shapiro_wilk(c["sample"])[1] - c["p"]) for c in cases)
    rng = np.random.default_rng(105)
    ks = {n: kstest([shapiro_wilk(rng.normal(size=n))[1] for _ in range(200)], "uniform").pvalue for n in (10, 20, 50)}
    affine = 0.0
    for _ in range(200):
        n = int(rng.integers(3, 500))
        x = rng.standard_t(3, size=n)
        a, b = float(rng.uniform(0.001, 1000)) * rng.choice([-1, 1]), float(rng.uniform(-1e4, 1e4))
        affine = max(affine, abs(shapiro_wilk(a * x + b)[1] - shapiro_wilk(x)[1]))
    ok = len(cases) == 20 and sizes == [5, 10, 20, 50, 100, 500] and gold < 1e-3 and min(ks.values()) > 0.01 \
        and affine <= 1e-10
    ks_txt = ", ".join(f"n={n}: {p:.3f}" for n, p in ks.items())
    verdict(5, ok, f"golden worst |dp| {gold:.1e} on {len(cases)} samples (limit 1e-3); "
                   f"null KS p {ks_txt} (need > 0.01); affine worst {affine:.1e} (limit 1e-10)")


def _u_counts(na, nb):
    """Count of rank splits per U value, by listing every subset of ranks for group a."""
    n = na + nb
    counts = {}
    for combo in itertools.combinations(range(1, n + 1), na):
        u = sum(combo) - na * (na + 1) // 2
        counts[u] = counts.get(u, 0) + 1
    return counts, math.comb(n, na)


def _brute_p(u, counts, total):
    lo = sum(c for k, c in counts.items() if k <= u) / total
    hi = sum(c for k, c in counts.items() if k >= u) / total
    return min(1.0, 2 * min(lo, hi))


def test_criterion_6_mann_whitney(verdict):
    rng = np.random.default_rng(106)
    mismatches = checked = 0
    for na in range(1, 7):
        for nb in range(1, 7):
            counts, total = _u_counts(na, nb)
            # every split of the ranks 1..N between the groups, on shuffled real values
            values = np.sort(rng.normal(size=na + nb))
            for combo in itertools.combinations(range(na + nb), na):
                a = values[list(combo)]
                b = np.delete(values, list(combo))
                u = sum(c + 1 for c in combo) - na * (na + 1) // 2
                mismatches += mann_whitney(rng.permutation(a), rng.permutation(b)) != _brute_p(u, counts, total)
                checked += 1
    gaps = {}
    for na in range(1, 12):
        counts, total = _u_counts(na, 12 - na)
        worst = 0.0
        for combo in itertools.combinations(range(12), na):
            a = np.array(combo, float)
            b = np.delete(np.arange(12.0), list(combo))
            u = sum(c + 1 for c in combo) - na * (na + 1) // 2
            worst = max(worst, abs(mann_whitney(a, b, "asymptotic") - _brute_p(u, counts, total)))
        gaps[na] = worst
    ok = mismatches == 0 and gaps[6] < 0.05
    others = ", ".join(f"{k}/{12 - k}: {v:.3f}" for k, v in gaps.items() if k <= 6 and k != 6)
    verdict(6, ok, f"exact path equals brute force on {checked - mismatches}/{checked} splits (n_a, n_b <= 6); "
                   f"N=12 balanced 6/6 worst |approx - enumeration| {gaps[6]:.4f} over all 924 splits (limit 0.05); "
                   f"unbalanced splits for reference {others}")


def test_criterion_7_anova_equals_pooled_t(verdict):
    rng = np.random.default_rng(107)
    worst = 0.0
    for _ in range(500):
        a = rng.normal(rng.uniform(-3, 3), rng.uniform(0.1, 5), size=int(rng.integers(2, 60)))
        b = rng.normal(rng.uniform(-3, 3), rng.uniform(0.1, 5), size=int(rng.integers(2, 60)))
        worst = max(worst, abs(anova1([a, b]) - t_test2(a, b)))
    verdict(7, worst <= 1e-10, f"500 cases worst |p_anova - p_t| {worst:.1e} (limit 1e-10)")


def _two_group_fms(rng, reps, shift):
    """reps independent comparisons as reps FM columns; group b shifted by ``shift`` true SDs."""
    names = tuple(("y", f"rep{i}") for i in range(reps))
    a = rng.normal(size=(30, reps))
    b = rng.normal(size=(30, reps)) + shift
    return FMMatrix(a, names, "a"), FMMatrix(b, names, "b")


SPECS = {
    "pooled t": TestSpec(TestKind.Parametric, "pooled"),
    "Welch t": TestSpec(TestKind.Parametric, "welch"),
    "Mann-Whitney": TestSpec(TestKind.NonParametric),
}


def test_criterion_8_null_calibration_and_power(verdict):
    t0 = time.perf_counter()
    null = _two_group_fms(np.random.default_rng(108), 500, 0.0)
    alt = _two_group_fms(np.random.default_rng(208), 200, 2.0)
    rates, power = {}, {}
    for name, spec in SPECS.items():
        rates[name] = stats_compare(null, spec).n_failed / 500
        power[name] = stats_compare(alt, spec).n_failed / 200
    dt = time.perf_counter() - t0
    ok = all(0.03 <= r <= 0.08 for r in rates.values()) and all(p > 0.9 for p in power.values()) and dt < 60
    txt = "; ".join(f"{k}: rate {rates[k]:.3f}, power {power[k]:.3f}" for k in SPECS)
    verdict(8, ok, f"{txt} (rate in [0.03, 0.08], power > 0.90); {dt:.1f} s (limit 60 s)")


def test_criterion_9_kde(verdict):
    rng = np.random.default_rng(109)
    integrals = []
    for i in range(100):
        n = int(rng.integers(4, 2000))
        kind = i % 4
        if kind == 0:
            x = rng.normal(rng.uniform(-1e3, 1e3), rng.uniform(1e-3, 1e3), size=n)
        elif kind == 1:
            x = rng.exponential(rng.uniform(0.1, 10), size=n)
        elif kind == 2:
            x = np.concatenate([rng.normal(0, 1, size=n), rng.normal(8, 0.5, size=n // 3 + 1)])
        else:
            x = rng.standard_t(2, size=n)
        integrals.append(kde(x).integral())
    est = kde(np.random.default_rng(5000).normal(size=5000))
    peak = float(est.density.max())
    ok = all(0.99 <= v <= 1.01 for v in integrals) and abs(peak - 0.39894) <= 0.05
    verdict(9, ok, f"integral range [{min(integrals):.4f}, {max(integrals):.4f}] on 100 samples (need [0.99, 1.01]); "
                   f"N(0,1) n=5000 peak {peak:.4f} vs 0.39894 (limit 0.05)")


# -- end-to-end walkthrough --------------------------------------------------------

WALKTHROUGH = [
    ["synth", "--model", "predprey", "--runs", "30", "--iters", "100", "--seed", "1", "--out", "impl_a"],
    ["synth", "--model", "predprey", "--runs", "30", "--iters", "100", "--seed", "2", "--out", "impl_b"],
    ["analyze", "--setup", "A=impl_a/run*.csv", "--setup", "B=impl_b/run*.csv", "--ss-idx", "50",
     "--latex", "--figures", "svg,pgf", "--out", "analysis"],
    ["compare", "--setup", "A=impl_a/run*.csv", "--setup", "B=impl_b/run*.csv", "--ss-idx", "50",
     "--pairwise", "--latex", "--figures", "svg,pgf", "--out", "comparison"],
]


def _walkthrough(workdir: Path):
    """Run the CLI steps in ``workdir``; return exit codes, elapsed time and every produced byte."""
    workdir.mkdir()
    codes, outputs = [], {}
    t0 = time.perf_counter()
    for i, argv in enumerate(WALKTHROUGH):
        proc = subprocess.run([sys.executable, "-m", "simout", *argv], cwd=workdir, capture_output=True)
        codes.append(proc.returncode)
        outputs[f"<stdout {i}>"] = proc.stdout
    dt = time.perf_counter() - t0
    for p in sorted(workdir.rglob("*")):
        if p.is_file():
            outputs[str(p.relative_to(workdir))] = p.read_bytes()
    return codes, dt, outputs


@pytest.fixture(scope="module")
def walkthroughs(tmp_path_factory):
    root = tmp_path_factory.mktemp("walkthrough")
    return _walkthrough(root / "first"), _walkthrough(root / "second")


def _partial_cols(tex: str):
    if r"\begin{table}" in tex:
        return None
    row = next(ln for ln in tex.splitlines() if ln.rstrip().endswith(r"\\") and "multicolumn" not in ln)
    return row.count(" & ") + 1


def test_criterion_10_end_to_end(walkthroughs, verdict):
    codes, dt, files = walkthroughs[0]
    svgs = [k for k in files if k.endswith(".svg")]
    tex = [k for k in files if k.endswith((".tex", ".pgf"))]
    svg_ok = all(svg_well_formed(files[k].decode("utf-8")) for k in svgs)
    tex_ok = all(braces_balanced(files[k].decode("utf-8")) and environments_matched(files[k].decode("utf-8"))
                 for k in tex)
    runs_ok = sum(k.startswith("impl_a/run") for k in files) == 30 and sum(k.startswith("impl_b/run") for k in files) == 30
    report = json.loads(files["<stdout 3>"])
    engine = latex_engine()
    if engine is None:
        compile_txt = "LaTeX compile step NOT RUN (no TeX engine installed)"
        compiled_ok = True
    else:
        failures = []
        for k in tex:
            text = files[k].decode("utf-8")
            ok, _ = compile_latex(wrap_fragment(text, _partial_cols(text) if k.endswith(".tex") else None), engine)
            if not ok:
                failures.append(k)
        compiled_ok = not failures
        compile_txt = f"{len(tex) - len(failures)}/{len(tex)} fragments compile with {engine}"
    ok = codes == [0, 0, 0, 0] and svg_ok and tex_ok and runs_ok and dt < 30 and compiled_ok and len(svgs) > 0
    verdict(10, ok, f"exit codes {codes}; {len(svgs)} SVG parse: {svg_ok}; {len(tex)} LaTeX/PGF balanced: {tex_ok}; "
                    f"failed FM tests {report['compare']['n_failed']}/12; {compile_txt}; {dt:.1f} s (limit 30 s)")


@pytest.mark.skipif(latex_engine() is None, reason="no TeX engine installed; fragments checked structurally only")
def test_criterion_10_latex_compiles(walkthroughs):
    _, _, files = walkthroughs[0]
    engine = latex_engine()
    for k, data in files.items():
        if k.endswith((".tex", ".pgf")):
            text = data.decode("utf-8")
            ok, log = compile_latex(wrap_fragment(text, _partial_cols(text) if k.endswith(".tex") else None), engine)
            assert ok, f"{k}: {log}"


def test_criterion_11_determinism(walkthroughs, verdict):
    (_, _, a), (_, _, b) = walkthroughs
    differ = sorted(k for k in set(a) | set(b) if a.get(k) != b.get(k))
    verdict(11, not differ and len(a) > 60,
            f"{len(a)} artifacts and stdout streams compared; byte differences: {differ or 'none'}")
