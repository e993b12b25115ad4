"""Table builders for summary statistics, distributional analysis and comparisons."""

from __future__ import annotations

from typing import Sequence

from ..compare import CompareResult
from ..errors import SimoutError
from ..stats import SummaryStats, stats_analyze, summarize
from ..stats.analyze import defined
from ..stats.descriptive import as_sample
from .formatting import format_real
from .minis import mini_hist, mini_qq, sparkline
from .table import MiniPlotCell, NumCell, PCell, Row, TableDoc, TextCell

__all__ = [
    "stats_table_per_setup",
    "dist_table_per_fm",
    "dist_table_per_setup",
    "stats_compare_table",
    "dist_table_for_fm_matrix",
]

MISSING = "--"


def _num(v) -> TextCell | NumCell:
    return NumCell(float(v)) if defined(v) else TextCell(MISSING)


def _p(v) -> TextCell | PCell:
    return PCell(float(v)) if defined(v) else TextCell(MISSING)


def _ci(st: SummaryStats) -> TextCell:
    if not defined(st.ci_lo):
        return TextCell(MISSING)
    return TextCell(f"[{format_real(st.ci_lo)}, {format_real(st.ci_hi)}]")


def _header(*names: str) -> Row:
    return Row(tuple(TextCell(n, bold=True) for n in names), kind="header")


def stats_table_per_setup(stats: Sequence[SummaryStats], fmt: str = "text", title: str = "") -> TableDoc:
    """One row per focal measure: mean, variance, CI, SW p-value, skewness.

    Statistics that are undefined for a sample are shown as ``--``.
    """
    if not stats:
        raise SimoutError("no statistics to tabulate")
    alpha = stats[0].alpha
    ci_name = f"{100 * (1 - alpha):g}% CI"
    rows = [_header("FM", "mean", "variance", ci_name, "SW p", "skewness")]
    for st in stats:
        rows.append(Row((TextCell(st.name), NumCell(st.mean), _num(st.variance), _ci(st),
                         _p(st.sw_p), _num(st.skewness))))
    return TableDoc(6, ("l", "r", "r", "c", "r", "r"), tuple(rows), title=title,
                    caption=title, preferred_format=fmt)


def _mini(sample, kind: str) -> MiniPlotCell | TextCell:
    x = as_sample(sample)
    if kind == "hist":
        return MiniPlotCell(mini_hist(x), sparkline(x))
    if x.size < 2:
        return TextCell(MISSING)
    return MiniPlotCell(mini_qq(x), f"({x.size} pts)")


def dist_table_per_fm(per_setup_samples: Sequence[tuple[str, Sequence[float]]], fm_name: str = "",
                      alpha: float = 0.05) -> TableDoc:
    """Partial table: one row per setup with mean, variance, SW p, skewness
    and inline histogram / QQ pictures.

    Partial tables carry no header so several can be merged under one.
    """
    if not per_setup_samples:
        raise SimoutError("no setups to tabulate")
    rows = []
    for tag, sample in per_setup_samples:
        st = summarize(sample, alpha, fm_name)
        rows.append(Row((TextCell(tag), NumCell(st.mean), _num(st.variance), _p(st.sw_p),
                         _num(st.skewness), _mini(sample, "hist"), _mini(sample, "qq"))))
    return TableDoc(7, ("l", "r", "r", "r", "r", "c", "c"), tuple(rows), partial=True, title=fm_name)


def dist_table_per_setup(stats: Sequence[SummaryStats], samples: Sequence[Sequence[float]],
                         tag: str = "", fmt: str = "latex") -> TableDoc:
    """One row per focal measure of a setup: mean, variance, SW p, skewness,
    histogram and QQ plot."""
    if len(stats) != len(samples):
        raise SimoutError(f"{len(stats)} statistics but {len(samples)} samples")
    rows = [_header("FM", "mean", "variance", "SW p", "skewness", "hist.", "QQ")]
    for st, sample in zip(stats, samples):
        rows.append(Row((TextCell(st.name), NumCell(st.mean), _num(st.variance), _p(st.sw_p),
                         _num(st.skewness), _mini(sample, "hist"), _mini(sample, "qq"))))
    return TableDoc(7, ("l", "r", "r", "r", "r", "c", "c"), tuple(rows), title=tag, caption=tag,
                    preferred_format=fmt)


def dist_table_for_fm_matrix(fm, fmt: str = "latex", alpha: float = 0.05) -> TableDoc:
    """:func:`dist_table_per_setup` straight from a focal-measure matrix."""
    stats = stats_analyze(fm, alpha)
    return dist_table_per_setup(stats, [fm.column(j) for j in range(fm.m)], fm.tag, fmt)


def stats_compare_table(
    results: Sequence[CompareResult],
    row_labels: Sequence[str] | None = None,
    groups: Sequence[str] | None = None,
    fmt: str = "latex",
    title: str = "",
) -> TableDoc:
    """p-values of one or more comparisons, one row per comparison.

    Columns are the label columns (group, if given, then row label)
    followed by one column per focal measure. Cells with ``p < alpha`` are
    emphasized; the footnote states alpha and the Bonferroni level.
    """
    results = list(results)
    if not results:
        raise SimoutError("no comparison results to tabulate")
    names = results[0].fm_names
    for r in results:
        if r.fm_names != names:
            raise SimoutError("comparison results cover different focal measures")
    if row_labels is None:
        row_labels = [" vs ".join(r.tags) if r.tags else f"comparison {i + 1}" for i, r in enumerate(results)]
    if len(row_labels) != len(results):
        raise SimoutError("one row label per comparison result is required")
    if groups is not None and len(groups) != len(results):
        raise SimoutError("one group label per comparison result is required")

    m = len(names)
    label_heads = (["setup"] if groups is not None else []) + ["comparison"]
    n_lab = len(label_heads)
    rows = [_header(*label_heads, *results[0].labels)]
    prev_group = None
    for i, res in enumerate(results):
        lab = []
        if groups is not None:
            lab.append(TextCell(groups[i] if groups[i] != prev_group else ""))
            prev_group = groups[i]
        lab.append(TextCell(row_labels[i]))
        cells = [PCell(p, emphasize=p < res.alpha) for p in res.p_values]
        last_in_group = groups is not None and i + 1 < len(results) and groups[i + 1] != groups[i]
        rows.append(Row(tuple(lab + cells), rule_below=last_in_group))

    alphas = sorted({r.alpha for r in results})
    a = alphas[0]
    mark = "Bold" if fmt == "latex" else "*"
    note = (f"{mark} marks p < {a:g}. With {m} tests per row a Bonferroni "
            f"correction would use {format_real(a / m)}.")
    if len(alphas) > 1:
        note = f"{mark} marks p below each row's alpha."
    align = ("l",) * n_lab + ("r",) * m
    return TableDoc(n_lab + m, align, tuple(rows), footnotes=(note,), title=title, caption=title,
                    preferred_format=fmt)
