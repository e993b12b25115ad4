"""Figure builders: output dynamics, per-FM distributions, implementation overlays.

Every builder returns a :class:`FigureDoc` or :class:`FigureGrid` whose
layer data is exactly what the statistics functions produced.
"""

from __future__ import annotations

from enum import Enum
from typing import Sequence

import numpy as np

from ..errors import DomainError, SimoutError
from ..ingest import RunSet
from ..stats import ecdf, histogram, kde, moving_average, qq_points, summarize
from ..stats.analyze import defined
from ..stats.descriptive import as_sample, is_constant
from .figure import Band, FigureDoc, FigureGrid, Polyline, Scatter, Step, Text
from .formatting import format_pvalue, format_real

__all__ = ["PlotMode", "output_plot", "dist_plot_per_fm", "stats_compare_plot", "qq_reference"]

# Grid size for density panels; KDE accuracy is not the bottleneck in a plot.
PLOT_KDE_GRID = 512


class PlotMode(str, Enum):
    Superimposed = "superimposed"
    Extremes = "extremes"
    MovingAvg = "movavg"


def output_plot(
    rs: RunSet,
    output: int,
    mode: PlotMode | str = PlotMode.Superimposed,
    w: int = 0,
    runs: Sequence[int] | None = None,
    *,
    average_runs: bool = False,
) -> FigureDoc:
    """Plot one output over iterations.

    Parameters
    ----------
    rs : RunSet
    output : int
        Column index of the output.
    mode : PlotMode
        ``superimposed`` draws one polyline per run; ``extremes`` fills the
        band between the per-iteration min and max and draws both edges;
        ``movavg`` draws the centered moving average of each run.
    w : int
        Half-window for ``movavg``; 0 means no smoothing.
    runs : sequence of int, optional
        Subset of run indices (default: all runs, in order).
    average_runs : bool
        ``movavg`` only: smooth the across-run mean instead of each run.
    """
    mode = PlotMode(mode)
    if not 0 <= output < rs.n_outputs:
        raise IndexError(f"output index {output} out of range (0..{rs.n_outputs - 1})")
    data = rs.column(output)
    if runs is not None:
        runs = list(runs)
        for r in runs:
            if not 0 <= r < len(rs.runs):
                raise IndexError(f"run index {r} out of range (0..{len(rs.runs) - 1})")
        data = data[runs]
        run_ids = runs
    else:
        run_ids = list(range(data.shape[0]))
    if data.shape[0] == 0:
        raise SimoutError("no runs selected")
    iters = np.arange(rs.n_iters, dtype=float)
    name = rs.output_names[output]
    layers = []

    if mode is PlotMode.Superimposed:
        for k, (rid, series) in enumerate(zip(run_ids, data)):
            layers.append(Polyline(iters, series, style=f"series{k}"))
        title = f"{name}: {len(run_ids)} run{'s' if len(run_ids) != 1 else ''}"
    elif mode is PlotMode.Extremes:
        lo, hi = data.min(axis=0), data.max(axis=0)
        layers.append(Band(iters, lo, hi, style="band", label="range"))
        layers.append(Polyline(iters, lo, style="extreme", label="min"))
        layers.append(Polyline(iters, hi, style="extreme", label="max"))
        title = f"{name}: extremes over {len(run_ids)} runs"
    else:
        if int(w) != w or w < 0:
            raise DomainError(f"window must be a non-negative integer, got {w}")
        if average_runs:
            layers.append(Polyline(iters, moving_average(data.mean(axis=0), int(w)), style="series0",
                                   label="mean of runs"))
        else:
            for k, series in enumerate(data):
                layers.append(Polyline(iters, moving_average(series, int(w)), style=f"series{k}"))
        title = f"{name}: moving average, w={int(w)}"
    return FigureDoc.build(title, "iteration", name, layers)


def qq_reference(sample) -> tuple[float, float]:
    """Intercept and slope of the line through the quartile pairs.

    The line passes through (Φ⁻¹(0.25), Q1) and (Φ⁻¹(0.75), Q3).
    """
    x = as_sample(sample, min_size=2)
    q1, q3 = np.percentile(x, [25, 75])
    z = 0.6744897501960817  # Φ⁻¹(0.75)
    slope = (q3 - q1) / (2 * z)
    return float(q1 + slope * z), float(slope)


def _kde_panel(tag: str, x: np.ndarray, st) -> FigureDoc:
    est = kde(x, PLOT_KDE_GRID)
    top = float(est.density.max())
    layers = [Polyline(est.grid, est.density, style="series0", label="KDE")]
    layers.append(Polyline((st.mean, st.mean), (0.0, top), style="mean", label="mean"))
    if defined(st.ci_lo):
        layers.append(Polyline((st.ci_lo, st.ci_lo), (0.0, top), style="ci", label=f"{100 * (1 - st.alpha):g}% CI"))
        layers.append(Polyline((st.ci_hi, st.ci_hi), (0.0, top), style="ci"))
    note = f"mean={format_real(st.mean)}"
    if defined(st.ci_lo):
        note += f"  CI=[{format_real(st.ci_lo)}, {format_real(st.ci_hi)}]"
    if defined(st.sw_p):
        note += f"  SW p={format_pvalue(st.sw_p)}"
    layers.append(Text(est.grid[0], top * 1.08, note, anchor="left"))
    return FigureDoc.build(f"{tag}: PDF", "value", "density", layers)


def _hist_panel(tag: str, x: np.ndarray) -> FigureDoc:
    edges, counts = histogram(x)
    layer = Step(edges, counts.astype(float), style="hist", fill=True)
    return FigureDoc.build(f"{tag}: histogram", "value", "count", [layer])


def _qq_panel(tag: str, x: np.ndarray) -> FigureDoc:
    theo, emp = qq_points(x)
    a, b = qq_reference(x)
    t = np.array([theo[0], theo[-1]])
    layers = [Scatter(theo, emp), Polyline(t, a + b * t, style="ref")]
    return FigureDoc.build(f"{tag}: QQ", "normal quantile", "sample quantile", layers)


def dist_plot_per_fm(samples: Sequence[tuple[str, Sequence[float]]], alpha: float = 0.05,
                     fm_name: str = "") -> FigureGrid:
    """One row per setup: density with mean, CI and SW p; histogram; QQ plot.

    Panels whose statistic cannot be computed (constant or too-small
    samples) are replaced by a notice; the rest of the row is kept.
    """
    if not samples:
        raise SimoutError("no samples to plot")
    rows = []
    for tag, sample in samples:
        x = as_sample(sample)
        st = summarize(x, alpha, fm_name)
        row = []
        builders = (
            (_kde_panel, (tag, x, st), "PDF"),
            (_hist_panel, (tag, x), "histogram"),
            (_qq_panel, (tag, x), "QQ"),
        )
        for build, args, what in builders:
            reason = None
            if what != "histogram":
                if is_constant(x) and x.size > 1:
                    reason = "constant sample"
                elif what == "PDF" and x.size < 4:
                    reason = "too few observations for a density"
                elif x.size < 2:
                    reason = "too few observations"
            if reason is None:
                try:
                    row.append(build(*args))
                    continue
                except SimoutError as err:
                    reason = str(err)
            row.append(FigureDoc.message(f"{tag}: {what}", f"{what} unavailable: {reason}"))
        rows.append(tuple(row))
    return FigureGrid(fm_name or "focal measure", tuple(rows))


def stats_compare_plot(samples: Sequence[tuple[str, Sequence[float]]],
                       fm_name: str = "") -> tuple[FigureDoc, FigureDoc]:
    """Density and ECDF overlays of one FM across implementations.

    Both figures share one x range covering every sample's density grid.
    """
    if len(samples) < 2:
        raise SimoutError(f"need at least 2 implementations, got {len(samples)}")
    pdf_layers, cdf_layers = [], []
    lo, hi = np.inf, -np.inf
    for k, (tag, sample) in enumerate(samples):
        x = as_sample(sample)
        xs, fs = ecdf(x)
        cdf_layers.append(Step(xs, fs, style=f"series{k}", label=tag))
        lo, hi = min(lo, xs[0]), max(hi, xs[-1])
        if x.size >= 4 and not is_constant(x):
            est = kde(x, PLOT_KDE_GRID)
            pdf_layers.append(Polyline(est.grid, est.density, style=f"series{k}", label=tag))
            lo, hi = min(lo, est.grid[0]), max(hi, est.grid[-1])
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    xr = (float(lo), float(hi))
    title = fm_name or "focal measure"
    if pdf_layers:
        pdf = FigureDoc.build(f"{title}: PDF", "value", "density", pdf_layers, xrange=xr)
    else:
        pdf = FigureDoc.message(f"{title}: PDF", "density unavailable for every sample")
    cdf = FigureDoc.build(f"{title}: CDF", "value", "cumulative probability", cdf_layers,
                          xrange=xr, yrange=(0.0, 1.05))
    return pdf, cdf
