"""Figures (SVG, PGF) and tables (LaTeX, plain text)."""

from __future__ import annotations

import os

from .figure import Band, FigureDoc, FigureGrid, Polyline, Scatter, Step, Text, resolve_style
from .formatting import format_pvalue, format_real, latex_escape
from .minis import mini_hist, mini_qq
from .pgf import emit_pgf, figure_to_pgf
from .plots import PlotMode, dist_plot_per_fm, output_plot, stats_compare_plot
from .svg import emit_svg, figure_to_svg
from .table import MiniPlotCell, NumCell, PCell, Row, TableDoc, TextCell, merge_partials, render_table
from .tables import (
    dist_table_for_fm_matrix,
    dist_table_per_fm,
    dist_table_per_setup,
    stats_compare_table,
    stats_table_per_setup,
)


def emit_table(tab: TableDoc, path: str | os.PathLike, fmt: str | None = None) -> None:
    """Write a table; the format defaults to LaTeX for ``.tex`` paths, text otherwise."""
    if fmt is None:
        fmt = "latex" if os.fspath(path).endswith(".tex") else "text"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_table(tab, fmt))


__all__ = [
    "Band", "FigureDoc", "FigureGrid", "MiniPlotCell", "NumCell", "PCell", "PlotMode", "Polyline",
    "Row", "Scatter", "Step", "TableDoc", "Text", "TextCell",
    "dist_plot_per_fm", "dist_table_for_fm_matrix", "dist_table_per_fm", "dist_table_per_setup",
    "emit_pgf", "emit_svg", "emit_table", "figure_to_pgf", "figure_to_svg",
    "format_pvalue", "format_real", "latex_escape", "merge_partials", "mini_hist", "mini_qq",
    "output_plot", "render_table", "resolve_style", "stats_compare_plot", "stats_compare_table",
    "stats_table_per_setup",
]
