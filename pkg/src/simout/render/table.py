"""Renderer-neutral table model with plain-text and LaTeX output.

A partial table renders as bare LaTeX rows (no ``tabular`` or ``table``
environment) so several partial tables can be concatenated inside a
hand-written table with its own headers and footers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..errors import SimoutError
from .formatting import format_pvalue, format_real, latex_escape

__all__ = [
    "TextCell",
    "NumCell",
    "PCell",
    "MiniPlotCell",
    "Cell",
    "Row",
    "TableDoc",
    "render_text",
    "render_latex",
    "render_table",
    "merge_partials",
]


@dataclass(frozen=True)
class TextCell:
    text: str
    bold: bool = False
    math: bool = False  # already LaTeX; emitted without escaping


@dataclass(frozen=True)
class NumCell:
    value: float
    sig: int = 3

    @property
    def text(self) -> str:
        return format_real(self.value, self.sig)


@dataclass(frozen=True)
class PCell:
    """A p-value, emphasized (bold / starred) when ``emphasize`` is set."""

    value: float
    emphasize: bool = False
    floor: float = 0.001

    @property
    def text(self) -> str:
        return format_pvalue(self.value, self.floor)


@dataclass(frozen=True)
class MiniPlotCell:
    """Inline picture: PGF code for LaTeX, a short text stand-in otherwise."""

    pgf: str
    text: str = ""


Cell = Union[TextCell, NumCell, PCell, MiniPlotCell]


def as_cell(value) -> Cell:
    if isinstance(value, (TextCell, NumCell, PCell, MiniPlotCell)):
        return value
    if isinstance(value, float) or isinstance(value, int) and not isinstance(value, bool):
        return NumCell(float(value))
    return TextCell(str(value))


@dataclass(frozen=True)
class Row:
    cells: tuple[Cell, ...]
    kind: str = "body"  # header | body | footer
    rule_below: bool = False

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(as_cell(c) for c in self.cells))
        if self.kind not in ("header", "body", "footer"):
            raise SimoutError(f"bad row kind {self.kind!r}")


@dataclass(frozen=True)
class TableDoc:
    n_cols: int
    align: tuple[str, ...]
    rows: tuple[Row, ...]
    partial: bool = False
    caption: str = ""
    footnotes: tuple[str, ...] = ()
    title: str = ""
    preferred_format: str = "latex"

    def __post_init__(self):
        object.__setattr__(self, "align", tuple(self.align))
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "footnotes", tuple(self.footnotes))
        if len(self.align) != self.n_cols or any(a not in "lrc" or len(a) != 1 for a in self.align):
            raise SimoutError(f"alignment {self.align} does not match {self.n_cols} columns")
        for i, row in enumerate(self.rows):
            if len(row.cells) != self.n_cols:
                raise SimoutError(f"row {i} has {len(row.cells)} cells, table has {self.n_cols} columns")

    @property
    def body_rows(self) -> list[Row]:
        return [r for r in self.rows if r.kind == "body"]


def merge_partials(*tables: TableDoc) -> TableDoc:
    """Concatenate the rows of partial tables with the same column layout."""
    if not tables:
        raise SimoutError("nothing to merge")
    first = tables[0]
    for t in tables:
        if not t.partial:
            raise SimoutError("only partial tables can be merged")
        if t.n_cols != first.n_cols:
            raise SimoutError("partial tables differ in column count")
    rows = tuple(r for t in tables for r in t.rows)
    return TableDoc(first.n_cols, first.align, rows, partial=True, title=first.title,
                    footnotes=tuple(f for t in tables for f in t.footnotes))


# -- plain text -------------------------------------------------------------

def _text_of(cell: Cell) -> str:
    if isinstance(cell, PCell):
        return cell.text + ("*" if cell.emphasize else "")
    if isinstance(cell, MiniPlotCell):
        return cell.text
    if isinstance(cell, TextCell):
        return cell.text
    return cell.text


def render_text(table: TableDoc) -> str:
    """Columns aligned with spaces; a dashed rule under the header."""
    grid = [[_text_of(c) for c in row.cells] for row in table.rows]
    widths = [max((len(r[j]) for r in grid), default=0) for j in range(table.n_cols)]
    lines = []
    if table.title:
        lines.append(table.title)
    total = sum(widths) + 2 * (table.n_cols - 1)
    for row, texts in zip(table.rows, grid):
        parts = []
        for text, w, a in zip(texts, widths, table.align):
            parts.append(text.ljust(w) if a == "l" else text.rjust(w) if a == "r" else text.center(w))
        lines.append("  ".join(parts).rstrip())
        if row.kind == "header" or row.rule_below:
            lines.append("-" * total)
    for note in table.footnotes:
        lines.append(note)
    return "\n".join(lines) + "\n"


# -- LaTeX ------------------------------------------------------------------

def _latex_of(cell: Cell) -> str:
    if isinstance(cell, PCell):
        text = cell.text
        text = text.replace("<", "$<$")
        return rf"\textbf{{{text}}}" if cell.emphasize else text
    if isinstance(cell, MiniPlotCell):
        return cell.pgf
    if isinstance(cell, NumCell):
        text = cell.text
        if "e" in text and text not in ("inf", "-inf"):
            mant, exp = text.split("e")
            return rf"${mant}\times 10^{{{exp}}}$"
        return text
    text = cell.text if cell.math else latex_escape(cell.text)
    return rf"\textbf{{{text}}}" if cell.bold else text


def _latex_rows(table: TableDoc) -> list[str]:
    lines = []
    for row in table.rows:
        lines.append(" & ".join(_latex_of(c) for c in row.cells) + r" \\")
        if row.kind == "header" or row.rule_below:
            lines.append(r"\hline")
    return lines


def render_latex(table: TableDoc) -> str:
    lines = []
    if table.title:
        lines.append("% " + table.title.replace("\n", " "))
    if table.partial:
        lines += _latex_rows(table)
        for note in table.footnotes:
            lines.append(rf"\multicolumn{{{table.n_cols}}}{{l}}{{\footnotesize {latex_escape(note)}}} \\")
        return "\n".join(lines) + "\n"
    lines += [r"\begin{table}[ht]", r"\centering", r"\begin{tabular}{" + "".join(table.align) + "}", r"\hline"]
    lines += _latex_rows(table)
    lines.append(r"\hline")
    for note in table.footnotes:
        lines.append(rf"\multicolumn{{{table.n_cols}}}{{l}}{{\footnotesize {latex_escape(note)}}} \\")
    lines.append(r"\end{tabular}")
    if table.caption:
        lines.append(rf"\caption{{{latex_escape(table.caption)}}}")
    lines.append(r"\end{table}")
    return "\n".join(lines) + "\n"


def render_table(table: TableDoc, fmt: str | None = None) -> str:
    fmt = fmt or table.preferred_format
    if fmt == "latex":
        return render_latex(table)
    if fmt == "text":
        return render_text(table)
    raise SimoutError(f"unknown table format {fmt!r}")
