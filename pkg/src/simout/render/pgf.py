"""PGF/TikZ backend: a ``tikzpicture`` per figure or grid.

Coordinates are in centimetres after the affine axis mapping. Colors are
declared once per picture with ``\\definecolor`` so the fragment only needs
``\\usepackage{tikz}``.
"""

from __future__ import annotations

import os

from .figure import (
    Band,
    FigureDoc,
    FigureGrid,
    Polyline,
    Scatter,
    Step,
    Text,
    nice_ticks,
    resolve_style,
    tick_label,
)
from .formatting import latex_escape

__all__ = ["figure_to_pgf", "emit_pgf"]

PANEL_W = 6.0
PANEL_H = 4.0
GAP_X = 1.6
GAP_Y = 1.6

_DASH = {"solid": "solid", "dashed": "dashed", "dotted": "dotted", "dashdot": "dash dot"}
_ANCHOR = {"left": "west", "center": "center", "right": "east"}


def _n(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Colors:
    """Assigns stable names to the RGB triples used in a picture."""

    def __init__(self):
        self.names: dict[tuple[int, int, int], str] = {}

    def __call__(self, rgb) -> str:
        rgb = tuple(int(c) for c in rgb)
        if rgb not in self.names:
            self.names[rgb] = f"simoutc{len(self.names)}"
        return self.names[rgb]

    def definitions(self) -> list[str]:
        return [rf"\definecolor{{{name}}}{{RGB}}{{{r},{g},{b}}}" for (r, g, b), name in self.names.items()]


def _draw_opts(token: str, colors: _Colors) -> str:
    st = resolve_style(token)
    return f"{colors(st.color)}, {_DASH.get(st.dash, 'solid')}, line width={_n(st.width * 0.6)}pt"


def _path(pts) -> str:
    return " -- ".join(f"({_n(x)},{_n(y)})" for x, y in pts)


def _panel(fig: FigureDoc, colors: _Colors) -> list[str]:
    (x0, x1), (y0, y1) = fig.xrange, fig.yrange

    def mx(v):
        return (v - x0) / (x1 - x0) * PANEL_W

    def my(v):
        return (v - y0) / (y1 - y0) * PANEL_H

    def pts(xs, ys):
        return [(mx(a), my(b)) for a, b in zip(xs, ys)]

    out = [rf"\node[anchor=south, font=\small] at ({_n(PANEL_W / 2)},{_n(PANEL_H + 0.1)}) {{{latex_escape(fig.title)}}};"]
    if fig.notice:
        out.append(rf"\draw[gray] (0,0) rectangle ({_n(PANEL_W)},{_n(PANEL_H)});")
        out.append(rf"\node[font=\footnotesize, text=gray] at ({_n(PANEL_W / 2)},{_n(PANEL_H / 2)}) {{{latex_escape(fig.notice)}}};")
        return out

    out.append(r"\begin{scope}")
    out.append(rf"\clip (0,0) rectangle ({_n(PANEL_W)},{_n(PANEL_H)});")
    legend = []
    for layer in fig.layers:
        if isinstance(layer, Band):
            st = resolve_style(layer.style)
            outline = pts(layer.x, layer.lo) + pts(layer.x[::-1], layer.hi[::-1])
            out.append(rf"\fill[{colors(st.color)}, fill opacity={_n(st.opacity)}] {_path(outline)} -- cycle;")
        elif isinstance(layer, Polyline):
            if layer.x:
                out.append(rf"\draw[{_draw_opts(layer.style, colors)}] {_path(pts(layer.x, layer.y))};")
        elif isinstance(layer, Step):
            path = layer.path(x1)
            outline = [(mx(a), my(b)) for a, b in path]
            if layer.fill:
                st = resolve_style(layer.style)
                c = colors(st.color)
                out.append(rf"\filldraw[fill={c}, draw={c}, fill opacity={_n(st.opacity)}, line width=0.3pt] {_path(outline)} -- cycle;")
            else:
                out.append(rf"\draw[{_draw_opts(layer.style, colors)}] {_path(outline)};")
        elif isinstance(layer, Scatter):
            st = resolve_style(layer.style)
            c = colors(st.color)
            for a, b in zip(layer.x, layer.y):
                out.append(rf"\fill[{c}] ({_n(mx(a))},{_n(my(b))}) circle[radius={_n(st.marker_size * 0.5)}pt];")
        elif isinstance(layer, Text):
            out.append(rf"\node[anchor={_ANCHOR[layer.anchor]}, font=\scriptsize] at ({_n(mx(layer.x))},{_n(my(layer.y))}) {{{latex_escape(layer.text)}}};")
        if getattr(layer, "label", ""):
            legend.append((layer.label, layer.style))
    out.append(r"\end{scope}")

    out.append(rf"\draw (0,0) rectangle ({_n(PANEL_W)},{_n(PANEL_H)});")
    xt = nice_ticks(x0, x1)
    for t in xt:
        out.append(rf"\draw ({_n(mx(t))},0) -- ({_n(mx(t))},-0.1) node[below, font=\tiny] {{{tick_label(t, xt)}}};")
    yt = nice_ticks(y0, y1)
    for t in yt:
        out.append(rf"\draw (0,{_n(my(t))}) -- (-0.1,{_n(my(t))}) node[left, font=\tiny] {{{tick_label(t, yt)}}};")
    out.append(rf"\node[below, font=\footnotesize] at ({_n(PANEL_W / 2)},-0.45) {{{latex_escape(fig.xlabel)}}};")
    out.append(rf"\node[rotate=90, above, font=\footnotesize] at (-0.85,{_n(PANEL_H / 2)}) {{{latex_escape(fig.ylabel)}}};")
    for i, (label, token) in enumerate(legend[:10]):
        y = PANEL_H - 0.25 - 0.3 * i
        out.append(rf"\draw[{_draw_opts(token, colors)}] ({_n(PANEL_W - 2.0)},{_n(y)}) -- ({_n(PANEL_W - 1.6)},{_n(y)}) "
                   rf"node[right, font=\tiny, text=black] {{{latex_escape(label)}}};")
    return out


def figure_to_pgf(fig: FigureDoc | FigureGrid) -> str:
    colors = _Colors()
    body: list[str] = []
    if isinstance(fig, FigureDoc):
        body += _panel(fig, colors)
    else:
        nrows, ncols = fig.shape
        for r, row in enumerate(fig.rows):
            for c, panel in enumerate(row):
                dx = c * (PANEL_W + GAP_X)
                dy = (nrows - 1 - r) * (PANEL_H + GAP_Y)
                body.append(rf"\begin{{scope}}[shift={{({_n(dx)},{_n(dy)})}}]")
                body += _panel(panel, colors)
                body.append(r"\end{scope}")
        if fig.title:
            width = ncols * PANEL_W + (ncols - 1) * GAP_X
            top = nrows * (PANEL_H + GAP_Y) - GAP_Y + 0.7
            body.append(rf"\node[anchor=south, font=\bfseries] at ({_n(width / 2)},{_n(top)}) {{{latex_escape(fig.title)}}};")
    lines = [r"\begin{tikzpicture}"] + colors.definitions() + body + [r"\end{tikzpicture}"]
    return "\n".join(lines) + "\n"


def emit_pgf(fig: FigureDoc | FigureGrid, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(figure_to_pgf(fig))
