"""SVG 1.1 backend for :class:`FigureDoc` / :class:`FigureGrid`."""

from __future__ import annotations

import os
from xml.sax.saxutils import escape

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

__all__ = ["figure_to_svg", "emit_svg"]

PANEL_W = 480
PANEL_H = 320
M_LEFT, M_RIGHT, M_TOP, M_BOTTOM = 62, 16, 30, 44
GRID_TITLE_H = 28

_DASH = {"solid": None, "dashed": "6,3", "dotted": "1.5,2.5", "dashdot": "6,3,1.5,3"}
_ANCHOR = {"left": "start", "center": "middle", "right": "end"}


def _f(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _rgb(c) -> str:
    return f"rgb({c[0]},{c[1]},{c[2]})"


def _stroke_attrs(token: str) -> str:
    st = resolve_style(token)
    attrs = f'stroke="{_rgb(st.color)}" stroke-width="{_f(st.width)}" fill="none"'
    if _DASH.get(st.dash):
        attrs += f' stroke-dasharray="{_DASH[st.dash]}"'
    return attrs


class _Mapper:
    def __init__(self, fig: FigureDoc, ox: float, oy: float):
        self.x0, self.x1 = fig.xrange
        self.y0, self.y1 = fig.yrange
        self.left = ox + M_LEFT
        self.right = ox + PANEL_W - M_RIGHT
        self.top = oy + M_TOP
        self.bottom = oy + PANEL_H - M_BOTTOM

    def x(self, v: float) -> float:
        return self.left + (v - self.x0) / (self.x1 - self.x0) * (self.right - self.left)

    def y(self, v: float) -> float:
        return self.bottom - (v - self.y0) / (self.y1 - self.y0) * (self.bottom - self.top)

    def pts(self, xs, ys) -> str:
        return " ".join(f"{_f(self.x(a))},{_f(self.y(b))}" for a, b in zip(xs, ys))


def _panel(fig: FigureDoc, ox: float, oy: float) -> list[str]:
    m = _Mapper(fig, ox, oy)
    out = ['<g class="panel">']
    out.append(f'<text x="{_f(ox + PANEL_W / 2)}" y="{_f(oy + 18)}" text-anchor="middle" '
               f'font-size="12" font-family="sans-serif">{escape(fig.title)}</text>')
    if fig.notice:
        out.append(f'<rect x="{_f(m.left)}" y="{_f(m.top)}" width="{_f(m.right - m.left)}" '
                   f'height="{_f(m.bottom - m.top)}" fill="none" stroke="rgb(160,160,160)" stroke-width="0.8"/>')
        out.append(f'<text x="{_f((m.left + m.right) / 2)}" y="{_f((m.top + m.bottom) / 2)}" text-anchor="middle" '
                   f'font-size="11" font-family="sans-serif" fill="rgb(90,90,90)">{escape(fig.notice)}</text>')
        out.append("</g>")
        return out

    # axes frame and ticks
    out.append(f'<rect x="{_f(m.left)}" y="{_f(m.top)}" width="{_f(m.right - m.left)}" '
               f'height="{_f(m.bottom - m.top)}" fill="none" stroke="black" stroke-width="0.8"/>')
    xt = nice_ticks(*fig.xrange)
    for t in xt:
        px = m.x(t)
        out.append(f'<line x1="{_f(px)}" y1="{_f(m.bottom)}" x2="{_f(px)}" y2="{_f(m.bottom + 4)}" stroke="black" stroke-width="0.8"/>')
        out.append(f'<text x="{_f(px)}" y="{_f(m.bottom + 15)}" text-anchor="middle" font-size="9" '
                   f'font-family="sans-serif">{escape(tick_label(t, xt))}</text>')
    yt = nice_ticks(*fig.yrange)
    for t in yt:
        py = m.y(t)
        out.append(f'<line x1="{_f(m.left - 4)}" y1="{_f(py)}" x2="{_f(m.left)}" y2="{_f(py)}" stroke="black" stroke-width="0.8"/>')
        out.append(f'<text x="{_f(m.left - 6)}" y="{_f(py + 3)}" text-anchor="end" font-size="9" '
                   f'font-family="sans-serif">{escape(tick_label(t, yt))}</text>')
    out.append(f'<text x="{_f((m.left + m.right) / 2)}" y="{_f(oy + PANEL_H - 8)}" text-anchor="middle" '
               f'font-size="10" font-family="sans-serif">{escape(fig.xlabel)}</text>')
    cy = (m.top + m.bottom) / 2
    out.append(f'<text x="{_f(ox + 14)}" y="{_f(cy)}" text-anchor="middle" font-size="10" font-family="sans-serif" '
               f'transform="rotate(-90 {_f(ox + 14)} {_f(cy)})">{escape(fig.ylabel)}</text>')

    legend = []
    for layer in fig.layers:
        if isinstance(layer, Band):
            st = resolve_style(layer.style)
            pts = m.pts(layer.x, layer.lo) + " " + m.pts(layer.x[::-1], layer.hi[::-1])
            out.append(f'<polygon points="{pts}" fill="{_rgb(st.color)}" fill-opacity="{_f(st.opacity)}" stroke="none"/>')
        elif isinstance(layer, Polyline):
            out.append(f'<polyline points="{m.pts(layer.x, layer.y)}" {_stroke_attrs(layer.style)}/>')
        elif isinstance(layer, Step):
            path = layer.path(fig.xrange[1])
            pts = m.pts([p[0] for p in path], [p[1] for p in path])
            if layer.fill:
                st = resolve_style(layer.style)
                out.append(f'<polygon points="{pts}" fill="{_rgb(st.color)}" fill-opacity="{_f(st.opacity)}" '
                           f'stroke="{_rgb(st.color)}" stroke-width="0.6"/>')
            else:
                out.append(f'<polyline points="{pts}" {_stroke_attrs(layer.style)}/>')
        elif isinstance(layer, Scatter):
            st = resolve_style(layer.style)
            for a, b in zip(layer.x, layer.y):
                out.append(f'<circle cx="{_f(m.x(a))}" cy="{_f(m.y(b))}" r="{_f(st.marker_size)}" fill="{_rgb(st.color)}"/>')
        elif isinstance(layer, Text):
            st = resolve_style(layer.style)
            out.append(f'<text x="{_f(m.x(layer.x))}" y="{_f(m.y(layer.y))}" text-anchor="{_ANCHOR[layer.anchor]}" '
                       f'font-size="{_f(st.font_size)}" font-family="sans-serif">{escape(layer.text)}</text>')
        label = getattr(layer, "label", "")
        if label:
            legend.append((label, layer.style))

    for i, (label, token) in enumerate(legend[:10]):
        y = m.top + 12 + 13 * i
        st = resolve_style(token)
        out.append(f'<line x1="{_f(m.right - 110)}" y1="{_f(y - 3)}" x2="{_f(m.right - 92)}" y2="{_f(y - 3)}" {_stroke_attrs(token)}/>')
        out.append(f'<text x="{_f(m.right - 88)}" y="{_f(y)}" font-size="9" font-family="sans-serif" '
                   f'fill="{_rgb(st.color)}">{escape(label)}</text>')
    out.append("</g>")
    return out


def figure_to_svg(fig: FigureDoc | FigureGrid) -> str:
    if isinstance(fig, FigureDoc):
        grid_rows, title, top = ((fig,),), "", 0
    else:
        grid_rows, title, top = fig.rows, fig.title, GRID_TITLE_H if fig.title else 0
    ncols = max(len(r) for r in grid_rows)
    width = PANEL_W * ncols
    height = PANEL_H * len(grid_rows) + top
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{_f(width / 2)}" y="19" text-anchor="middle" font-size="14" '
                   f'font-family="sans-serif" font-weight="bold">{escape(title)}</text>')
    for r, row in enumerate(grid_rows):
        for c, panel in enumerate(row):
            out += _panel(panel, c * PANEL_W, top + r * PANEL_H)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(fig: FigureDoc | FigureGrid, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(figure_to_svg(fig))
