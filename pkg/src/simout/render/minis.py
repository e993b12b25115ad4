"""Tiny inline TikZ pictures for table cells: a histogram and a normal QQ plot.

Each snippet is a self-contained ``tikzpicture`` whose bounding box is
fixed at ``MINI_WIDTH`` x ``MINI_HEIGHT`` centimetres, so it sits on the
text baseline of a table row.
"""

from __future__ import annotations

import numpy as np

from ..stats.descriptive import as_sample, histogram, qq_points

__all__ = ["MINI_WIDTH", "MINI_HEIGHT", "mini_hist", "mini_qq", "sparkline"]

MINI_WIDTH = 1.2
MINI_HEIGHT = 0.4

_BARS = " ▁▂▃▄▅▆▇█"


def _num(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _open() -> list[str]:
    return [
        r"\begin{tikzpicture}[baseline=0pt]",
        rf"\useasboundingbox (0,0) rectangle ({_num(MINI_WIDTH)},{_num(MINI_HEIGHT)});",
    ]


def mini_hist(sample, nbins: int = 10) -> str:
    """Bars of :func:`~simout.stats.histogram`, scaled to the box."""
    edges, counts = histogram(sample, nbins)
    top = counts.max()
    lines = _open()
    span = edges[-1] - edges[0]
    for i, c in enumerate(counts):
        if c == 0:
            continue
        x0 = (edges[i] - edges[0]) / span * MINI_WIDTH
        x1 = (edges[i + 1] - edges[0]) / span * MINI_WIDTH
        h = c / top * MINI_HEIGHT
        lines.append(rf"\fill[black!55] ({_num(x0)},0) rectangle ({_num(x1)},{_num(h)});")
    lines.append(r"\end{tikzpicture}")
    return "".join(lines)


def mini_qq(sample) -> str:
    """Points of :func:`~simout.stats.qq_points` plus a quartile reference line."""
    x = as_sample(sample, min_size=2)
    theo, emp = qq_points(x)
    t0, t1 = theo[0], theo[-1]
    e0, e1 = float(emp[0]), float(emp[-1])
    q1, q3 = np.percentile(x, [25, 75])
    tq = 0.6744897501960817
    slope = (q3 - q1) / (2 * tq)
    ref_lo, ref_hi = q1 + slope * (t0 + tq), q1 + slope * (t1 + tq)
    lo, hi = min(e0, ref_lo), max(e1, ref_hi)
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5

    def px(t):
        return (t - t0) / (t1 - t0) * MINI_WIDTH

    def py(v):
        return (v - lo) / (hi - lo) * MINI_HEIGHT

    lines = _open()
    lines.append(rf"\draw[gray, very thin] ({_num(px(t0))},{_num(py(ref_lo))}) -- ({_num(px(t1))},{_num(py(ref_hi))});")
    for t, v in zip(theo, emp):
        lines.append(rf"\fill ({_num(px(t))},{_num(py(v))}) circle[radius=0.3pt];")
    lines.append(r"\end{tikzpicture}")
    return "".join(lines)


def sparkline(sample, nbins: int = 10) -> str:
    """Plain-text stand-in for :func:`mini_hist`."""
    _, counts = histogram(sample, nbins)
    top = counts.max()
    return "".join(_BARS[int(round(c / top * (len(_BARS) - 1)))] if c else _BARS[0] for c in counts)
