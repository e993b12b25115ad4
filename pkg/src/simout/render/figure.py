"""Renderer-neutral figure model.

A :class:`FigureDoc` is a single set of axes holding an ordered list of
layers in data coordinates; a :class:`FigureGrid` arranges several of them
in rows. The SVG and PGF backends both consume this model, and the layer
data is exactly what the statistics functions returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

import numpy as np

from ..errors import SimoutError

__all__ = [
    "Polyline",
    "Band",
    "Scatter",
    "Step",
    "Text",
    "Layer",
    "FigureDoc",
    "FigureGrid",
    "Style",
    "PALETTE",
    "resolve_style",
    "nice_ticks",
    "tick_label",
]


def _floats(values) -> tuple[float, ...]:
    return tuple(float(v) for v in np.asarray(values, dtype=float).ravel())


@dataclass(frozen=True)
class Polyline:
    x: tuple[float, ...]
    y: tuple[float, ...]
    style: str = "series0"
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "x", _floats(self.x))
        object.__setattr__(self, "y", _floats(self.y))
        if len(self.x) != len(self.y):
            raise SimoutError("polyline x and y differ in length")


@dataclass(frozen=True)
class Band:
    """Filled region between ``lo`` and ``hi`` over ``x``."""

    x: tuple[float, ...]
    lo: tuple[float, ...]
    hi: tuple[float, ...]
    style: str = "band"
    label: str = ""

    def __post_init__(self):
        for name in ("x", "lo", "hi"):
            object.__setattr__(self, name, _floats(getattr(self, name)))
        if not len(self.x) == len(self.lo) == len(self.hi):
            raise SimoutError("band arrays differ in length")


@dataclass(frozen=True)
class Scatter:
    x: tuple[float, ...]
    y: tuple[float, ...]
    style: str = "marker"
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "x", _floats(self.x))
        object.__setattr__(self, "y", _floats(self.y))
        if len(self.x) != len(self.y):
            raise SimoutError("scatter x and y differ in length")


@dataclass(frozen=True)
class Step:
    """Piecewise-constant curve.

    With ``len(x) == len(y)`` it is a right-continuous step function (value
    ``y[i]`` from ``x[i]`` on, ``baseline`` before ``x[0]``), as for an
    empirical CDF. With ``len(x) == len(y) + 1`` the ``x`` are bin edges and
    ``y`` the bin heights, as for a histogram; ``fill`` draws solid bars.
    """

    x: tuple[float, ...]
    y: tuple[float, ...]
    style: str = "series0"
    label: str = ""
    fill: bool = False
    baseline: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x", _floats(self.x))
        object.__setattr__(self, "y", _floats(self.y))
        if len(self.x) not in (len(self.y), len(self.y) + 1) or not self.y:
            raise SimoutError("step layer needs len(x) == len(y) or len(y) + 1")

    @property
    def binned(self) -> bool:
        return len(self.x) == len(self.y) + 1

    def path(self, x_end: float) -> list[tuple[float, float]]:
        """Vertices of the outline; ``x_end`` closes an unbinned step."""
        pts: list[tuple[float, float]] = []
        if self.binned:
            pts.append((self.x[0], self.baseline))
            for i, h in enumerate(self.y):
                pts += [(self.x[i], h), (self.x[i + 1], h)]
            pts.append((self.x[-1], self.baseline))
            return pts
        prev = self.baseline
        for xi, yi in zip(self.x, self.y):
            pts += [(xi, prev), (xi, yi)]
            prev = yi
        pts.append((max(x_end, self.x[-1]), prev))
        return pts


@dataclass(frozen=True)
class Text:
    x: float
    y: float
    text: str
    style: str = "annotation"
    anchor: str = "left"

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if self.anchor not in ("left", "center", "right"):
            raise SimoutError(f"bad text anchor {self.anchor!r}")


Layer = Union[Polyline, Band, Scatter, Step, Text]


def layer_points(layer: Layer) -> Iterator[tuple[float, float]]:
    if isinstance(layer, (Polyline, Scatter)):
        yield from zip(layer.x, layer.y)
    elif isinstance(layer, Band):
        yield from zip(layer.x, layer.lo)
        yield from zip(layer.x, layer.hi)
    elif isinstance(layer, Step):
        yield from ((x, layer.baseline) for x in layer.x)
        yield from zip(layer.x, layer.y)
    elif isinstance(layer, Text):
        yield layer.x, layer.y


@dataclass(frozen=True)
class FigureDoc:
    """One set of axes.

    ``notice`` replaces the plot with a message (used when the statistic
    behind a panel could not be computed); such a figure has no layers.
    """

    title: str
    xlabel: str
    ylabel: str
    xrange: tuple[float, float]
    yrange: tuple[float, float]
    layers: tuple[Layer, ...] = ()
    notice: str = ""

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        object.__setattr__(self, "xrange", (float(self.xrange[0]), float(self.xrange[1])))
        object.__setattr__(self, "yrange", (float(self.yrange[0]), float(self.yrange[1])))
        (x0, x1), (y0, y1) = self.xrange, self.yrange
        if not all(math.isfinite(v) for v in (x0, x1, y0, y1)) or x0 >= x1 or y0 >= y1:
            raise SimoutError(f"invalid axis ranges {self.xrange}, {self.yrange}")
        for layer in self.layers:
            for x, y in layer_points(layer):
                if not (math.isfinite(x) and math.isfinite(y)):
                    raise SimoutError(f"non-finite coordinate in {type(layer).__name__} layer")
                if not (x0 <= x <= x1 and y0 <= y <= y1):
                    raise SimoutError(f"point ({x}, {y}) of {type(layer).__name__} layer outside axis ranges")

    @classmethod
    def build(
        cls,
        title: str,
        xlabel: str,
        ylabel: str,
        layers: Sequence[Layer],
        *,
        pad: float = 0.04,
        xrange: tuple[float, float] | None = None,
        yrange: tuple[float, float] | None = None,
    ) -> "FigureDoc":
        """Figure whose ranges are fitted to its layers (plus padding)."""
        pts = [p for layer in layers for p in layer_points(layer)]
        if xrange is None:
            xrange = _fit([p[0] for p in pts], pad)
        if yrange is None:
            yrange = _fit([p[1] for p in pts], pad)
        return cls(title, xlabel, ylabel, xrange, yrange, tuple(layers))

    @classmethod
    def message(cls, title: str, notice: str, xlabel: str = "", ylabel: str = "") -> "FigureDoc":
        return cls(title, xlabel, ylabel, (0.0, 1.0), (0.0, 1.0), (), notice)


def _fit(values: Sequence[float], pad: float) -> tuple[float, float]:
    if not values:
        return 0.0, 1.0
    lo, hi = min(values), max(values)
    if lo == hi:
        half = 0.5 if lo == 0 else 0.05 * abs(lo)
        return lo - half, hi + half
    margin = pad * (hi - lo)
    return lo - margin, hi + margin


@dataclass(frozen=True)
class FigureGrid:
    """Panels arranged in rows under a shared title."""

    title: str
    rows: tuple[tuple[FigureDoc, ...], ...] = field(default=())

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if not rows or any(not r for r in rows):
            raise SimoutError("figure grid needs at least one panel per row")
        object.__setattr__(self, "rows", rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), max(len(r) for r in self.rows)

    def panels(self) -> Iterator[FigureDoc]:
        for row in self.rows:
            yield from row


# -- styling ----------------------------------------------------------------

# 8 distinguishable colors; series beyond 8 reuse them with another dash.
PALETTE: tuple[tuple[int, int, int], ...] = (
    (31, 119, 180),
    (214, 39, 40),
    (44, 160, 44),
    (255, 127, 14),
    (148, 103, 189),
    (140, 86, 75),
    (227, 119, 194),
    (23, 190, 207),
)
DASHES = ("solid", "dashed", "dotted", "dashdot")


@dataclass(frozen=True)
class Style:
    color: tuple[int, int, int]
    dash: str = "solid"
    width: float = 1.0
    opacity: float = 1.0
    marker_size: float = 2.0
    font_size: float = 9.0


_NAMED = {
    "band": Style((150, 170, 200), opacity=0.45, width=0.0),
    "extreme": Style((40, 70, 130), width=0.8),
    "marker": Style((31, 119, 180), marker_size=1.8),
    "ref": Style((214, 39, 40), dash="dashed", width=0.9),
    "mean": Style((0, 0, 0), width=0.9),
    "ci": Style((90, 90, 90), dash="dotted", width=0.9),
    "hist": Style((120, 140, 170), width=0.6, opacity=0.85),
    "annotation": Style((0, 0, 0), font_size=8.0),
}


def resolve_style(token: str) -> Style:
    if token.startswith("series"):
        try:
            k = int(token[6:])
        except ValueError:
            k = 0
        return Style(PALETTE[k % len(PALETTE)], DASHES[(k // len(PALETTE)) % len(DASHES)])
    return _NAMED.get(token, Style((0, 0, 0)))


# -- ticks ------------------------------------------------------------------

def nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    """Round tick positions (1-2-5 steps) inside ``[lo, hi]``."""
    span = hi - lo
    if span <= 0 or not math.isfinite(span):
        return [lo]
    raw = span / max(target, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9)
    ticks = []
    k = first
    while k * step <= hi + 1e-9 * step:
        ticks.append(k * step)
        k += 1
    return [0.0 if abs(t) < 1e-12 * step else t for t in ticks]


def tick_label(value: float, ticks: Sequence[float]) -> str:
    step = ticks[1] - ticks[0] if len(ticks) > 1 else abs(value) or 1.0
    big = max(abs(t) for t in ticks) if ticks else abs(value)
    if big >= 1e5 or (big and big < 1e-3):
        return f"{value:.2g}".replace("e+0", "e").replace("e+", "e").replace("e-0", "e-")
    decimals = max(0, -math.floor(math.log10(step) + 1e-9))
    if step * 10**decimals % 1 > 1e-6:
        decimals += 1
    return f"{value:.{decimals}f}"
