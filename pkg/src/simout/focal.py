"""Focal measures: scalar summaries extracted from each output of each run.

Two extractors are provided. ``SteadyStateSixpack`` yields six summaries per
output (max, argmax, min, argmin, steady-state mean and standard deviation),
suited to outputs with a transient stage followed by a steady state.
``AtIterations`` yields the output value at user-chosen iterations.

Iterations are 0-based everywhere, including the reported argmax/argmin.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import InvalidExtractor, IterOutOfRange, SimoutError, SsIdxOutOfRange
from .ingest import RunSet

__all__ = [
    "SIXPACK_NAMES",
    "ExtractorKind",
    "ExtractorSpec",
    "FMMatrix",
    "extract_sixpack",
    "extract_at_iters",
    "stats_get",
    "stats_gather",
]

SIXPACK_NAMES = ("max", "argmax", "min", "argmin", "ss_mean", "ss_std")


class ExtractorKind(str, Enum):
    SteadyStateSixpack = "sixpack"
    AtIterations = "iters"


@dataclass(frozen=True)
class ExtractorSpec:
    """Which summaries to extract.

    Use :meth:`sixpack` or :meth:`at_iterations` rather than building one
    by hand.
    """

    kind: ExtractorKind
    ss_idx: int = 0
    iters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", ExtractorKind(self.kind))
        object.__setattr__(self, "iters", tuple(int(i) for i in self.iters))
        if self.kind is ExtractorKind.SteadyStateSixpack:
            if int(self.ss_idx) != self.ss_idx or self.ss_idx < 0:
                raise SsIdxOutOfRange(f"ss_idx must be a non-negative integer, got {self.ss_idx}")
        else:
            if not self.iters:
                raise InvalidExtractor("iteration list is empty")
            if any(i < 0 for i in self.iters):
                raise IterOutOfRange(f"negative iteration index in {list(self.iters)}")
            if any(b <= a for a, b in zip(self.iters, self.iters[1:])):
                raise InvalidExtractor(f"iterations must be strictly increasing: {list(self.iters)}")

    @classmethod
    def sixpack(cls, ss_idx: int) -> "ExtractorSpec":
        return cls(ExtractorKind.SteadyStateSixpack, ss_idx=ss_idx)

    @classmethod
    def at_iterations(cls, iters: Sequence[int]) -> "ExtractorSpec":
        return cls(ExtractorKind.AtIterations, iters=tuple(iters))

    @property
    def summary_names(self) -> tuple[str, ...]:
        if self.kind is ExtractorKind.SteadyStateSixpack:
            return SIXPACK_NAMES
        return tuple(f"it{i}" for i in self.iters)

    def validate_for(self, n_iters: int) -> None:
        if self.kind is ExtractorKind.SteadyStateSixpack:
            if self.ss_idx > n_iters - 1:
                raise SsIdxOutOfRange(f"ss_idx {self.ss_idx} >= series length {n_iters}")
        else:
            bad = [i for i in self.iters if i >= n_iters]
            if bad:
                raise IterOutOfRange(f"iteration {bad[0]} >= series length {n_iters}", index=bad[0])


def extract_sixpack(series, ss_idx: int) -> tuple[float, int, float, int, float, float]:
    """Max, argmax, min, argmin, steady-state mean and std of one series.

    Extremum positions are the first occurrence. The steady-state slice is
    ``series[ss_idx:]``; its standard deviation uses the n-1 denominator and
    is 0 for a single-element slice.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise SimoutError("series must be a non-empty vector")
    if ss_idx < 0 or ss_idx > x.size - 1:
        raise SsIdxOutOfRange(f"ss_idx {ss_idx} outside [0, {x.size - 1}]")
    imax = int(np.argmax(x))
    imin = int(np.argmin(x))
    ss = x[ss_idx:]
    lo, hi = float(ss.min()), float(ss.max())
    if lo == hi:
        ss_mean, ss_std = lo, 0.0
    else:
        # Clamp guards the min <= mean <= max contract against rounding.
        ss_mean = min(max(float(np.mean(ss)), lo), hi)
        # Scale deviations by their largest magnitude so squaring cannot
        # underflow to zero (or overflow) for a non-constant tail.
        dev = ss - ss_mean
        scale = float(np.max(np.abs(dev)))
        ss_std = scale * float(np.sqrt(np.sum((dev / scale) ** 2) / (ss.size - 1)))
    return float(x[imax]), imax, float(x[imin]), imin, ss_mean, ss_std


def extract_at_iters(series, iters: Sequence[int]) -> tuple[float, ...]:
    x = np.asarray(series, dtype=float)
    for i in iters:
        if i < 0 or i >= x.size:
            raise IterOutOfRange(f"iteration {i} outside [0, {x.size - 1}]", index=i)
    return tuple(float(x[i]) for i in iters)


def stats_get(series, spec: ExtractorSpec) -> tuple[float, ...]:
    """Apply an extractor to one series."""
    if spec.kind is ExtractorKind.SteadyStateSixpack:
        return tuple(float(v) for v in extract_sixpack(series, spec.ss_idx))
    return extract_at_iters(series, spec.iters)


def fm_label(name: tuple[str, str]) -> str:
    return f"{name[0]}:{name[1]}"


@dataclass(frozen=True)
class FMMatrix:
    """n runs by m focal measures, columns ordered output-major.

    ``fm_names[j]`` is the ``(output name, summary name)`` pair of column j.
    """

    data: np.ndarray
    fm_names: tuple[tuple[str, str], ...]
    tag: str = ""
    source_files: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        data = np.array(self.data, dtype=float, copy=True)
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise SimoutError(f"FM matrix must be 2-D and non-empty, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise SimoutError("FM matrix contains non-finite values")
        names = tuple((str(o), str(s)) for o, s in self.fm_names)
        if len(names) != data.shape[1]:
            raise SimoutError(f"{len(names)} FM names for {data.shape[1]} columns")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "fm_names", names)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def m(self) -> int:
        return self.data.shape[1]

    @property
    def labels(self) -> list[str]:
        return [fm_label(nm) for nm in self.fm_names]

    def column(self, j: int) -> np.ndarray:
        return self.data[:, j]

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "fm_names": [list(nm) for nm in self.fm_names],
            "data": self.data.tolist(),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "FMMatrix":
        return cls(np.asarray(d["data"], dtype=float), tuple(tuple(nm) for nm in d["fm_names"]), d.get("tag", ""))

    @classmethod
    def from_json(cls, text: str) -> "FMMatrix":
        return cls.from_dict(json.loads(text))

    def to_delimited(self, delimiter: str = ",") -> str:
        """Header row of FM labels followed by one line per run."""
        lines = [delimiter.join(self.labels)]
        lines += [delimiter.join(format(float(v), ".17g") for v in row) for row in self.data]
        return "\n".join(lines) + "\n"


def stats_gather(
    rs: RunSet,
    spec: ExtractorSpec,
    outputs: Sequence[int] | None = None,
    tag: str | None = None,
) -> FMMatrix:
    """Extract focal measures from every run of a replication set.

    Row i holds the summaries of run i, output-major: all summaries of the
    first selected output, then those of the next, and so on.
    """
    outputs = list(range(rs.n_outputs)) if outputs is None else [int(o) for o in outputs]
    for o in outputs:
        if not 0 <= o < rs.n_outputs:
            raise IndexError(f"output {o} out of range for {rs.n_outputs} outputs")
    spec.validate_for(rs.n_iters)

    rows = []
    for i, run in enumerate(rs.runs):
        row: list[float] = []
        for o in outputs:
            try:
                row.extend(stats_get(run.values[:, o], spec))
            except SimoutError as err:
                raise err.with_context(run=i, output=o) from err
        rows.append(row)

    names = tuple((rs.output_names[o], s) for o in outputs for s in spec.summary_names)
    return FMMatrix(
        np.array(rows, dtype=float),
        names,
        rs.tag if tag is None else tag,
        tuple(run.source for run in rs.runs),
    )
