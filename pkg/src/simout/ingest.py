"""Reading delimited simulation output files.

A file holds one simulation run: one row per iteration, one column per
output. Fields are separated by a single delimiter character (comma,
semicolon or tab) or by runs of spaces. Header rows are not supported; use
``skip_rows`` to drop them.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyFile,
    EmptyRunSet,
    NonNumericToken,
    RaggedRows,
    SimoutError,
)

__all__ = [
    "DELIMITERS",
    "OutputMatrix",
    "RunSet",
    "infer_delimiter",
    "parse_output_text",
    "read_output_file",
    "load_run_set",
    "write_output_file",
]

# Candidates in inference order; " " means "runs of whitespace".
DELIMITERS: tuple[str, ...] = (",", ";", "\t", " ")

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


@dataclass(frozen=True)
class OutputMatrix:
    """Outputs of one simulation run.

    Attributes
    ----------
    values : ndarray, shape (n_iters, n_outputs)
        Row ``i`` is iteration ``i`` (0-based).
    output_names : tuple of str
        One name per column, ``out0, out1, ...`` when not supplied.
    source : str
        Path the matrix was read from (empty for in-memory matrices).
    """

    values: np.ndarray
    output_names: tuple[str, ...] = ()
    source: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise SimoutError(f"output matrix must be 2-D and non-empty, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise SimoutError("output matrix contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        names = tuple(self.output_names) or tuple(f"out{j}" for j in range(values.shape[1]))
        if len(names) != values.shape[1]:
            raise SimoutError(f"{len(names)} output names for {values.shape[1]} columns")
        object.__setattr__(self, "output_names", names)

    @property
    def n_iters(self) -> int:
        return self.values.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class RunSet:
    """Replications of one setup; all runs share the same shape."""

    runs: tuple[OutputMatrix, ...]
    tag: str = ""

    def __post_init__(self):
        runs = tuple(self.runs)
        if not runs:
            raise EmptyRunSet("run set has no runs", tag=self.tag)
        shape = runs[0].values.shape
        for i, run in enumerate(runs[1:], start=1):
            if run.values.shape != shape:
                raise DimensionMismatch(
                    f"run {i} has shape {run.values.shape}, run 0 has {shape}",
                    path=run.source or f"#{i}",
                )
        object.__setattr__(self, "runs", runs)

    def __len__(self) -> int:
        return len(self.runs)

    @property
    def n_iters(self) -> int:
        return self.runs[0].n_iters

    @property
    def n_outputs(self) -> int:
        return self.runs[0].n_outputs

    @property
    def output_names(self) -> tuple[str, ...]:
        return self.runs[0].output_names

    def column(self, output: int) -> np.ndarray:
        """Stack one output over all runs, shape (n_runs, n_iters)."""
        return np.stack([run.values[:, output] for run in self.runs])


def _split(line: str, delimiter: str) -> list[str]:
    if delimiter == " ":
        return line.split()
    return [tok.strip() for tok in line.split(delimiter)]


def infer_delimiter(lines: Sequence[str]) -> str:
    """Pick the delimiter for a file from its first two data lines.

    Candidates are tried in the order comma, semicolon, tab, whitespace runs;
    the first one that splits the first line into two or more fields and
    gives the same field count on the second line wins. If none is
    consistent, the first that splits the first line is used (so the row
    check reports the ragged row). Single-column files fall through to
    whitespace.
    """
    head = list(lines[:2])
    if not head:
        return " "
    counts = {d: [len(_split(ln, d)) for ln in head] for d in DELIMITERS}
    for delim in DELIMITERS:
        if counts[delim][0] >= 2 and len(set(counts[delim])) == 1:
            return delim
    for delim in DELIMITERS:
        if counts[delim][0] >= 2:
            return delim
    return " "


def _lines(text: str) -> list[str]:
    lines = [ln[:-1] if ln.endswith("\r") else ln for ln in text.split("\n")]
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def parse_output_text(
    text: str,
    delimiter: str | None = None,
    *,
    skip_rows: int = 0,
    source: str = "",
    output_names: Iterable[str] = (),
) -> OutputMatrix:
    """Parse delimited numeric text into an :class:`OutputMatrix`.

    Row numbers in errors are 1-based file line numbers.
    """
    all_lines = _lines(text)
    lines = all_lines[skip_rows:]
    if not lines:
        raise EmptyFile("no data rows", path=source)
    if delimiter is None:
        delimiter = infer_delimiter(lines)

    rows: list[list[float]] = []
    ncols = None
    for r, line in enumerate(lines, start=skip_rows + 1):
        tokens = _split(line, delimiter)
        if delimiter == " " and not tokens:
            tokens = [""]
        if ncols is None:
            ncols = len(tokens)
        elif len(tokens) != ncols:
            raise RaggedRows(f"row has {len(tokens)} columns, expected {ncols}", path=source, row=r)
        row = []
        for c, tok in enumerate(tokens, start=1):
            if not _NUMBER.fullmatch(tok):
                raise NonNumericToken(f"non-numeric token {tok!r}", path=source, row=r, column=c)
            value = float(tok)
            if not math.isfinite(value):
                raise NonNumericToken(f"token {tok!r} overflows to infinity", path=source, row=r, column=c)
            row.append(value)
        rows.append(row)

    return OutputMatrix(np.array(rows, dtype=float), tuple(output_names), source)


def read_output_file(
    path: str | os.PathLike,
    delimiter: str | None = None,
    *,
    skip_rows: int = 0,
    output_names: Iterable[str] = (),
) -> OutputMatrix:
    """Read one simulation output file.

    Parameters
    ----------
    path : path-like
        Text file, UTF-8 or ASCII, LF or CRLF line endings.
    delimiter : str, optional
        Field separator; inferred from the first two lines when omitted.
        ``" "`` selects whitespace-run splitting.
    skip_rows : int
        Leading lines to drop (e.g. a header).

    Raises
    ------
    FileNotFoundError
        If ``path`` does not exist.
    RaggedRows, NonNumericToken, EmptyFile
        On malformed content; the error context carries path, row and column.
    """
    path = os.fspath(path)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_output_text(text, delimiter, skip_rows=skip_rows, source=path, output_names=output_names)


def load_run_set(
    paths: Sequence[str | os.PathLike],
    tag: str = "",
    *,
    delimiter: str | None = None,
    skip_rows: int = 0,
    output_names: Iterable[str] = (),
) -> RunSet:
    """Read replications in the given order into a :class:`RunSet`."""
    if not paths:
        raise EmptyRunSet("no files given", tag=tag)
    output_names = tuple(output_names)
    runs = []
    for p in paths:
        try:
            runs.append(read_output_file(p, delimiter, skip_rows=skip_rows, output_names=output_names))
        except SimoutError as err:
            if "path" in err.context:
                raise
            raise err.with_context(path=os.fspath(p)) from err
    first = runs[0].values.shape
    for i, run in enumerate(runs[1:], start=1):
        if run.values.shape != first:
            raise DimensionMismatch(
                f"file {i} is {run.n_iters}x{run.n_outputs}, file 0 is {first[0]}x{first[1]}",
                path=run.source,
            )
    return RunSet(tuple(runs), tag)


def format_number(x: float) -> str:
    """Integral values print bare; anything else gets 17 significant digits,
    enough to round-trip every double."""
    if float(x).is_integer() and abs(x) < 1e15:
        return str(int(x)) if x != 0 or math.copysign(1.0, x) > 0 else "-0"
    return format(float(x), ".17g")


def write_output_file(path: str | os.PathLike, values, delimiter: str = ",") -> None:
    """Write a matrix in the input file format (LF endings, trailing newline)."""
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in values:
            fh.write(delimiter.join(format_number(v) for v in row))
            fh.write("\n")
