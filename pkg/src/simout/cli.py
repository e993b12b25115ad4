"""Command-line interface: ``simout synth | plot | analyze | compare``.

Exit codes: 0 success (for ``compare``: no failed test), 1 usage or
configuration error, 2 data error, 3 ``compare`` found at least one failed
test.

Settings come from an optional JSON or TOML config file, overridden by
flags. A config looks like::

    alpha = 0.05
    outputs = ["prey", "predator"]
    [extractor]
    ss_idx = 50
    [tests]
    kinds = "p"
    variant = "pooled"
    [render]
    out = "results"
    figures = ["svg"]
    [[setups]]
    tag = "A"
    files = "runs/A/*.csv"
"""

from __future__ import annotations

import argparse
import glob
import json
import os
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__
from .compare import TestKind, TestSpec, TVariant, stats_compare, stats_compare_pw
from .errors import ConfigError, SimoutError
from .focal import ExtractorSpec, FMMatrix, stats_gather
from .ingest import OutputMatrix, RunSet, load_run_set
from .render import (
    PlotMode,
    dist_plot_per_fm,
    dist_table_per_fm,
    emit_pgf,
    emit_svg,
    emit_table,
    merge_partials,
    output_plot,
    render_table,
    stats_compare_plot,
    stats_compare_table,
    stats_table_per_setup,
)
from .stats import stats_analyze
from .synth import MODELS, SynthSpec, write_synth

try:  # Python 3.11+
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_MISALIGNED = 0, 1, 2, 3
FIGURE_FORMATS = ("svg", "pgf")


# -- configuration ----------------------------------------------------------

@dataclass
class Setup:
    tag: str
    files: list[str]


@dataclass
class RunConfig:
    setups: list[Setup] = field(default_factory=list)
    extractor: ExtractorSpec = field(default_factory=lambda: ExtractorSpec.sixpack(0))
    outputs: list[str] | None = None
    output_names: list[str] | None = None
    alpha: float = 0.05
    tests: TestSpec = field(default_factory=TestSpec)
    out: str | None = None
    figures: list[str] = field(default_factory=list)
    skip_rows: int = 0
    delimiter: str | None = None


def load_config_file(path: str) -> dict:
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as err:
        raise ConfigError(f"cannot read config: {err}", path=path) from err
    try:
        if p.suffix.lower() == ".toml":
            return tomllib.loads(raw.decode("utf-8"))
        return json.loads(raw)
    except (ValueError, tomllib.TOMLDecodeError) as err:
        raise ConfigError(f"malformed config: {err}", path=path) from err


def _expand(pattern: str | Sequence[str], base: Path) -> list[str]:
    """Sorted files matching a glob (or list of globs) relative to ``base``."""
    patterns = [pattern] if isinstance(pattern, str) else list(pattern)
    files = []
    for pat in patterns:
        full = pat if os.path.isabs(pat) else str(base / pat)
        hits = sorted(glob.glob(full))
        if not hits and not glob.has_magic(full):
            hits = [full]  # a plain path; a missing file surfaces as a data error
        files += hits
    return files


def _parse_setup_flag(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise ConfigError(f"--setup expects TAG=GLOB, got {text!r}")
    tag, pattern = text.split("=", 1)
    if not tag:
        raise ConfigError(f"--setup has an empty tag: {text!r}")
    return tag, pattern


def _split_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _parse_tests(value) -> TestKind | tuple[TestKind, ...]:
    items = _split_list(value) if isinstance(value, str) else list(value)
    try:
        kinds = tuple(TestKind(k) for k in items)
    except ValueError as err:
        raise ConfigError(f"test kinds must be 'p' or 'np', got {value!r}") from err
    if not kinds:
        raise ConfigError("empty test list")
    return kinds[0] if len(kinds) == 1 else kinds


def build_config(args: argparse.Namespace) -> RunConfig:
    raw: dict = load_config_file(args.config) if getattr(args, "config", None) else {}
    base = Path(args.config).parent if getattr(args, "config", None) else Path(".")
    cfg = RunConfig()

    for item in raw.get("setups", []):
        if "tag" not in item or "files" not in item:
            raise ConfigError("each setup needs 'tag' and 'files'")
        cfg.setups.append(Setup(str(item["tag"]), _expand(item["files"], base)))
    flag_setups = [_parse_setup_flag(s) for s in (getattr(args, "setup", None) or [])]
    if flag_setups:
        cfg.setups = [Setup(tag, _expand(pat, Path("."))) for tag, pat in flag_setups]
    if getattr(args, "files", None):
        cfg.setups = [Setup("setup", sorted(args.files))]
    tags = [s.tag for s in cfg.setups]
    if len(set(tags)) != len(tags):
        raise ConfigError(f"duplicate setup tags: {tags}")

    ext = raw.get("extractor", {})
    ss_idx = args.ss_idx if getattr(args, "ss_idx", None) is not None else ext.get("ss_idx", 0)
    iters = getattr(args, "iters", None)
    try:
        iters = [int(i) for i in _split_list(iters)] if iters else ext.get("iters")
    except ValueError as err:
        raise ConfigError(f"--iters expects comma-separated integers, got {iters!r}") from err
    try:
        cfg.extractor = ExtractorSpec.at_iterations(iters) if iters else ExtractorSpec.sixpack(int(ss_idx))
    except SimoutError as err:
        raise ConfigError(str(err)) from err

    outputs = getattr(args, "outputs", None)
    cfg.outputs = _split_list(outputs) if outputs else raw.get("outputs")
    names = getattr(args, "output_names", None)
    cfg.output_names = _split_list(names) if names else raw.get("output_names")

    alpha = getattr(args, "alpha", None)
    cfg.alpha = float(alpha if alpha is not None else raw.get("alpha", 0.05))
    traw = raw.get("tests", {})
    kinds = getattr(args, "tests", None) or traw.get("kinds", "p")
    variant = getattr(args, "variant", None) or traw.get("variant", "pooled")
    try:
        cfg.tests = TestSpec(_parse_tests(kinds), TVariant(variant), cfg.alpha)
    except (ValueError, SimoutError) as err:
        raise ConfigError(str(err)) from err

    rraw = raw.get("render", {})
    cfg.out = getattr(args, "out", None) or rraw.get("out")
    figs = getattr(args, "figures", None)
    cfg.figures = _split_list(figs) if figs is not None else list(rraw.get("figures", []))
    bad = [f for f in cfg.figures if f not in FIGURE_FORMATS]
    if bad:
        raise ConfigError(f"unknown figure format(s) {bad}; choose from {FIGURE_FORMATS}")
    skip = getattr(args, "skip_rows", None)
    cfg.skip_rows = int(skip if skip is not None else raw.get("skip_rows", 0))
    cfg.delimiter = getattr(args, "delimiter", None) or raw.get("delimiter")
    return cfg


# -- helpers ----------------------------------------------------------------

def _sidecar_names(files: Sequence[str]) -> tuple[str, ...]:
    """Output names recorded by ``simout synth`` next to the first file."""
    if not files:
        return ()
    meta = Path(files[0]).parent / "synth.json"
    if meta.is_file():
        try:
            return tuple(json.loads(meta.read_text(encoding="utf-8")).get("outputs", ()))
        except ValueError:
            return ()
    return ()


def _load(cfg: RunConfig, setup: Setup) -> RunSet:
    names = tuple(cfg.output_names) if cfg.output_names else _sidecar_names(setup.files)
    rs = load_run_set(setup.files, setup.tag, delimiter=cfg.delimiter, skip_rows=cfg.skip_rows)
    if names and len(names) == rs.n_outputs:
        rs = RunSet(tuple(OutputMatrix(r.values, names, r.source) for r in rs.runs), rs.tag)
    return rs


def _output_indices(cfg: RunConfig, rs: RunSet) -> list[int]:
    if not cfg.outputs:
        return list(range(rs.n_outputs))
    idx = []
    for o in cfg.outputs:
        if str(o) in rs.output_names:
            idx.append(rs.output_names.index(str(o)))
        elif str(o).lstrip("-").isdigit():
            idx.append(int(o))
        else:
            raise ConfigError(f"unknown output {o!r}; outputs are {list(rs.output_names)}")
    return idx


def _gather_all(cfg: RunConfig) -> list[tuple[RunSet, FMMatrix]]:
    if not cfg.setups:
        raise ConfigError("no setups given (use --setup TAG=GLOB, positional files or a config file)")
    out = []
    for setup in cfg.setups:
        rs = _load(cfg, setup)
        try:
            fm = stats_gather(rs, cfg.extractor, _output_indices(cfg, rs), setup.tag)
        except IndexError as err:
            raise ConfigError(str(err)) from err
        out.append((rs, fm))
    return out


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", text).strip("-") or "x"


def _out_dir(cfg: RunConfig) -> Path:
    d = Path(cfg.out or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


def _emit_figure(fig, stem: Path, formats: Sequence[str]) -> list[Path]:
    written = []
    for fmt in formats:
        path = stem.with_name(stem.name + "." + fmt)
        (emit_svg if fmt == "svg" else emit_pgf)(fig, path)
        written.append(path)
    return written


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)


def _color_enabled(stream) -> bool:
    if os.environ.get("SIMOUT_NO_COLOR") or os.environ.get("NO_COLOR"):
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _error(msg: str) -> None:
    prefix = "\033[31merror:\033[0m" if _color_enabled(sys.stderr) else "error:"
    print(f"{prefix} {msg}", file=sys.stderr)


# -- commands ---------------------------------------------------------------

def cmd_synth(args) -> int:
    params = {}
    for item in args.param or []:
        if "=" not in item:
            raise ConfigError(f"--param expects NAME=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        try:
            params[k] = float(v)
        except ValueError as err:
            raise ConfigError(f"--param {k} needs a number, got {v!r}") from err
    spec = SynthSpec(args.model, args.runs, args.iters_count, args.seed, params)
    paths = write_synth(spec, args.out, args.prefix)
    if args.format == "json":
        print(_dump({"files": [str(p) for p in paths], "model": spec.model, "seed": spec.seed}))
    else:
        print(f"wrote {len(paths)} files to {args.out}")
    return EXIT_OK


def cmd_plot(args) -> int:
    cfg = build_config(args)
    if not cfg.setups:
        raise ConfigError("no input files given")
    formats = cfg.figures or ["svg"]
    out = _out_dir(cfg)
    written = []
    for setup in cfg.setups:
        rs = _load(cfg, setup)
        selected = RunConfig(outputs=[args.output]) if args.output is not None else cfg
        outputs = _output_indices(selected, rs)
        runs = [int(r) for r in _split_list(args.runs)] if args.runs else None
        for o in outputs:
            try:
                fig = output_plot(rs, o, args.mode, args.w, runs, average_runs=args.average_runs)
            except IndexError as err:
                raise ConfigError(str(err)) from err
            stem = out / _slug(f"{setup.tag}_{rs.output_names[o]}_{PlotMode(args.mode).value}")
            written += _emit_figure(fig, stem, formats)
    if args.format == "json":
        print(_dump({"files": [str(p) for p in written]}))
    else:
        for p in written:
            print(p)
    return EXIT_OK


def cmd_analyze(args) -> int:
    cfg = build_config(args)
    gathered = _gather_all(cfg)
    report = {"alpha": cfg.alpha, "extractor": cfg.extractor.kind.value, "setups": []}
    all_stats = []
    for rs, fm in gathered:
        stats = stats_analyze(fm, cfg.alpha)
        all_stats.append(stats)
        report["setups"].append({
            "tag": fm.tag,
            "n_runs": fm.n,
            "fm_names": fm.labels,
            "stats": [s.to_dict() for s in stats],
        })

    files = []
    if args.latex or cfg.figures or cfg.out:
        out = _out_dir(cfg)
        for (rs, fm), stats in zip(gathered, all_stats):
            (out / _slug(f"fm_{fm.tag}.json")).write_text(fm.to_json(indent=2) + "\n", encoding="utf-8")
            files.append(out / _slug(f"fm_{fm.tag}.json"))
        if args.latex:
            for (rs, fm), stats in zip(gathered, all_stats):
                path = out / _slug(f"stats_{fm.tag}.tex")
                emit_table(stats_table_per_setup(stats, "latex", title=f"Statistics for setup {fm.tag}"), path)
                files.append(path)
            labels = gathered[0][1].labels
            partials = []
            for j, label in enumerate(labels):
                samples = [(fm.tag, fm.column(j)) for _, fm in gathered]
                partials.append(dist_table_per_fm(samples, label, cfg.alpha))
            path = out / "dist_per_fm.tex"
            emit_table(merge_partials(*partials), path)
            files.append(path)
        if cfg.figures:
            fm0 = gathered[0][1]
            for j, label in enumerate(fm0.labels):
                grid = dist_plot_per_fm([(fm.tag, fm.column(j)) for _, fm in gathered], cfg.alpha, label)
                files += _emit_figure(grid, out / _slug(f"dist_{label}"), cfg.figures)
    report["files"] = [str(p) for p in files]

    if args.format == "json":
        print(_dump(report))
    else:
        fmt = "latex" if args.format == "latex" else "text"
        for (rs, fm), stats in zip(gathered, all_stats):
            print(render_table(stats_table_per_setup(stats, fmt, title=f"setup {fm.tag} ({fm.n} runs)"), fmt))
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = build_config(args)
    gathered = _gather_all(cfg)
    if len(gathered) < 2:
        raise ConfigError("compare needs at least two setups")
    fms = [fm for _, fm in gathered]
    result = stats_compare(fms, cfg.tests)
    report = {"compare": result.to_dict(), "files": []}
    pw = stats_compare_pw(fms, cfg.tests) if args.pairwise else None
    if pw is not None:
        report["pairwise"] = pw.to_dict()

    files = []
    if args.latex or cfg.figures or cfg.out or pw is not None:
        out = _out_dir(cfg)
        if pw is not None:
            path = out / "pairwise.txt"
            path.write_text(pw.to_text(), encoding="utf-8")
            files.append(path)
        if args.latex:
            path = out / "compare.tex"
            emit_table(stats_compare_table([result], title="Comparison p-values"), path)
            files.append(path)
            partials = [dist_table_per_fm([(fm.tag, fm.column(j)) for fm in fms], label, cfg.alpha)
                        for j, label in enumerate(fms[0].labels)]
            path = out / "compare_dist_per_fm.tex"
            emit_table(merge_partials(*partials), path)
            files.append(path)
        for j, label in enumerate(fms[0].labels if cfg.figures else []):
            pdf, cdf = stats_compare_plot([(fm.tag, fm.column(j)) for fm in fms], label)
            files += _emit_figure(pdf, out / _slug(f"compare_{label}_pdf"), cfg.figures)
            files += _emit_figure(cdf, out / _slug(f"compare_{label}_cdf"), cfg.figures)
    report["files"] = [str(p) for p in files]

    if args.format == "json":
        print(_dump(report))
    else:
        fmt = "latex" if args.format == "latex" else "text"
        print(render_table(stats_compare_table([result], fmt=fmt), fmt), end="")
        if pw is not None:
            print()
            print(pw.to_text(), end="")
    return EXIT_MISALIGNED if result.n_failed else EXIT_OK


# -- parser -----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; 2 is reserved for data errors here."""

    def error(self, message):
        self.print_usage(sys.stderr)
        _error(message)
        raise SystemExit(EXIT_USAGE)


def _add_common(p: argparse.ArgumentParser, *, analysis: bool = True) -> None:
    p.add_argument("files", nargs="*", help="output files of one setup (alternative to --setup)")
    p.add_argument("--config", help="JSON or TOML config file")
    p.add_argument("--setup", action="append", metavar="TAG=GLOB", help="a setup and its files (repeatable)")
    p.add_argument("--skip-rows", type=int, dest="skip_rows", help="header lines to skip in each file")
    p.add_argument("--delimiter", help="field delimiter (default: inferred)")
    p.add_argument("--output-names", dest="output_names", help="comma-separated names of the file columns")
    p.add_argument("--out", help="directory for written artifacts")
    p.add_argument("--figures", help="comma-separated figure formats: svg,pgf")
    p.add_argument("--format", choices=("json", "text", "latex"), default="json")
    if analysis:
        p.add_argument("--ss-idx", type=int, dest="ss_idx", help="steady-state truncation index (0-based)")
        p.add_argument("--iters", help="comma-separated iteration indices (instead of the six summaries)")
        p.add_argument("--outputs", help="comma-separated output names or indices to analyze")
        p.add_argument("--alpha", type=float, help="significance level (default 0.05)")
        p.add_argument("--latex", action="store_true", help="also write LaTeX tables to --out")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="simout", description="Statistical analysis of stochastic simulation output.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="generate synthetic run files")
    p.add_argument("--model", choices=sorted(MODELS), default="predprey")
    p.add_argument("--runs", type=int, default=30)
    p.add_argument("--iters", type=int, default=100, dest="iters_count", help="iterations per run")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="override a model parameter")
    p.add_argument("--prefix", default="run")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("plot", help="plot outputs over iterations")
    _add_common(p, analysis=False)
    p.add_argument("--output", help="output name or index (default: all)")
    p.add_argument("--mode", choices=[m.value for m in PlotMode], default="superimposed")
    p.add_argument("--w", type=int, default=0, help="moving-average half window")
    p.add_argument("--runs", help="comma-separated run indices to draw")
    p.add_argument("--average-runs", action="store_true", dest="average_runs",
                   help="movavg: smooth the mean over runs instead of each run")
    p.set_defaults(func=cmd_plot, format="text")

    p = sub.add_parser("analyze", help="summary statistics of focal measures")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", help="compare focal measures across setups")
    _add_common(p)
    p.add_argument("--tests", help="'p', 'np', or a comma-separated list, one per focal measure")
    p.add_argument("--variant", choices=[v.value for v in TVariant])
    p.add_argument("--pairwise", action="store_true", help="also count failed tests for every pair")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        _error(str(err))
        return EXIT_USAGE
    except (SimoutError, OSError) as err:
        _error(str(err))
        return EXIT_DATA


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
