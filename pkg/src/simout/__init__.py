"""Statistical analysis of stochastic simulation output.

Load replications (:mod:`simout.ingest`), reduce each run to focal measures
(:mod:`simout.focal`), summarize and test them (:mod:`simout.stats`,
:mod:`simout.compare`) and render figures and tables (:mod:`simout.render`).
"""

__version__ = "0.1.0"

from .compare import (  # noqa: E402
    CompareResult,
    PairwiseTable,
    TestKind,
    TestSpec,
    TVariant,
    anova1,
    kruskal_wallis,
    mann_whitney,
    stats_compare,
    stats_compare_pw,
    t_test2,
)
from .errors import SimoutError  # noqa: E402
from .focal import ExtractorSpec, FMMatrix, extract_sixpack, stats_gather, stats_get  # noqa: E402
from .ingest import OutputMatrix, RunSet, load_run_set, read_output_file, write_output_file  # noqa: E402
from .stats import SummaryStats, stats_analyze, summarize  # noqa: E402

__all__ = [
    "CompareResult", "ExtractorSpec", "FMMatrix", "OutputMatrix", "PairwiseTable", "RunSet",
    "SimoutError", "SummaryStats", "TVariant", "TestKind", "TestSpec",
    "anova1", "extract_sixpack", "kruskal_wallis", "load_run_set", "mann_whitney",
    "read_output_file", "stats_analyze", "stats_compare", "stats_compare_pw", "stats_gather",
    "stats_get", "summarize", "t_test2", "write_output_file",
]
