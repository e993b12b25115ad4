"""Regenerate tests/data/swilk_golden.json from scipy.stats.shapiro.

scipy wraps the Fortran AS R94 routine, which makes it an independent
reference for simout's own implementation. Run once; the output is committed.
"""

import json
from pathlib import Path

import numpy as np
import scipy
from scipy import stats

SIZES = [5, 5, 5, 10, 10, 10, 20, 20, 20, 50, 50, 50, 100, 100, 100, 500, 500, 500, 10, 50]


def main():
    rng = np.random.default_rng(20240917)
    cases = []
    for i, n in enumerate(SIZES):
        # mostly normal, a few skewed/heavy-tailed samples so small p-values are covered
        if i % 4 == 3:
            x = rng.exponential(size=n)
        elif i % 7 == 6:
            x = rng.standard_t(3, size=n)
        else:
            x = rng.normal(10.0, 2.0, size=n)
        w, p = stats.shapiro(x)
        cases.append({"n": n, "sample": [float(v) for v in x], "W": float(w), "p": float(p)})
    out = {"reference": f"scipy.stats.shapiro (scipy {scipy.__version__})", "cases": cases}
    path = Path(__file__).resolve().parents[1] / "tests" / "data" / "swilk_golden.json"
    path.write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
