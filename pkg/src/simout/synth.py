"""Synthetic simulation outputs for fixtures and demos.

Two toy models:

``logistic``
    One output, noisy logistic growth toward a carrying capacity.
``predprey``
    Two outputs (prey, predator) from a discrete stochastic Lotka-Volterra
    map with logistic prey growth: a damped oscillating transient that
    settles into a noisy quasi-steady state. Populations are clamped at 1.

Randomness comes from numpy's PCG64 bit generator. Run ``i`` uses the
``i``-th child of ``SeedSequence(seed).spawn(runs)``, so every run is
reproducible on its own and the files depend only on (model, params, seed,
runs, iters). This generator identity is written to the ``synth.json``
sidecar next to the run files.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .ingest import write_output_file

__all__ = ["MODELS", "SynthSpec", "simulate_run", "generate", "write_synth"]

GENERATOR = "numpy.random.PCG64 seeded by SeedSequence(seed).spawn(runs)[i]"

# default parameters per model
MODELS: dict[str, dict[str, float]] = {
    "logistic": {"r": 0.08, "K": 100.0, "x0": 5.0, "noise": 0.03},
    "predprey": {
        "r": 0.2,  # prey growth rate
        "K": 1000.0,  # prey carrying capacity
        "a": 0.001,  # predation rate
        "b": 0.5,  # conversion efficiency
        "d": 0.1,  # predator death rate
        "prey0": 500.0,
        "pred0": 50.0,
        "noise": 0.05,
    },
}
OUTPUT_NAMES = {"logistic": ("pop",), "predprey": ("prey", "predator")}


@dataclass(frozen=True)
class SynthSpec:
    model: str
    runs: int
    iters: int
    seed: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {sorted(MODELS)}")
        if self.runs < 1 or self.iters < 1:
            raise ConfigError("runs and iters must be positive")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        unknown = set(self.params) - set(MODELS[self.model])
        if unknown:
            raise ConfigError(f"unknown parameter(s) for {self.model}: {sorted(unknown)}")

    @property
    def resolved_params(self) -> dict[str, float]:
        p = dict(MODELS[self.model])
        p.update({k: float(v) for k, v in self.params.items()})
        return p


def _logistic(rng: np.random.Generator, iters: int, p: dict) -> np.ndarray:
    x = np.empty(iters)
    x[0] = p["x0"]
    eps = rng.normal(0.0, p["noise"], iters)
    for t in range(1, iters):
        prev = x[t - 1]
        x[t] = max(prev * (1.0 + p["r"] * (1.0 - prev / p["K"])) * np.exp(eps[t]), 1.0)
    return x[:, None]


def _predprey(rng: np.random.Generator, iters: int, p: dict) -> np.ndarray:
    out = np.empty((iters, 2))
    prey, pred = p["prey0"], p["pred0"]
    eps = rng.normal(0.0, p["noise"], (iters, 2))
    out[0] = prey, pred
    for t in range(1, iters):
        eaten = p["a"] * prey * pred
        new_prey = prey + p["r"] * prey * (1.0 - prey / p["K"]) - eaten
        new_pred = pred + p["b"] * eaten - p["d"] * pred
        prey = max(new_prey * np.exp(eps[t, 0]), 1.0)
        pred = max(new_pred * np.exp(eps[t, 1]), 1.0)
        out[t] = prey, pred
    return out


_SIM = {"logistic": _logistic, "predprey": _predprey}


def simulate_run(spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    """One run as an (iters, n_outputs) array."""
    return _SIM[spec.model](rng, spec.iters, spec.resolved_params)


def generate(spec: SynthSpec) -> list[np.ndarray]:
    children = np.random.SeedSequence(spec.seed).spawn(spec.runs)
    return [simulate_run(spec, np.random.Generator(np.random.PCG64(c))) for c in children]


def write_synth(spec: SynthSpec, out_dir: str | os.PathLike, prefix: str = "run") -> list[Path]:
    """Write one ``<prefix>NNN.csv`` per run plus ``synth.json``; returns the run files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    width = max(3, len(str(spec.runs - 1)))
    paths = []
    for i, values in enumerate(generate(spec)):
        path = out / f"{prefix}{i:0{width}d}.csv"
        write_output_file(path, values, ",")
        paths.append(path)
    meta = {
        "generator": GENERATOR,
        "model": spec.model,
        "outputs": list(OUTPUT_NAMES[spec.model]),
        "params": spec.resolved_params,
        "runs": spec.runs,
        "iters": spec.iters,
        "seed": spec.seed,
        "files": [p.name for p in paths],
        "spec": asdict(spec),
    }
    with open(out / "synth.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return paths
