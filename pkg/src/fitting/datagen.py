# src/fitting/datagen.py
"""
Synthetic instances x = f*(p) + noise, with f* the six-step reference curve
on [0, 60). Draws come from numpy's PCG64 bit generator so a (seed, config)
pair yields the same dataset on every platform.
"""
import math

import numpy as np

from src.core.curve import StepCurve
from src.core.dataset import Dataset, load_dataset
from src.core.logger import log_event
from src.core.models import GenConfig

DOMAIN = (0.0, 60.0)

TRUE_BREAKPOINTS = (0.0, 12.0, 30.0, 35.0, 45.0, 50.0, 60.0)
TRUE_VALUES = (100.0, 115.0, 102.0, 93.0, 72.0, 50.0)

# Bench defaults
NOISE_SWEEP = tuple(float(s) for s in range(11))
SIZE_SWEEP = (100, 200, 500, 1000, 2000)
K_SWEEP = tuple(range(2, 11))


def true_curve() -> StepCurve:
    """Reference relationship; note it is not monotone (it rises after the first step)."""
    return StepCurve(TRUE_BREAKPOINTS, TRUE_VALUES)


def _sample_p(cfg: GenConfig, rng: np.random.Generator) -> np.ndarray:
    lo, hi = DOMAIN
    if cfg.sampling == "grid":
        return lo + (hi - lo) * np.arange(cfg.I, dtype=np.float64) / cfg.I
    p = np.sort(rng.uniform(lo, hi, cfg.I))
    # Nudge ties upward by one ulp at a time so every coordinate is distinct
    for idx in range(1, len(p)):
        if p[idx] <= p[idx - 1]:
            p[idx] = math.nextafter(p[idx - 1], math.inf)
    return p


def generate(cfg: GenConfig) -> Dataset:
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    p = _sample_p(cfg, rng)
    curve = true_curve()
    clean = np.array([curve.evaluate(v) for v in p], dtype=np.float64)
    if cfg.sigma > 0:
        x = clean + rng.normal(0.0, cfg.sigma, cfg.I)
    else:
        x = clean
    data = load_dataset(zip(p.tolist(), x.tolist()))
    log_event(
        data.short_id(), "DATAGEN",
        f"Generated {cfg.I} observations ({cfg.sampling}, sigma={cfg.sigma}, seed={cfg.seed})",
        "DEBUG"
    )
    return data
