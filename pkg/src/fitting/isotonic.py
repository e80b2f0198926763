# src/fitting/isotonic.py
"""
Non-increasing least-squares regression by pool-adjacent-violators.

The only supported direction is non-increasing; callers needing a
non-decreasing fit negate x.
"""
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from src.core.costs import CostTables
from src.core.dataset import Dataset
from src.core.errors import EmptyInput, NonFiniteValue
from src.core.models import L2


@dataclass(frozen=True)
class IsotonicFit:
    fitted: np.ndarray
    sse: float
    blocks: List[Tuple[int, float]]     # (start index, value) of each maximal constant run

    @property
    def boundaries(self) -> List[int]:
        return [start for start, _ in self.blocks] + [len(self.fitted)]

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)


def _pool(values: Sequence[float], weights: Sequence[float]) -> List[list]:
    """Stack of [start, end, weighted sum, weight]; each element is pooled at most once."""
    stack: List[list] = []
    for idx, (v, w) in enumerate(zip(values, weights)):
        stack.append([idx, idx + 1, v * w, w])
        # Non-increasing target: the previous block must not sit below the new one
        while len(stack) > 1 and stack[-2][2] / stack[-2][3] < stack[-1][2] / stack[-1][3]:
            top = stack.pop()
            prev = stack[-1]
            prev[1] = top[1]
            prev[2] += top[2]
            prev[3] += top[3]
    return stack


def _runs(fitted: np.ndarray) -> List[Tuple[int, float]]:
    runs = [(0, float(fitted[0]))]
    for idx in range(1, len(fitted)):
        if fitted[idx] != fitted[idx - 1]:
            runs.append((idx, float(fitted[idx])))
    return runs


def pava_fit(x: Sequence[float], weights: Sequence[float] = None) -> IsotonicFit:
    """Unique weighted least-squares non-increasing fit of x."""
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        raise EmptyInput("isotonic fit needs at least one value")
    if not np.all(np.isfinite(x)):
        raise NonFiniteValue("isotonic fit input holds a non-finite value")
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=np.float64)
    if w.shape != x.shape or np.any(w <= 0):
        raise ValueError("weights must be positive and match x")

    fitted = np.empty_like(x)
    for start, end, total, weight in _pool(x.tolist(), w.tolist()):
        # Unpooled blocks keep the exact input value
        fitted[start:end] = x[start] if end - start == 1 else total / weight

    residual = x - fitted
    sse = float(np.sum(w * residual * residual))
    return IsotonicFit(fitted=fitted, sse=sse, blocks=_runs(fitted))


def _vertex_means(data: Dataset, start: int) -> Tuple[np.ndarray, np.ndarray]:
    starts = data.starts[start:]
    counts = np.diff(starts).astype(np.float64)
    sums = data.prefix_x[starts[1:]] - data.prefix_x[starts[:-1]]
    means = sums / counts
    single = counts == 1.0
    means[single] = data.x[starts[:-1][single]]
    return means, counts


def isotonic_fit(data: Dataset, start: int = 0, tables: CostTables = None) -> IsotonicFit:
    """
    Isotonic fit of the vertices start..I-1, one fitted value per vertex.

    Observations sharing a coordinate are fitted together (weighted by their
    count). sse is summed from block_error over the runs, left to right, the
    same arithmetic path curve_error follows.
    """
    if tables is None or not tables.model.is_l2:
        tables = CostTables(data, L2)
    if not (0 <= start < data.I):
        raise EmptyInput(f"suffix starting at vertex {start} is empty")
    means, counts = _vertex_means(data, start)
    fit = pava_fit(means, counts)
    bounds = fit.boundaries
    sse = 0.0
    for a, b in zip(bounds, bounds[1:]):
        sse += tables.block_error(start + a, start + b)
    return IsotonicFit(fitted=fit.fitted, sse=sse, blocks=fit.blocks)


def suffix_lb_table(data: Dataset, tables: CostTables = None) -> np.ndarray:
    """
    Entry i is the isotonic sse of vertices i..I-1, entry I is 0. Each entry
    lower-bounds any completion from vertex i regardless of remaining arcs
    or last step value.
    """
    if tables is None or not tables.model.is_l2:
        tables = CostTables(data, L2)
    table = np.zeros(data.I + 1)
    for i in range(data.I):
        table[i] = isotonic_fit(data, i, tables).sse
    table.setflags(write=False)
    return table
