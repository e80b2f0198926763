# src/core/curve.py
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from src.core.costs import CostTables
from src.core.dataset import Dataset
from src.core.errors import BelowDomain, CurveDoesNotCoverData
from src.core.models import CostModel, L2


@dataclass(frozen=True)
class StepCurve:
    """f(p) = u_k on [p_k, p_{k+1}), extended to the right by the last value."""
    breakpoints: Tuple[float, ...]
    values: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in self.breakpoints))
        object.__setattr__(self, "values", tuple(float(u) for u in self.values))
        if not self.values:
            raise ValueError("a step curve needs at least one step")
        if len(self.breakpoints) != len(self.values) + 1:
            raise ValueError(
                f"{len(self.values)} values need {len(self.values) + 1} breakpoints, got {len(self.breakpoints)}"
            )
        if any(not a < b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    @property
    def n_blocks(self) -> int:
        return len(self.values)

    def is_non_increasing(self) -> bool:
        return all(a >= b for a, b in zip(self.values, self.values[1:]))

    def evaluate(self, p: float) -> float:
        return evaluate(self, p)

    def blocks(self) -> List[Tuple[int, float, float, float]]:
        """Rows (k, p_k, p_{k+1}, u_k), k 1-based."""
        return [
            (k + 1, self.breakpoints[k], self.breakpoints[k + 1], self.values[k])
            for k in range(self.n_blocks)
        ]

    def trace(self) -> List[Tuple[float, float]]:
        """Two (p, value) rows per block, at its start and end, for line plots."""
        rows = []
        for _, start, end, value in self.blocks():
            rows.append((start, value))
            rows.append((end, value))
        return rows


def evaluate(curve: StepCurve, p: float) -> float:
    if p < curve.breakpoints[0]:
        raise BelowDomain(f"p = {p} is left of the first breakpoint {curve.breakpoints[0]}")
    k = bisect_right(curve.breakpoints, p) - 1
    return curve.values[min(k, curve.n_blocks - 1)]


def sink_coordinate(data: Dataset, step_min: float = 0.0) -> float:
    """Dummy coordinate closing the last block, strictly right of every observation."""
    last = float(data.coords[-1])
    increment = math.nextafter(last, math.inf) - last
    return last + max(step_min, increment)


def curve_from_partition(tables: CostTables, boundaries: Sequence[int], step_min: float = 0.0) -> StepCurve:
    """
    Curve whose blocks are the vertex ranges [b_k, b_{k+1}) and whose values are
    the blocks' optimal representatives. boundaries starts at 0 and ends at I.
    """
    data = tables.data
    if boundaries[0] != 0 or boundaries[-1] != data.I:
        raise ValueError(f"boundaries must run from 0 to {data.I}, got {list(boundaries)}")
    breakpoints = [float(data.coords[b]) for b in boundaries[:-1]]
    breakpoints.append(sink_coordinate(data, step_min))
    values = [tables.block_value(a, b) for a, b in zip(boundaries, boundaries[1:])]
    return StepCurve(tuple(breakpoints), tuple(values))


def _direct_loss(x: np.ndarray, u: float, model: CostModel) -> float:
    r = x - u
    if model.kind == "l2":
        return float(np.sum(r * r))
    if model.kind == "l1":
        return float(np.sum(np.abs(r)))
    tau = model.tau
    return float(np.sum(np.maximum(tau * r, (tau - 1.0) * r)))


def curve_error(data: Dataset, curve: StepCurve, model: CostModel = L2, tables: CostTables = None) -> float:
    """
    Total loss of the curve on the data, summed block by block.

    A block whose value is the block's own representative contributes exactly
    block_error, so a curve assembled from a partition reproduces the sum of
    its block errors bit for bit.
    """
    if tables is None or tables.data is not data or tables.model != model:
        tables = CostTables(data, model)
    coords = data.coords
    if curve.breakpoints[0] > coords[0] or curve.breakpoints[-1] < coords[-1]:
        raise CurveDoesNotCoverData(
            f"curve spans [{curve.breakpoints[0]}, {curve.breakpoints[-1]}] "
            f"but the data spans [{coords[0]}, {coords[-1]}]"
        )

    total = 0.0
    last = curve.n_blocks - 1
    for k, u in enumerate(curve.values):
        lo = int(np.searchsorted(coords, curve.breakpoints[k], side="left"))
        hi = data.I if k == last else int(np.searchsorted(coords, curve.breakpoints[k + 1], side="left"))
        if hi <= lo:
            continue
        representative = tables.block_value(lo, hi)
        if u == representative:
            total += tables.block_error(lo, hi)
        elif model.is_l2:
            n = tables.count(lo, hi)
            total += tables.block_error(lo, hi) + n * (representative - u) ** 2
        else:
            s, e = int(data.starts[lo]), int(data.starts[hi])
            total += _direct_loss(data.x[s:e], u, model)
    return total


def merge_equal_steps(curve: StepCurve) -> StepCurve:
    """Same function with the breakpoints between equal neighbouring values removed."""
    breakpoints, values = [curve.breakpoints[0]], [curve.values[0]]
    for p, u in zip(curve.breakpoints[1:-1], curve.values[1:]):
        if u != values[-1]:
            breakpoints.append(p)
            values.append(u)
    breakpoints.append(curve.breakpoints[-1])
    return StepCurve(tuple(breakpoints), tuple(values))
