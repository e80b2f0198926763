# src/core/costs.py
"""
Arc-cost engine.

For a block of vertices [i, j) the representative AV(i, j) and the error
ER(i, j) are served in O(1) for least squares (prefix sums) and from
precomputed order-statistic rows for the median and quantile models.
"""
import heapq
import time
from typing import Tuple

import numpy as np

from src.core.dataset import Dataset
from src.core.errors import IndexOutOfRange
from src.core.logger import log_event
from src.core.models import CostModel, L2


class OrderStatisticRows:
    """
    Representative and loss of every block [i, j) under an order-statistic
    model, swept origin by origin with a pair of heaps.

    The lower heap keeps the smallest `rank(n)` observations so its top is
    the representative; running sums on both sides give the loss in O(1).
    Total build cost is O(n_obs * I * log n_obs).
    """

    def __init__(self, data: Dataset, model: CostModel):
        if model.is_l2:
            raise ValueError("order-statistic rows are only built for l1/quantile models")
        self.model = model
        I = data.I
        self.values = np.full((I, I + 1), np.nan)
        self.errors = np.full((I, I + 1), np.nan)

        xs = data.x.tolist()
        starts = data.starts.tolist()
        l1 = model.kind == "l1"
        tau = model.tau

        for i in range(I):
            lo, up = [], []      # lo is a max-heap stored negated
            s_lo = s_up = 0.0
            n = 0
            for j in range(i + 1, I + 1):
                for v in xs[starts[j - 1]:starts[j]]:
                    if lo and v <= -lo[0]:
                        heapq.heappush(lo, -v)
                        s_lo += v
                    else:
                        heapq.heappush(up, v)
                        s_up += v
                    n += 1
                r = model.order_rank(n)
                while len(lo) > r:
                    v = -heapq.heappop(lo)
                    s_lo -= v
                    heapq.heappush(up, v)
                    s_up += v
                while len(lo) < r:
                    v = heapq.heappop(up)
                    s_up -= v
                    heapq.heappush(lo, -v)
                    s_lo += v
                q = -lo[0]
                below = q * len(lo) - s_lo
                above = s_up - q * len(up)
                err = below + above if l1 else (1.0 - tau) * below + tau * above
                self.values[i, j] = q
                self.errors[i, j] = err if err > 0.0 else 0.0

        self.values.setflags(write=False)
        self.errors.setflags(write=False)


class CostTables:
    """Read-only view answering AV / ER queries for one dataset and one cost model."""

    def __init__(self, data: Dataset, model: CostModel = L2):
        self.data = data
        self.model = model
        self._rows = None
        if not model.is_l2:
            started = time.monotonic()
            self._rows = OrderStatisticRows(data, model)
            log_event(
                data.short_id(), "COSTS",
                f"Built {model} order-statistic rows for {data.I} vertices",
                "DEBUG",
                metadata={"seconds": round(time.monotonic() - started, 3)}
            )

    @property
    def I(self) -> int:
        return self.data.I

    def _check(self, i: int, j: int):
        if not (0 <= i < j <= self.data.I):
            raise IndexOutOfRange(f"block [{i}, {j}) outside 0 <= i < j <= {self.data.I}")

    def count(self, i: int, j: int) -> int:
        starts = self.data.starts
        return int(starts[j] - starts[i])

    def block_value(self, i: int, j: int) -> float:
        """Optimal step value on vertices [i, j): mean, lower median or tau-quantile."""
        self._check(i, j)
        if self._rows is not None:
            return float(self._rows.values[i, j])
        d = self.data
        s, e = int(d.starts[i]), int(d.starts[j])
        if e - s == 1:
            return float(d.x[s])
        sums = float(d.prefix_x[e]) - float(d.prefix_x[s])
        return sums / (e - s)

    def block_error(self, i: int, j: int) -> float:
        """Loss of the block against its own representative; never negative."""
        self._check(i, j)
        if self._rows is not None:
            return float(self._rows.errors[i, j])
        d = self.data
        s, e = int(d.starts[i]), int(d.starts[j])
        n = e - s
        if n == 1:
            return 0.0
        sums = float(d.prefix_x[e]) - float(d.prefix_x[s])
        err = (float(d.prefix_x2[e]) - float(d.prefix_x2[s])) - sums * sums / n
        return err if err > 0.0 else 0.0

    def arc_row(self, i: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        (values, errors) of the arcs (i, h) for h = i+1..I, bit-identical
        to the scalar queries.
        """
        if not (0 <= i < self.data.I):
            raise IndexOutOfRange(f"vertex {i} outside 0..{self.data.I - 1}")
        if self._rows is not None:
            return self._rows.values[i, i + 1:], self._rows.errors[i, i + 1:]
        d = self.data
        s = int(d.starts[i])
        e = d.starts[i + 1:]
        n = (e - s).astype(np.float64)
        sums = d.prefix_x[e] - d.prefix_x[s]
        values = sums / n
        errors = (d.prefix_x2[e] - d.prefix_x2[s]) - sums * sums / n
        errors[errors < 0.0] = 0.0
        single = n == 1.0
        if single.any():
            values[single] = d.x[s]
            errors[single] = 0.0
        return values, errors


def block_value(tables: CostTables, i: int, j: int) -> float:
    return tables.block_value(i, j)


def block_error(tables: CostTables, i: int, j: int) -> float:
    return tables.block_error(i, j)
