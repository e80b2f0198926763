# src/fitting/clustering.py
"""
Adjacency-constrained agglomerative clustering and the feasible upper bound
built from it: isotonic fit -> K contiguous clusters -> step curve.
"""
import heapq
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from src.core.costs import CostTables
from src.core.curve import StepCurve, curve_error, curve_from_partition, merge_equal_steps, sink_coordinate
from src.core.dataset import Dataset
from src.core.errors import EmptyInput
from src.core.logger import log_event
from src.core.models import FitConfig, L2
from src.fitting.isotonic import isotonic_fit


@dataclass(frozen=True)
class AdjacentPartition:
    boundaries: List[int]       # 0 = b_0 < b_1 < ... < b_m = n
    values: List[float]         # weighted mean of each cluster

    @property
    def n_clusters(self) -> int:
        return len(self.values)


def adjacency_cluster(values: Sequence[float], K: int, weights: Sequence[float] = None) -> AdjacentPartition:
    """
    Greedy Ward-style merging restricted to neighbours: starting from
    singletons, merge the adjacent pair with the smallest increase of
    within-cluster squared error until at most K clusters remain. Ties go
    to the leftmost pair. Neighbours with equal means always end up merged,
    so cluster values never repeat.
    """
    vals = [float(v) for v in values]
    n = len(vals)
    if n == 0:
        raise EmptyInput("nothing to cluster")
    if K < 1:
        raise ValueError("K must be at least 1")
    w = [1.0] * n if weights is None else [float(v) for v in weights]

    start = list(range(n))
    total = [v * wt for v, wt in zip(vals, w)]
    weight = list(w)
    mean = list(vals)
    left = [c - 1 for c in range(n)]
    right = [c + 1 if c + 1 < n else -1 for c in range(n)]
    alive = [True] * n
    version = [0] * n

    def merge_cost(a: int, b: int) -> float:
        wa, wb = weight[a], weight[b]
        d = mean[a] - mean[b]
        return wa * wb / (wa + wb) * d * d

    heap: List[Tuple[float, int, int, int, int, int]] = []

    def push(a: int):
        b = right[a]
        if b != -1:
            heapq.heappush(heap, (merge_cost(a, b), start[a], a, b, version[a], version[b]))

    for c in range(n - 1):
        push(c)

    clusters = n
    while clusters > K:
        _, _, a, b, va, vb = heapq.heappop(heap)
        if not (alive[a] and alive[b]) or version[a] != va or version[b] != vb:
            continue
        total[a] += total[b]
        weight[a] += weight[b]
        # Equal-mean merges keep the exact value
        if mean[a] != mean[b]:
            mean[a] = total[a] / weight[a]
        alive[b] = False
        version[a] += 1
        right[a] = right[b]
        if right[b] != -1:
            left[right[b]] = a
        clusters -= 1
        if left[a] != -1:
            push(left[a])
        push(a)

    # Zero-cost merges still pending leave neighbours with equal means
    c = 0
    while right[c] != -1:
        b = right[c]
        if mean[b] == mean[c]:
            total[c] += total[b]
            weight[c] += weight[b]
            right[c] = right[b]
        else:
            c = b

    boundaries, cluster_values = [], []
    c = 0
    while c != -1:
        boundaries.append(start[c])
        cluster_values.append(mean[c])
        c = right[c]
    boundaries.append(n)
    return AdjacentPartition(boundaries=boundaries, values=cluster_values)


def violates_step_min(data: Dataset, boundaries: Sequence[int], step_min: float, strict_last_block: bool = False) -> bool:
    """True when a block is shorter than step_min; the last block only counts when strict."""
    if step_min <= 0:
        return False
    coords = data.coords
    for a, b in zip(boundaries[:-2], boundaries[1:-1]):
        if coords[b] - coords[a] < step_min:
            return True
    if strict_last_block and coords[-1] - coords[boundaries[-2]] < step_min:
        return True
    return False


def build_upper_bound(data: Dataset, cfg: FitConfig, tables: CostTables = None) -> Tuple[StepCurve, float]:
    """
    Feasible curve with at most K blocks and its error on the original data.
    When step_min is violated the number of clusters is lowered until it holds
    (one cluster always terminates the search).
    """
    if tables is None or tables.model != cfg.cost_model:
        tables = CostTables(data, cfg.cost_model)
    l2_tables = tables if tables.model.is_l2 else CostTables(data, L2)

    fit = isotonic_fit(data, 0, l2_tables)
    counts = data.counts
    n_clusters = min(cfg.K, fit.n_blocks)
    while True:
        partition = adjacency_cluster(fit.fitted, n_clusters, counts)
        if n_clusters == 1 or not violates_step_min(data, partition.boundaries, cfg.step_min, cfg.strict_last_block):
            break
        n_clusters -= 1

    curve = None
    if tables.model.is_l2:
        curve = curve_from_partition(tables, partition.boundaries, cfg.step_min)
        if not curve.is_non_increasing():
            curve = None
    if curve is None:
        # Cluster means of the isotonic values, rescored under the configured loss
        breakpoints = [float(data.coords[b]) for b in partition.boundaries[:-1]]
        breakpoints.append(sink_coordinate(data, cfg.step_min))
        curve = StepCurve(tuple(breakpoints), tuple(partition.values))
    curve = merge_equal_steps(curve)

    value = curve_error(data, curve, cfg.cost_model, tables)
    log_event(
        data.short_id(), "CLUSTER",
        f"Upper bound {value:.6g} with {curve.n_blocks} blocks (isotonic fit had {fit.n_blocks})",
        "DEBUG",
        metadata={"ub": value, "blocks": curve.n_blocks, "isotonic_blocks": fit.n_blocks}
    )
    return curve, value


def partition_of(data: Dataset, curve: StepCurve) -> List[int]:
    """Vertex boundaries of a curve whose breakpoints sit on data coordinates."""
    inner = np.searchsorted(data.coords, curve.breakpoints[:-1], side="left").tolist()
    return [int(b) for b in inner] + [data.I]
