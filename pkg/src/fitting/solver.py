# src/fitting/solver.py
"""
Exact resource-constrained shortest path over the complete forward DAG on
vertices 0..I (I is the sink). An arc (i, h) is the block of vertices
[i, h) with cost ER(i, h) and step value AV(i, h). Labels carry
(cost, arcs used, last step value); the monotone mode requires strictly
decreasing step values along a path, the relaxed mode drops that resource.
"""
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional

import numpy as np

from src.core.costs import CostTables
from src.core.curve import StepCurve, curve_error, curve_from_partition, merge_equal_steps
from src.core.dataset import Dataset
from src.core.errors import InfeasibleCardinality, InfeasibleStepMin, NonPositiveLB
from src.core.logger import log_event
from src.core.models import FitConfig
from src.fitting.clustering import build_upper_bound, partition_of
from src.fitting.isotonic import suffix_lb_table
from src.fitting.labels import Label, LabelStore

# Relative slack applied to lower bounds used for pruning only
LB_SLACK = 1e-12


class SolveStatus(str, Enum):
    OPTIMAL = "Optimal"
    TIME_LIMIT = "TimeLimit"


@dataclass
class BoundsReport:
    ub0: Optional[float]
    lb0: float
    gap0: Optional[float]
    best_lb_final: float
    status: SolveStatus
    gap_final: Optional[float] = None


@dataclass
class FitResult:
    curve: StepCurve
    objective: float
    bounds: BoundsReport
    boundaries: List[int]
    labels_created: int = 0
    labels_dominated: int = 0
    labels_pruned: int = 0
    wall_time: float = 0.0
    monotone: bool = True
    certified: bool = False
    strategy: str = "iso"

    @property
    def status(self) -> SolveStatus:
        return self.bounds.status


def gap(ub: float, lb: float) -> float:
    """Relative optimality gap in percent."""
    if not lb > 0:
        raise NonPositiveLB(f"gap needs a positive lower bound, got {lb}")
    return (ub - lb) / lb * 100.0


def gap_or_none(ub: Optional[float], lb: Optional[float]) -> Optional[float]:
    if ub is None or lb is None or not math.isfinite(ub):
        return None
    if ub <= lb:
        return 0.0
    if lb > 0:
        return gap(ub, lb)
    return None


def _arc_allowed(coords: np.ndarray, i: int, step_min: float, strict_last_block: bool) -> np.ndarray:
    """Mask over destinations h = i+1..I of arcs that respect step_min."""
    allowed = np.ones(len(coords) - i, dtype=bool)
    if step_min > 0:
        allowed[:-1] = coords[i + 1:] - coords[i] >= step_min
        if strict_last_block:
            allowed[-1] = coords[-1] - coords[i] >= step_min
    return allowed


def cardinality_sp_lb(
    data: Dataset,
    K: int,
    step_min: float = 0.0,
    tables: CostTables = None,
    strict_last_block: bool = False,
) -> np.ndarray:
    """
    table[r, i] = cheapest path from vertex i to the sink using at most r arcs,
    monotonicity ignored; table[r, I] = 0 and table[0, i < I] = inf.
    Backward dynamic program, O(K * I^2).
    """
    if tables is None:
        tables = CostTables(data)
    I = data.I
    table = np.full((K + 1, I + 1), np.inf)
    table[:, I] = 0.0
    coords = data.coords
    for i in range(I - 1, -1, -1):
        _, errors = tables.arc_row(i)
        allowed = _arc_allowed(coords, i, step_min, strict_last_block)
        masked = np.where(allowed, errors, np.inf)
        candidates = (masked[None, :] + table[:-1, i + 1:]).min(axis=1)
        table[1:, i] = np.minimum(table[:-1, i], candidates)
    if not math.isfinite(table[K, 0]):
        raise InfeasibleCardinality(f"no path reaches the sink within {K} arcs under step_min = {step_min}")
    table.setflags(write=False)
    return table


@dataclass
class SearchState:
    """What the forward sweep leaves behind when it stops."""
    store: LabelStore
    layer: int
    remaining: List[Label]
    incumbent: float
    floor: float
    lower_bound: Callable[[int, int], float] = field(repr=False)


def frontier_cut(store: LabelStore, incumbent: float, lower_bound: Callable[[int, int], float], waiting=()) -> float:
    """
    Least c + LB(vertex) over the labels not yet extended, capped by the
    incumbent. waiting holds (vertex, label) pairs already popped but not
    processed.
    """
    cut = incumbent
    for h, label in waiting:
        cut = min(cut, label.c + lower_bound(h, label.k))
    for h, label in store.pending():
        cut = min(cut, label.c + lower_bound(h, label.k))
    return cut


def anytime_lb(state: SearchState) -> float:
    """
    Lower bound on the optimum from a stopped sweep.

    Every path cheaper than the incumbent is represented (itself or by a
    dominating label) among the labels still waiting at vertices >= layer,
    so the frontier cut is a valid bound. floor carries the initial bound and
    the best cut scored at earlier layers.
    """
    waiting = [(state.layer, label) for label in state.remaining]
    return max(state.floor, frontier_cut(state.store, state.incumbent, state.lower_bound, waiting))


def solve(
    data: Dataset,
    cfg: FitConfig,
    *,
    tables: CostTables = None,
    incumbent: StepCurve = None,
    lb_hint: float = None,
) -> FitResult:
    """
    Label-setting sweep over layers 0..I-1 with bound-based pruning.

    incumbent seeds INC with a known feasible curve; lb_hint is an externally
    proven lower bound (for instance a relaxed objective) folded into lb0.
    """
    started = time.monotonic()
    deadline = started + cfg.time_limit if cfg.time_limit else None
    if tables is None or tables.data is not data or tables.model != cfg.cost_model:
        tables = CostTables(data, cfg.cost_model)

    run_id = data.short_id()
    I, K = data.I, cfg.K
    coords = data.coords
    monotone = cfg.enforce_monotone
    step_min = cfg.step_min

    if cfg.strict_last_block and step_min > 0 and coords[-1] - coords[0] < step_min:
        raise InfeasibleStepMin(
            f"data spans {coords[-1] - coords[0]} < step_min = {step_min}; not even one block fits"
        )

    if cfg.use_isotonic_lb and cfg.cost_model.is_l2:
        iso = suffix_lb_table(data)
    else:
        iso = np.zeros(I + 1)
    card = None
    if cfg.use_relaxed_lb:
        try:
            card = cardinality_sp_lb(data, K, step_min, tables, cfg.strict_last_block)
        except InfeasibleCardinality as e:
            raise InfeasibleStepMin(str(e)) from e

    def lower_bound(h: int, k: int) -> float:
        value = float(iso[h])
        if card is not None:
            value = max(value, float(card[K - k, h]))
        return value

    inc, inc_curve = math.inf, None
    if cfg.use_clustering_ub:
        ub_curve, ub = build_upper_bound(data, cfg, tables)
        if partition_respects(data, partition_of(data, ub_curve), cfg):
            inc, inc_curve = ub, ub_curve
    if incumbent is not None:
        value = curve_error(data, incumbent, cfg.cost_model, tables)
        if value < inc:
            inc, inc_curve = value, incumbent
    ub0 = inc if math.isfinite(inc) else None

    floor_parts = [float(card[K, 0])] if card is not None else []
    if monotone:
        floor_parts.append(float(iso[0]))
        if lb_hint is not None:
            floor_parts.append(float(lb_hint))
    lb0 = max(floor_parts, default=0.0)

    log_event(
        run_id, "SOLVER",
        f"Sweep start: I={I} K={K} mode={'monotone' if monotone else 'relaxed'} loss={cfg.cost_model}",
        "INFO",
        metadata={"ub0": ub0, "lb0": lb0, "step_min": step_min}
    )

    iso_prune = iso * (1.0 - LB_SLACK)
    card_prune = card * (1.0 - LB_SLACK) if card is not None else None

    store = LabelStore(I + 1)
    sentinel = float(np.max(data.x)) + 1.0
    store.insert(Label(0.0, 0, sentinel, None, -1, 0))
    best: Optional[Label] = None
    pruned = 0
    stopped: Optional[SearchState] = None
    report_every = max(1, I // 10)
    cut_floor = lb0

    for i in range(I):
        labels = store.pop_layer(i)
        if not labels:
            continue
        values, errors = tables.arc_row(i)
        allowed = _arc_allowed(coords, i, step_min, cfg.strict_last_block)
        sink_value, sink_error, sink_ok = float(values[-1]), float(errors[-1]), bool(allowed[-1])
        inner_values, inner_errors, inner_ok = values[:-1], errors[:-1], allowed[:-1]
        iso_row = iso_prune[i + 1:I]

        for idx, lab in enumerate(labels):
            if deadline is not None and time.monotonic() > deadline:
                stopped = SearchState(store, i, labels[idx:], inc, cut_floor, lower_bound)
                break
            if lab.c > inc:
                pruned += len(labels) - idx
                break
            if sink_ok and lab.c + sink_error < inc and (not monotone or sink_value < lab.st):
                inc = lab.c + sink_error
                best = lab
            if lab.k >= K - 1 or len(inner_values) == 0:
                continue

            k_new = lab.k + 1
            base = lab.c + inner_errors
            bound = iso_row if card_prune is None else np.maximum(iso_row, card_prune[K - k_new, i + 1:I])
            feasible = inner_ok & (inner_values < lab.st) if monotone else inner_ok
            keep = feasible & (base + bound < inc)
            n_keep = int(np.count_nonzero(keep))
            pruned += int(np.count_nonzero(feasible)) - n_keep
            if n_keep == 0:
                continue
            for off in np.flatnonzero(keep).tolist():
                h = i + 1 + off
                st = float(inner_values[off]) if monotone else sentinel
                store.insert(Label(float(base[off]), k_new, st, lab, i, h))

        if stopped is not None:
            break
        if i % report_every == 0:
            if deadline is not None:
                cut_floor = max(cut_floor, frontier_cut(store, inc, lower_bound))
            log_event(
                run_id, "SOLVER", f"Layer {i}/{I} processed", "DEBUG",
                metadata={"incumbent": inc, "labels": store.created, "dominated": store.dominated, "cut": cut_floor}
            )

    if best is not None:
        boundaries = [0] + [h for _, h in best.arcs()] + [I]
        curve = curve_from_partition(tables, boundaries, step_min)
        objective = inc
    elif inc_curve is not None:
        curve, objective = inc_curve, inc
        boundaries = partition_of(data, curve)
    elif stopped is not None:
        # Time ran out before any completion and no upper bound was requested
        curve, objective = build_upper_bound(data, cfg, tables)
        boundaries = partition_of(data, curve)
    else:
        raise InfeasibleStepMin("no feasible path reached the sink")

    # Neighbouring steps never repeat a value
    merged = merge_equal_steps(curve)
    if merged.n_blocks < curve.n_blocks:
        curve, objective = merged, curve_error(data, merged, cfg.cost_model, tables)
        boundaries = partition_of(data, curve)

    if stopped is not None:
        stopped.incumbent = min(stopped.incumbent, objective)
        best_lb = min(anytime_lb(stopped), objective)
        status = SolveStatus.TIME_LIMIT
    else:
        best_lb = objective
        status = SolveStatus.OPTIMAL

    bounds = BoundsReport(
        ub0=ub0,
        lb0=lb0,
        gap0=gap_or_none(ub0, lb0),
        best_lb_final=best_lb,
        status=status,
        gap_final=gap_or_none(objective, best_lb),
    )
    result = FitResult(
        curve=curve,
        objective=objective,
        bounds=bounds,
        boundaries=boundaries,
        labels_created=store.created - 1,
        labels_dominated=store.dominated,
        labels_pruned=pruned,
        wall_time=time.monotonic() - started,
        monotone=monotone,
    )
    log_event(
        run_id, "SOLVER",
        f"Sweep {status.value}: objective {objective:.6g} with {curve.n_blocks} blocks",
        "SUCCESS" if status == SolveStatus.OPTIMAL else "WARNING",
        metadata={
            "objective": objective,
            "best_lb_final": best_lb,
            "labels_created": result.labels_created,
            "labels_dominated": result.labels_dominated,
            "labels_pruned": pruned,
            "seconds": round(result.wall_time, 3),
        }
    )
    return result


def partition_respects(data: Dataset, boundaries: List[int], cfg: FitConfig) -> bool:
    """Whether a partition is a feasible path: at most K blocks and step_min on every arc."""
    if len(boundaries) - 1 > cfg.K:
        return False
    coords = data.coords
    for a, b in zip(boundaries[:-1], boundaries[1:]):
        allowed = _arc_allowed(coords, a, cfg.step_min, cfg.strict_last_block)
        if not allowed[b - a - 1]:
            return False
    return True
