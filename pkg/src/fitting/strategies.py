# src/fitting/strategies.py
"""
Solver strategies exposed to the command line:

  raw  exact search with every bound switched off
  iso  clustering upper bound + isotonic suffix lower bounds
  rlx  relaxed search first, monotone search only when the relaxed curve
       is not already non-increasing
"""
from dataclasses import replace
from typing import List, Sequence

from src.core.costs import CostTables
from src.core.curve import curve_from_partition, curve_error
from src.core.dataset import Dataset
from src.core.logger import log_event
from src.core.models import FitConfig
from src.fitting.clustering import build_upper_bound, partition_of
from src.fitting.solver import BoundsReport, FitResult, SolveStatus, gap_or_none, solve

STRATEGIES = ("iso", "rlx", "raw")


def monotone_repair(tables: CostTables, boundaries: Sequence[int]) -> List[int]:
    """
    Pools adjacent blocks of a partition until the block representatives are
    strictly decreasing. The result never has more blocks than the input.
    """
    stack: List[List[int]] = []
    for a, b in zip(boundaries[:-1], boundaries[1:]):
        stack.append([a, b])
        while len(stack) > 1:
            (pa, pb), (ca, cb) = stack[-2], stack[-1]
            if tables.block_value(pa, pb) > tables.block_value(ca, cb):
                break
            stack.pop()
            stack[-1][1] = cb
    return [a for a, _ in stack] + [stack[-1][1]]


def try_relaxed_first(data: Dataset, cfg: FitConfig, tables: CostTables = None) -> FitResult:
    if tables is None or tables.data is not data or tables.model != cfg.cost_model:
        tables = CostTables(data, cfg.cost_model)
    run_id = data.short_id()

    relaxed = solve(data, cfg.with_changes(enforce_monotone=False), tables=tables)
    if relaxed.status == SolveStatus.OPTIMAL and relaxed.curve.is_non_increasing():
        log_event(run_id, "SOLVER", "✅ Relaxed curve is non-increasing, optimality certified", "SUCCESS")
        bounds = replace(relaxed.bounds, best_lb_final=relaxed.objective, gap_final=0.0)
        return replace(relaxed, bounds=bounds, monotone=True, certified=True, strategy="rlx")

    repaired_bounds = monotone_repair(tables, relaxed.boundaries)
    repaired = curve_from_partition(tables, repaired_bounds, cfg.step_min)
    log_event(
        run_id, "SOLVER",
        f"Relaxed curve violates monotonicity, repaired to {repaired.n_blocks} blocks",
        "INFO",
        metadata={"relaxed_objective": relaxed.objective, "relaxed_status": relaxed.status.value}
    )

    remaining = None
    if cfg.time_limit is not None:
        remaining = cfg.time_limit - relaxed.wall_time
        if remaining <= 0:
            return _out_of_time(data, cfg, tables, relaxed, repaired)

    monotone = solve(
        data,
        cfg.with_changes(enforce_monotone=True, time_limit=remaining),
        tables=tables,
        incumbent=repaired,
        lb_hint=relaxed.objective if relaxed.status == SolveStatus.OPTIMAL else None,
    )
    return replace(
        monotone,
        labels_created=monotone.labels_created + relaxed.labels_created,
        labels_dominated=monotone.labels_dominated + relaxed.labels_dominated,
        labels_pruned=monotone.labels_pruned + relaxed.labels_pruned,
        wall_time=monotone.wall_time + relaxed.wall_time,
        strategy="rlx",
    )


def _out_of_time(data, cfg, tables, relaxed: FitResult, repaired) -> FitResult:
    """The relaxed pass used the whole budget: report the better feasible curve."""
    curve, objective = repaired, curve_error(data, repaired, cfg.cost_model, tables)
    if cfg.use_clustering_ub:
        ub_curve, ub = build_upper_bound(data, cfg, tables)
        if ub < objective:
            curve, objective = ub_curve, ub
    best_lb = min(relaxed.bounds.best_lb_final, objective)
    bounds = BoundsReport(
        ub0=relaxed.bounds.ub0,
        lb0=relaxed.bounds.lb0,
        gap0=relaxed.bounds.gap0,
        best_lb_final=best_lb,
        status=SolveStatus.TIME_LIMIT,
        gap_final=gap_or_none(objective, best_lb),
    )
    return replace(
        relaxed,
        curve=curve,
        objective=objective,
        bounds=bounds,
        boundaries=partition_of(data, curve),
        monotone=True,
        certified=False,
        strategy="rlx",
    )


def configure(cfg: FitConfig, strategy: str) -> FitConfig:
    """Bound toggles implied by a strategy name."""
    if strategy == "raw":
        return cfg.with_changes(use_clustering_ub=False, use_isotonic_lb=False, use_relaxed_lb=False)
    if strategy in ("iso", "rlx"):
        return cfg
    raise ValueError(f"unknown strategy {strategy!r}, expected one of {', '.join(STRATEGIES)}")


def run_strategy(data: Dataset, cfg: FitConfig, strategy: str = "iso", tables: CostTables = None) -> FitResult:
    """
    Fit of data under the named strategy. A relaxed config is solved as is,
    without isotonic bounds (they only hold for the monotone problem).
    """
    cfg = configure(cfg, strategy)
    if not cfg.enforce_monotone:
        result = solve(data, cfg.with_changes(use_isotonic_lb=False), tables=tables)
        result.strategy = strategy
        return result
    if strategy == "rlx":
        return try_relaxed_first(data, cfg, tables)
    result = solve(data, cfg, tables=tables)
    result.strategy = strategy
    return result
