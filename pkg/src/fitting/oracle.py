# src/fitting/oracle.py
"""Exhaustive reference solver for small instances."""
import math
from dataclasses import dataclass
from itertools import combinations
from typing import List

from src.core.costs import CostTables
from src.core.dataset import Dataset
from src.core.errors import InfeasibleStepMin, InstanceTooLarge
from src.core.logger import log_event
from src.core.models import FitConfig

MAX_I = 15
MAX_K = 5


@dataclass(frozen=True)
class OracleResult:
    objective: float
    partition: List[int]        # 0 = b_0 < ... < b_m = I
    values: List[float]

    @property
    def n_blocks(self) -> int:
        return len(self.values)


def brute_force(data: Dataset, cfg: FitConfig, tables: CostTables = None) -> OracleResult:
    """
    Enumerates every partition of the vertices into at most K contiguous
    blocks, keeps the ones respecting step_min (and, in monotone mode, with
    non-increasing block values) and returns the cheapest. Ties keep the
    first partition in enumeration order (fewer blocks first).
    """
    I, K = data.I, cfg.K
    if I > MAX_I or K > MAX_K:
        raise InstanceTooLarge(f"brute force is limited to I <= {MAX_I} and K <= {MAX_K}, got I={I}, K={K}")
    if tables is None or tables.data is not data or tables.model != cfg.cost_model:
        tables = CostTables(data, cfg.cost_model)
    coords = data.coords
    step_min = cfg.step_min

    best = None
    enumerated = 0
    for n_inner in range(min(K, I)):
        for inner in combinations(range(1, I), n_inner):
            enumerated += 1
            bounds = (0,) + inner + (I,)
            if step_min > 0:
                if any(coords[b] - coords[a] < step_min for a, b in zip(bounds[:-2], bounds[1:-1])):
                    continue
                if cfg.strict_last_block and coords[-1] - coords[bounds[-2]] < step_min:
                    continue
            values = [tables.block_value(a, b) for a, b in zip(bounds, bounds[1:])]
            if cfg.enforce_monotone and any(u < v for u, v in zip(values, values[1:])):
                continue
            total = 0.0
            for a, b in zip(bounds, bounds[1:]):
                total += tables.block_error(a, b)
            if best is None or total < best.objective:
                best = OracleResult(objective=total, partition=list(bounds), values=values)

    if best is None:
        raise InfeasibleStepMin(f"no partition into at most {K} blocks respects step_min = {step_min}")
    log_event(
        data.short_id(), "ORACLE",
        f"Enumerated {enumerated} partitions, best objective {best.objective:.6g}",
        "DEBUG",
        metadata={"I": I, "K": K, "blocks": best.n_blocks}
    )
    return best


def objectives_agree(a: float, b: float, rel_tol: float = 1e-9, abs_tol: float = 1e-9) -> bool:
    return math.isclose(a, b, rel_tol=rel_tol, abs_tol=abs_tol)
