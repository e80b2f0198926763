# src/services/report.py
"""JSON report written by `fit` (schema "stepfit/1")."""
import math
from typing import List, Optional

from pydantic import BaseModel

from src.config import SCHEMA_VERSION
from src.core.curve import StepCurve
from src.core.dataset import Dataset
from src.core.models import FitConfig
from src.fitting.solver import FitResult


def _finite(value: Optional[float]) -> Optional[float]:
    # JSON has no infinity; unknown bounds are null
    if value is None or not math.isfinite(value):
        return None
    return float(value)


class InputInfo(BaseModel):
    path: Optional[str] = None
    digest: str
    n_obs: int
    n_coords: int


class BlockRow(BaseModel):
    k: int
    start: float
    end: float
    value: float


class BoundsInfo(BaseModel):
    ub0: Optional[float] = None
    lb0: Optional[float] = None
    gap0: Optional[float] = None
    best_lb_final: Optional[float] = None
    gap_final: Optional[float] = None
    status: str


class Counters(BaseModel):
    labels_created: int
    labels_dominated: int
    labels_pruned: int


class FitReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    input: InputInfo
    config: FitConfig
    strategy: str
    status: str
    objective: float
    certified: bool
    wall_time: float
    blocks: List[BlockRow]
    bounds: BoundsInfo
    counters: Counters

    @classmethod
    def from_result(cls, result: FitResult, data: Dataset, cfg: FitConfig, path: str = None) -> "FitReport":
        b = result.bounds
        return cls(
            input=InputInfo(path=path, digest=data.digest(), n_obs=data.n_obs, n_coords=data.I),
            config=cfg,
            strategy=result.strategy,
            status=result.status.value,
            objective=result.objective,
            certified=result.certified,
            wall_time=round(result.wall_time, 6),
            blocks=[BlockRow(k=k, start=s, end=e, value=u) for k, s, e, u in result.curve.blocks()],
            bounds=BoundsInfo(
                ub0=_finite(b.ub0),
                lb0=_finite(b.lb0),
                gap0=_finite(b.gap0),
                best_lb_final=_finite(b.best_lb_final),
                gap_final=_finite(b.gap_final),
                status=b.status.value,
            ),
            counters=Counters(
                labels_created=result.labels_created,
                labels_dominated=result.labels_dominated,
                labels_pruned=result.labels_pruned,
            ),
        )

    def to_curve(self) -> StepCurve:
        breakpoints = [row.start for row in self.blocks] + [self.blocks[-1].end]
        return StepCurve(tuple(breakpoints), tuple(row.value for row in self.blocks))
