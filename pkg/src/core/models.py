# src/core/models.py
import math
from typing import Literal, Optional
from pydantic import BaseModel, ConfigDict, Field, model_validator


class CostModel(BaseModel):
    """Loss used for block representatives and block errors."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["l2", "l1", "quantile"] = "l2"
    tau: Optional[float] = None

    @model_validator(mode="after")
    def _check_tau(self):
        if self.kind == "quantile":
            if self.tau is None or not (0.0 < self.tau < 1.0):
                raise ValueError("quantile cost model needs tau in (0, 1)")
        elif self.tau is not None:
            raise ValueError(f"tau is only meaningful for the quantile model, not {self.kind}")
        return self

    @classmethod
    def parse(cls, text: str) -> "CostModel":
        """Accepts 'l2', 'l1' or 'quantile:TAU'."""
        text = text.strip().lower()
        if text.startswith("quantile"):
            _, _, tau = text.partition(":")
            if not tau:
                raise ValueError("quantile loss must be written quantile:TAU")
            return cls(kind="quantile", tau=float(tau))
        return cls(kind=text)

    @property
    def is_l2(self) -> bool:
        return self.kind == "l2"

    def order_rank(self, n: int) -> int:
        """1-based order statistic used as representative of n sorted values."""
        if self.kind == "l1":
            return (n + 1) // 2  # lower median
        # ceil(tau * n), guarded against products like 0.7 * 10 = 7.000000000000001
        return min(n, max(1, math.ceil(self.tau * n - 1e-9)))

    def __str__(self) -> str:
        return f"quantile:{self.tau}" if self.kind == "quantile" else self.kind


L2 = CostModel(kind="l2")
L1 = CostModel(kind="l1")


class FitConfig(BaseModel):
    """Settings of one solve call."""
    model_config = ConfigDict(frozen=True)

    K: int = Field(ge=1)
    step_min: float = Field(default=0.0, ge=0.0)
    cost_model: CostModel = L2
    enforce_monotone: bool = True
    use_isotonic_lb: bool = True
    use_relaxed_lb: bool = False
    use_clustering_ub: bool = True
    time_limit: Optional[float] = Field(default=None, gt=0.0)
    strict_last_block: bool = False

    @model_validator(mode="after")
    def _check_finite(self):
        if not math.isfinite(self.step_min):
            raise ValueError("step_min must be finite")
        return self

    def with_changes(self, **changes) -> "FitConfig":
        return self.model_copy(update=changes)


class GenConfig(BaseModel):
    """Synthetic instance settings: x = f*(p) + N(0, sigma^2)."""
    model_config = ConfigDict(frozen=True)

    I: int = Field(ge=1)
    sigma: float = Field(default=0.0, ge=0.0)
    seed: int = 0
    sampling: Literal["grid", "uniform"] = "grid"
