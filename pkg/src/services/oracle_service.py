# src/services/oracle_service.py
from datadog import statsd

import numpy as np

from src.config import EXIT_ERROR, EXIT_OPTIMAL
from src.core.costs import CostTables
from src.core.dataset import Dataset, load_dataset
from src.core.logger import log_event
from src.core.models import L1, L2, CostModel, FitConfig
from src.fitting.oracle import MAX_K, brute_force, objectives_agree
from src.fitting.solver import solve
from src.services.common import guarded

LOSSES = (L2, L1, CostModel(kind="quantile", tau=0.3))


def random_instance(rng: np.random.Generator, max_i: int) -> Dataset:
    """Distinct sorted p on [0, I), x uniform on [0, 10]."""
    n = int(rng.integers(3, max_i + 1))
    p = np.sort(rng.choice(10 * n, size=n, replace=False)) / 10.0
    x = rng.uniform(0.0, 10.0, n)
    return load_dataset(zip(p.tolist(), x.tolist()))


def random_config(rng: np.random.Generator, data: Dataset, max_k: int) -> FitConfig:
    monotone = bool(rng.integers(0, 2))
    loss = LOSSES[int(rng.integers(0, len(LOSSES)))]
    mean_gap = float(np.mean(np.diff(data.coords)))
    return FitConfig(
        K=int(rng.integers(1, max_k + 1)),
        step_min=0.5 * mean_gap if rng.integers(0, 2) else 0.0,
        cost_model=loss,
        enforce_monotone=monotone,
        # Isotonic suffix bounds only hold for the monotone problem
        use_isotonic_lb=monotone,
        use_relaxed_lb=bool(rng.integers(0, 2)),
    )


def check_instance(data: Dataset, cfg: FitConfig) -> tuple:
    tables = CostTables(data, cfg.cost_model)
    expected = brute_force(data, cfg, tables).objective
    got = solve(data, cfg, tables=tables).objective
    return objectives_agree(got, expected), got, expected


@guarded("ORACLE")
def cmd_oracle(args) -> int:
    with statsd.timed("stepfit.oracle.latency"):
        rng = np.random.Generator(np.random.PCG64(args.seed))
        max_k = min(args.k, MAX_K)
        mismatches = 0
        for n in range(args.instances):
            data = random_instance(rng, args.max_i)
            cfg = random_config(rng, data, max_k)
            ok, got, expected = check_instance(data, cfg)
            if not ok:
                mismatches += 1
                log_event(
                    data.short_id(), "ORACLE",
                    f"❌ Instance {n}: solver {got!r} != brute force {expected!r}",
                    "ERROR",
                    metadata={"config": cfg.model_dump(mode="json")}
                )

        statsd.gauge("stepfit.oracle.mismatches", mismatches)
        if mismatches:
            print(f"{mismatches} of {args.instances} instances disagree")
            return EXIT_ERROR
        log_event(None, "ORACLE", f"✅ {args.instances} instances agree with brute force", "SUCCESS")
        print(f"{args.instances} instances agree")
        return EXIT_OPTIMAL
