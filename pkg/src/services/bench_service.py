# src/services/bench_service.py
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import List, Optional

import pandas as pd
from datadog import statsd

from src.config import EXIT_OPTIMAL, EXIT_TIME_LIMIT, THREADS
from src.core.dataset import load_dataset, read_csv
from src.core.errors import UsageError
from src.core.logger import log_event
from src.core.models import CostModel, FitConfig, GenConfig
from src.fitting.datagen import K_SWEEP, NOISE_SWEEP, SIZE_SWEEP, generate
from src.fitting.solver import SolveStatus
from src.fitting.strategies import STRATEGIES, run_strategy
from src.services.common import guarded

COLUMNS = [
    "sweep", "I", "sigma", "K", "strategy", "error", "seconds",
    "labels_created", "labels_dominated", "labels_pruned", "status",
]


def _parse_list(text: Optional[str], cast) -> Optional[list]:
    if not text:
        return None
    return [cast(item) for item in text.split(",") if item.strip()]


def plan_cells(args) -> List[dict]:
    """One dict per (I, sigma, K) cell of the requested sweep."""
    values = _parse_list(args.values, float if args.sweep == "noise" else int)
    if args.sweep == "noise":
        return [{"I": args.i, "sigma": s, "K": args.k} for s in (values or NOISE_SWEEP)]
    if args.sweep == "size":
        return [{"I": n, "sigma": args.sigma, "K": args.k} for n in (values or SIZE_SWEEP)]
    if args.sweep == "k":
        return [{"I": args.i, "sigma": args.sigma, "K": k} for k in (values or K_SWEEP)]
    raise UsageError(f"unknown sweep {args.sweep!r}")


def run_cell(sweep: str, cell: dict, strategies: List[str], seed: int, loss: str,
             time_limit: Optional[float], input_path: Optional[str] = None) -> List[dict]:
    """Solves one cell under every strategy. Runs in a worker process."""
    if input_path:
        data = load_dataset(read_csv(input_path), on_duplicate="merge")
    else:
        data = generate(GenConfig(I=cell["I"], sigma=cell["sigma"], seed=seed))
    cfg = FitConfig(K=cell["K"], cost_model=CostModel.parse(loss), time_limit=time_limit)
    rows = []
    for strategy in strategies:
        result = run_strategy(data, cfg, strategy)
        rows.append({
            "sweep": sweep,
            "I": data.I,
            "sigma": None if input_path else cell["sigma"],
            "K": cell["K"],
            "strategy": strategy,
            "error": result.objective,
            "seconds": round(result.wall_time, 6),
            "labels_created": result.labels_created,
            "labels_dominated": result.labels_dominated,
            "labels_pruned": result.labels_pruned,
            "status": result.status.value,
        })
    return rows


@guarded("BENCH")
def cmd_bench(args) -> int:
    strategies = _parse_list(args.strategies, str) or list(STRATEGIES)
    unknown = [s for s in strategies if s not in STRATEGIES]
    if unknown:
        raise UsageError(f"unknown strategies {unknown}, expected a subset of {list(STRATEGIES)}")
    cells = plan_cells(args)
    workers = min(THREADS, len(cells))
    log_event(
        None, "BENCH",
        f"🏁 Sweep '{args.sweep}' over {len(cells)} cells, strategies {strategies}, {workers} worker(s)",
        "INFO"
    )

    rows: List[dict] = []
    with statsd.timed("stepfit.bench.latency", tags=[f"sweep:{args.sweep}"]):
        call = (args.sweep, strategies, args.seed, args.loss, args.time_limit, args.input)
        if workers <= 1:
            for cell in cells:
                rows.extend(run_cell(call[0], cell, *call[1:]))
        else:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                futures = {executor.submit(run_cell, call[0], cell, *call[1:]): cell for cell in cells}
                for future in as_completed(futures):
                    rows.extend(future.result())

    frame = pd.DataFrame(rows, columns=COLUMNS)
    frame = frame.sort_values(["I", "sigma", "K", "strategy"], kind="stable", na_position="first")
    frame.to_csv(args.out if args.out else sys.stdout, index=False, lineterminator="\n")

    timed_out = int((frame["status"] == SolveStatus.TIME_LIMIT.value).sum())
    statsd.increment("stepfit.bench.cells", len(cells), tags=[f"sweep:{args.sweep}"])
    log_event(None, "BENCH", f"✅ {len(frame)} rows written, {timed_out} hit the time limit", "SUCCESS")
    return EXIT_TIME_LIMIT if timed_out else EXIT_OPTIMAL
