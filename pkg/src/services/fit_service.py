# src/services/fit_service.py
import sys
from pathlib import Path

from datadog import statsd

from src.config import EXIT_OPTIMAL, EXIT_TIME_LIMIT
from src.core.logger import log_event
from src.fitting.solver import SolveStatus
from src.fitting.strategies import run_strategy
from src.services.common import fit_config_from_args, guarded, load_input
from src.services.report import FitReport


def write_plot(curve, path) -> None:
    """Two `p value` rows per block, at its start and end."""
    lines = [f"{p!r} {u!r}" for p, u in curve.trace()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@guarded("FIT")
def cmd_fit(args) -> int:
    with statsd.timed("stepfit.fit.latency", tags=[f"strategy:{args.strategy}"]):

        # ---------------------------------------------------------
        # STEP 1: LOAD INPUT & CONFIG
        # ---------------------------------------------------------
        data = load_input(args)
        cfg = fit_config_from_args(args)
        run_id = data.short_id()
        log_event(
            run_id, "FIT",
            f"🧮 Fitting {data.n_obs} observations with K={cfg.K} ({args.strategy})",
            "INFO",
            metadata={"input": str(args.input), "step_min": cfg.step_min, "loss": str(cfg.cost_model)}
        )

        # ---------------------------------------------------------
        # STEP 2: SOLVE
        # ---------------------------------------------------------
        result = run_strategy(data, cfg, args.strategy)

        # ---------------------------------------------------------
        # STEP 3: REPORT
        # ---------------------------------------------------------
        report = FitReport.from_result(result, data, cfg, path=str(args.input))
        payload = report.model_dump_json(indent=2)
        if args.out:
            Path(args.out).write_text(payload + "\n", encoding="utf-8")
        else:
            print(payload)
        if args.plot:
            write_plot(result.curve, args.plot)

        tags = [f"strategy:{args.strategy}", f"status:{result.status.value}"]
        statsd.gauge("stepfit.fit.objective", result.objective, tags=tags)
        statsd.gauge("stepfit.fit.labels_created", result.labels_created, tags=tags)
        statsd.gauge("stepfit.fit.labels_pruned", result.labels_pruned, tags=tags)
        if result.bounds.gap0 is not None:
            statsd.gauge("stepfit.fit.gap0", result.bounds.gap0, tags=tags)

        if result.status == SolveStatus.TIME_LIMIT:
            statsd.increment("stepfit.fit.time_limit", tags=tags)
            log_event(
                run_id, "FIT",
                f"⏱️ Time limit reached, incumbent {result.objective:.6g} (gap {result.bounds.gap_final})",
                "WARNING"
            )
            print(f"time limit reached; best lower bound {result.bounds.best_lb_final!r}", file=sys.stderr)
            return EXIT_TIME_LIMIT

        log_event(run_id, "FIT", f"✅ Optimal objective {result.objective:.6g}", "SUCCESS")
        return EXIT_OPTIMAL
