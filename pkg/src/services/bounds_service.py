# src/services/bounds_service.py
import json

from datadog import statsd

from src.config import EXIT_OPTIMAL
from src.core.costs import CostTables
from src.core.errors import InfeasibleCardinality
from src.core.logger import log_event
from src.fitting.clustering import build_upper_bound
from src.fitting.isotonic import suffix_lb_table
from src.fitting.solver import SolveStatus, cardinality_sp_lb, gap_or_none, solve
from src.services.common import fit_config_from_args, guarded, load_input


@guarded("BOUNDS")
def cmd_bounds(args) -> int:
    """Initial bounds and gap without the exact search (unless --with-relaxed)."""
    with statsd.timed("stepfit.bounds.latency"):
        data = load_input(args)
        cfg = fit_config_from_args(args)
        tables = CostTables(data, cfg.cost_model)
        run_id = data.short_id()

        _, ub0 = build_upper_bound(data, cfg, tables)
        lb_iso = float(suffix_lb_table(data)[0]) if cfg.cost_model.is_l2 else None

        lb_card = None
        if args.relaxed_lb:
            try:
                lb_card = float(cardinality_sp_lb(data, cfg.K, cfg.step_min, tables, cfg.strict_last_block)[cfg.K, 0])
            except InfeasibleCardinality as e:
                log_event(run_id, "BOUNDS", f"Cardinality bound unavailable: {e}", "WARNING")

        lb_relaxed = None
        if args.with_relaxed:
            # Isotonic bounds only hold for the monotone problem
            relaxed = solve(data, cfg.with_changes(enforce_monotone=False, use_isotonic_lb=False), tables=tables)
            lb_relaxed = relaxed.objective if relaxed.status == SolveStatus.OPTIMAL else relaxed.bounds.best_lb_final

        candidates = [v for v in (lb_iso, lb_card, lb_relaxed) if v is not None]
        lb = max(candidates, default=0.0)
        summary = {
            "K": cfg.K,
            "loss": str(cfg.cost_model),
            "ub0": ub0,
            "lb_iso": lb_iso,
            "lb_cardinality": lb_card,
            "lb_relaxed": lb_relaxed,
            "lb": lb,
            "gap0": gap_or_none(ub0, lb),
        }
        print(json.dumps(summary))

        log_event(run_id, "BOUNDS", f"📏 ub0={ub0:.6g} lb={lb:.6g} gap0={summary['gap0']}", "INFO")
        if summary["gap0"] is not None:
            statsd.gauge("stepfit.bounds.gap0", summary["gap0"])
        return EXIT_OPTIMAL
