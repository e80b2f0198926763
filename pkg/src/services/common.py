# src/services/common.py
import sys
from functools import wraps

from pydantic import ValidationError

from src.config import DEFAULT_TIME_LIMIT, EXIT_ERROR
from src.core.dataset import Dataset, load_dataset, read_csv
from src.core.errors import StepFitError
from src.core.logger import log_event
from src.core.models import CostModel, FitConfig


def guarded(component: str):
    """
    Wraps a command handler: domain, validation and I/O errors are logged,
    echoed as one line on stderr and turned into exit code 1.
    """
    def decorate(handler):
        @wraps(handler)
        def run(args) -> int:
            try:
                return handler(args)
            except (StepFitError, ValidationError, ValueError, OSError) as e:
                log_event(
                    None, component, f"❌ {type(e).__name__}: {e}", "ERROR",
                    metadata={"error_type": type(e).__name__}
                )
                print(f"error: {e}", file=sys.stderr)
                return EXIT_ERROR
        return run
    return decorate


def load_input(args) -> Dataset:
    rows = read_csv(args.input)
    return load_dataset(rows, on_duplicate="merge" if args.merge_duplicates else "reject")


def fit_config_from_args(args) -> FitConfig:
    time_limit = getattr(args, "time_limit", None)
    return FitConfig(
        K=args.k,
        step_min=args.step_min,
        cost_model=CostModel.parse(args.loss),
        enforce_monotone=not getattr(args, "relaxed", False),
        use_isotonic_lb=not getattr(args, "no_iso_lb", False),
        use_relaxed_lb=getattr(args, "relaxed_lb", False),
        use_clustering_ub=not getattr(args, "no_ub", False),
        time_limit=time_limit if time_limit is not None else DEFAULT_TIME_LIMIT,
        strict_last_block=args.strict_last_block,
    )
