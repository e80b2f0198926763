# src/services/gen_service.py
import sys

from datadog import statsd

from src.config import EXIT_OPTIMAL
from src.core.dataset import write_csv
from src.core.logger import log_event
from src.core.models import GenConfig
from src.fitting.datagen import generate
from src.services.common import guarded


@guarded("GEN")
def cmd_gen(args) -> int:
    with statsd.timed("stepfit.gen.latency"):
        cfg = GenConfig(I=args.i, sigma=args.sigma, seed=args.seed, sampling=args.sampling)
        data = generate(cfg)
        write_csv(data, args.out if args.out else sys.stdout)
        log_event(data.short_id(), "GEN", f"📦 Wrote {data.n_obs} rows to {args.out or 'stdout'}", "INFO")
        return EXIT_OPTIMAL
