# src/config.py
import os
from dataclasses import dataclass
from typing import Optional
from dotenv import load_dotenv

load_dotenv()

SERVICE_NAME = os.getenv("DD_SERVICE", "stepfit")

LOG_LEVEL = os.getenv("STEPFIT_LOG_LEVEL", "INFO").upper()
LOG_LEVELS = {"DEBUG": 10, "INFO": 20, "SUCCESS": 25, "WARNING": 30, "ERROR": 40, "CRITICAL": 50}

# Bench parallelism cap
THREADS = int(os.getenv("STEPFIT_THREADS", "1"))

_time_limit = os.getenv("STEPFIT_TIME_LIMIT")
DEFAULT_TIME_LIMIT: Optional[float] = float(_time_limit) if _time_limit else None

# Optional path to the realistic substation dataset (p,x CSV)
REALISTIC_CSV = os.getenv("STEPFIT_REALISTIC_CSV")

SCHEMA_VERSION = "stepfit/1"

# Exit codes
EXIT_OPTIMAL = 0
EXIT_ERROR = 1
EXIT_TIME_LIMIT = 2


@dataclass
class Config:
    """Process-level configuration."""
    service: str = SERVICE_NAME
    log_level: str = LOG_LEVEL
    threads: int = THREADS
    default_time_limit: Optional[float] = DEFAULT_TIME_LIMIT

    def __post_init__(self):
        if self.log_level not in LOG_LEVELS:
            raise ValueError(f"STEPFIT_LOG_LEVEL must be one of {sorted(LOG_LEVELS)}, got {self.log_level!r}")
        if self.threads < 1:
            raise ValueError("STEPFIT_THREADS must be a positive integer")
        if self.default_time_limit is not None and self.default_time_limit <= 0:
            raise ValueError("STEPFIT_TIME_LIMIT must be positive when set")
