# src/core/logger.py
import sys
import json
from datetime import datetime, timezone
from src.config import SERVICE_NAME, LOG_LEVEL, LOG_LEVELS


def log_event(
    run_id: str,
    component: str,
    message: str,
    level: str = "INFO",
    metadata: dict = None
):
    """
    Emits one structured event as single-line JSON on stderr.

    The shape matches what the Datadog agent parses from container output;
    stdout stays free for command results (JSON reports, bound summaries).
    """
    if LOG_LEVELS.get(level, 20) < LOG_LEVELS.get(LOG_LEVEL, 20):
        return

    log_entry = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "status": level,                # Datadog maps "status" to the alert level
        "message": f"[{component}] {message}",
        "service": SERVICE_NAME,
        "component": component,
        "run_id": run_id,               # short dataset digest, None for system events
        "ddsource": "python"
    }

    if metadata:
        log_entry.update(metadata)

    print(json.dumps(log_entry, default=str), file=sys.stderr, flush=True)
