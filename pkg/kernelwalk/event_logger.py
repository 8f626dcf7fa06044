"""
Event logger for analysis stages.

Logs stage start/finish/failure and numeric checks as JSONL.
Wall-clock time lives here only; reports never carry it.
"""

import json
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional


class AnalysisEventLogger:
    """
    Logger for pipeline events.

    Logs to JSONL format (one JSON object per line). With no path the
    logger is inert, so callers never need to check for it.
    """

    def __init__(self, log_path: Optional[str] = None, verbose: bool = False):
        """
        Initialize event logger.

        Args:
            log_path: Path to the JSONL file (None disables file logging)
            verbose: Echo stage tags to stderr
        """
        self.verbose = verbose
        self.log_path = Path(log_path) if log_path else None
        if self.log_path is not None:
            self.log_path.parent.mkdir(parents=True, exist_ok=True)

    def tag(self, stage: str, message: str):
        """[STAGE] message on stderr, only when verbose."""
        if self.verbose:
            print(f"[{stage.upper()}] {message}", file=sys.stderr)

    def log_event(self, event_type: str, stage: str, reason: str,
                  metadata: Optional[Dict[str, Any]] = None):
        """
        Append one event.

        Args:
            event_type: stage_started, stage_completed, stage_failed or numeric_check
            stage: Pipeline stage (series, kernel, curve, group, continuation, classify)
            reason: Brief reason string
            metadata: Extra JSON-ready data
        """
        if self.log_path is None:
            return
        event = {
            "timestamp": datetime.now().isoformat(),
            "unix_time": time.time(),
            "event_type": event_type,
            "stage": stage,
            "reason": reason,
            "metadata": metadata or {},
        }
        with open(self.log_path, "a") as f:
            f.write(json.dumps(event, default=str) + "\n")

    def stage_started(self, stage: str):
        self.tag(stage, "started")
        self.log_event("stage_started", stage, "started")

    def stage_completed(self, stage: str, summary: str = "", metadata: Optional[Dict[str, Any]] = None):
        self.tag(stage, summary or "done")
        self.log_event("stage_completed", stage, summary or "done", metadata)

    def stage_failed(self, stage: str, error: Exception):
        self.tag(stage, f"failed: {error}")
        self.log_event("stage_failed", stage, str(error), {"error_type": type(error).__name__})

    def numeric_check(self, stage: str, name: str, value: float, tolerance: float):
        """Log a residual against its tolerance."""
        passed = value < tolerance
        self.tag(stage, f"{name} = {value:.3e} ({'ok' if passed else 'FAILED'}, tol {tolerance:g})")
        self.log_event("numeric_check", stage, name,
                       {"value": value, "tolerance": tolerance, "passed": passed})

    def get_recent_events(self, limit: int = 100) -> List[Dict[str, Any]]:
        """
        Get recent events from log.

        Args:
            limit: Maximum number of events to return

        Returns:
            List of event dictionaries
        """
        if self.log_path is None or not self.log_path.exists():
            return []

        events = []
        with open(self.log_path, "r") as f:
            for line in f:
                try:
                    events.append(json.loads(line.strip()))
                except json.JSONDecodeError:
                    continue

        return events[-limit:]

    def purge_logs(self):
        """Delete all logged events."""
        if self.log_path is not None and self.log_path.exists():
            self.log_path.unlink()
