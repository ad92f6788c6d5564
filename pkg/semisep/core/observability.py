"""
Observability module for logging pipeline activity.
Entries are kept in memory and emitted through loguru sinks.
"""

import datetime
import json
import sys
import threading
from typing import Any, Dict, List, Optional

from loguru import logger as _loguru

_LEVELS = ("INFO", "WARNING", "ERROR", "DEBUG")


class Logger:
    def __init__(self, log_to_file: bool = False, log_file: str = "semisep.log", quiet: bool = False):
        self.logs: List[str] = []
        self._lock = threading.Lock()
        self._sink_ids: List[int] = []
        self.configure(quiet=quiet, log_file=log_file if log_to_file else None)

    def configure(self, quiet: bool = False, log_file: Optional[str] = None) -> None:
        """Install the console sink (unless quiet) and an optional rotating file sink."""
        with self._lock:
            for sink_id in self._sink_ids:
                try:
                    _loguru.remove(sink_id)
                except ValueError:
                    pass
            self._sink_ids = []
            # loguru's default stderr handler
            try:
                _loguru.remove(0)
            except ValueError:
                pass
            if not quiet:
                self._sink_ids.append(_loguru.add(sys.stderr, format="{message}", level="DEBUG"))
            if log_file:
                self._sink_ids.append(
                    _loguru.add(log_file, rotation="1 MB", format="{time:HH:mm:ss} | {level} | {message}")
                )

    def log(self, component: str, message: str, data: Optional[Any] = None, level: str = "INFO"):
        """
        Log an event with timestamp, component name, message, and optional data.

        Args:
            component: Name of the pipeline stage logging
            message: Main log message
            data: Optional additional data (JSON-serialized when possible)
            level: Log level (INFO, WARNING, ERROR, DEBUG)
        """
        timestamp = datetime.datetime.now().strftime("%H:%M:%S")
        entry = f"[{timestamp}] {level:<5} {component}: {message}"

        if data is not None:
            try:
                data_str = json.dumps(data, indent=2, default=str) if isinstance(data, (dict, list)) else str(data)
            except (TypeError, ValueError):
                data_str = str(data)
            entry += f"\n{' ' * 20} Data: {data_str}"

        with self._lock:
            self.logs.append(entry)
        _loguru.opt(depth=1).log(level if level in _LEVELS else "INFO", entry)

    def info(self, component: str, message: str, data: Optional[Any] = None):
        self.log(component, message, data, level="INFO")

    def error(self, component: str, message: str, data: Optional[Any] = None):
        self.log(component, message, data, level="ERROR")

    def warning(self, component: str, message: str, data: Optional[Any] = None):
        self.log(component, message, data, level="WARNING")

    def debug(self, component: str, message: str, data: Optional[Any] = None):
        self.log(component, message, data, level="DEBUG")

    def get_logs(self, last_n: Optional[int] = None) -> str:
        """
        Get all logs or last N logs as a formatted string.

        Args:
            last_n: Number of recent logs to return (None for all)
        """
        with self._lock:
            logs_to_return = self.logs[-last_n:] if last_n else self.logs
            return "\n".join(logs_to_return)

    def clear(self):
        """Clear all logs from memory."""
        with self._lock:
            self.logs.clear()

    def get_stats(self) -> Dict[str, Any]:
        """Get logging statistics."""
        with self._lock:
            return {
                "total_logs": len(self.logs),
                "by_level": {lvl: sum(1 for log in self.logs if f" {lvl:<5} " in log) for lvl in _LEVELS},
            }


# Singleton instance for global use; the CLI reconfigures sinks from Config.
logger = Logger(log_to_file=False, quiet=True)
