import functools
import logging
import os
import sys
import time

import psutil

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)

logger = logging.getLogger(__name__)


def setup_logging(verbosity: int = 0, log_file: str | None = None) -> None:
    """Configure the package logger: stderr always, plus a file when asked."""
    root = logging.getLogger("intent_shapes")
    root.setLevel(LEVELS[min(verbosity, len(LEVELS) - 1)])
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(formatter)
    root.addHandler(handler)

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)
    root.propagate = False


def monitor(func):
    """Log duration and RSS growth of a long-running call."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        process = psutil.Process(os.getpid())
        start_memory = process.memory_info().rss / (1024 * 1024)
        start_time = time.perf_counter()

        status = "unknown"
        try:
            result = func(*args, **kwargs)
            status = "success"
            return result
        except Exception:
            status = "error"
            raise
        finally:
            duration = time.perf_counter() - start_time
            current_memory = process.memory_info().rss / (1024 * 1024)
            logger.info(
                {
                    "action": "monitor",
                    "function_name": func.__name__,
                    "status": status,
                    "duration": round(duration, 4),
                    "memory_usage": round(current_memory - start_memory, 2),
                }
            )

    return wrapper
