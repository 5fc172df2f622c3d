"""Structured run logs: structlog events rendered by the stdlib root logger.

Artifacts go to files and stdout stays empty, so every record lands on stderr
(and optionally in a rotating log file).
"""
import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, List, Optional

import structlog
from pythonjsonlogger import jsonlogger

JSON_FIELDS = "%(asctime)s %(levelname)s %(name)s %(message)s"
PLAIN_FIELDS = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_FILE_BYTES = 4 * 2**20
LOG_FILE_BACKUPS = 3


class LevelJsonFormatter(jsonlogger.JsonFormatter):
    """One JSON object per line; ``level`` holds the upper-case level name."""

    def add_fields(self, log_record: dict, record: logging.LogRecord, message_dict: dict) -> None:
        super().add_fields(log_record, record, message_dict)
        log_record["level"] = record.levelname


def setup_logging(
    log_level: str = "WARNING", log_file: Optional[str] = None, json_format: bool = True
) -> None:
    # main() can run repeatedly in one process, so nothing is cached.
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.stdlib.render_to_log_kwargs,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )
    formatter = LevelJsonFormatter(JSON_FIELDS) if json_format else logging.Formatter(PLAIN_FIELDS)
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(
            RotatingFileHandler(log_file, maxBytes=LOG_FILE_BYTES, backupCount=LOG_FILE_BACKUPS)
        )
    for handler in handlers:
        handler.setFormatter(formatter)
    root = logging.getLogger()
    root.handlers[:] = handlers
    root.setLevel(log_level.upper())


def run_logger(name: str, **context: Any) -> Any:
    """A structlog logger with the run context (command, config hash) bound."""
    return structlog.get_logger(name).bind(**context)


class ArtifactLogger:
    """Emits one ``artifact written`` event per output file."""

    def __init__(self, logger: Any):
        self.logger = logger

    def log_artifact(self, path: str, kind: str, config_hash: str, size: int) -> None:
        self.logger.info("artifact written", path=path, kind=kind, config_hash=config_hash, bytes=size)
