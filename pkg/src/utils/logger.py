"""Logging configuration and utilities."""

import logging
import logging.handlers
import os
from pathlib import Path
from typing import Optional
from config.settings import settings

# Global flag to control console logging
# Set to True to suppress console output (file logging still works)
_console_logging_suppressed = False


class RunContextFilter(logging.Filter):
    """Filter to add run context (command and seed) to log records."""

    def __init__(self):
        super().__init__()
        self.run_name = None
        self.seed = None

    def set_run_context(self, run_name: str, seed: Optional[int] = None):
        """Set the run context for this filter."""
        self.run_name = run_name
        self.seed = seed

    def filter(self, record):
        """Add run context to the log record."""
        record.run_name = self.run_name or '-'
        record.seed = '-' if self.seed is None else self.seed
        return True


def get_logger(name: str, run_name: str = None, seed: Optional[int] = None) -> logging.Logger:
    """Get configured logger instance with optional run context."""
    logger = logging.getLogger(name)

    if not logger.handlers:
        level = getattr(logging, str(settings.get('logging.level', 'INFO')).upper(), logging.INFO)
        logger.setLevel(level)
        logger.propagate = False

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - [%(run_name)s:%(seed)s] - %(levelname)s - %(message)s'
        )

        # Console handler - only add if not suppressed
        if not _console_logging_suppressed:
            console_handler = logging.StreamHandler()
            console_handler.setLevel(level)
            console_handler.setFormatter(formatter)
            console_filter = RunContextFilter()
            if run_name:
                console_filter.set_run_context(run_name, seed)
            console_handler.addFilter(console_filter)
            logger.addHandler(console_handler)

        log_file = settings.get('logging.file', 'logs/augsel.log')
        log_dir = os.path.dirname(log_file)
        if log_dir:
            Path(log_dir).mkdir(parents=True, exist_ok=True)

        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=settings.get('logging.max_bytes', 10485760),
            backupCount=settings.get('logging.backup_count', 5)
        )
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        file_filter = RunContextFilter()
        if run_name:
            file_filter.set_run_context(run_name, seed)
        file_handler.addFilter(file_filter)
        logger.addHandler(file_handler)

    if run_name and logger.handlers:
        update_logger_run_context(logger, run_name, seed)

    return logger


def update_logger_run_context(logger: logging.Logger, run_name: str, seed: Optional[int] = None):
    """Update the run context for an existing logger."""
    for handler in logger.handlers:
        for filter_obj in handler.filters:
            if isinstance(filter_obj, RunContextFilter):
                filter_obj.set_run_context(run_name, seed)
                break


def set_run_context_everywhere(run_name: str, seed: Optional[int] = None):
    """Rebind the run context on every logger created by this module."""
    for logger_name in list(logging.Logger.manager.loggerDict):
        logger = logging.getLogger(logger_name)
        update_logger_run_context(logger, run_name, seed)


def set_level_everywhere(level_name: str):
    """Change the level of every configured logger and handler."""
    level = getattr(logging, level_name.upper(), logging.INFO)
    for logger_name in list(logging.Logger.manager.loggerDict):
        logger = logging.getLogger(logger_name)
        if any(isinstance(f, RunContextFilter) for h in logger.handlers for f in h.filters):
            logger.setLevel(level)
            for handler in logger.handlers:
                handler.setLevel(level)


def suppress_console_logging():
    """Suppress console output for all loggers while keeping file logging active.

    Used by the CLI ``--quiet`` flag so that only the command summary reaches
    the terminal.
    """
    global _console_logging_suppressed
    _console_logging_suppressed = True

    root_logger = logging.getLogger()
    for handler in root_logger.handlers:
        if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.FileHandler):
            handler.setLevel(logging.CRITICAL + 1)

    for logger_name in logging.Logger.manager.loggerDict:
        logger = logging.getLogger(logger_name)
        for handler in logger.handlers:
            if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.FileHandler):
                handler.setLevel(logging.CRITICAL + 1)
