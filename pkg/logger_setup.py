"""
Layout Video Diffusion Toolkit - Logging Module
Centralized logging configuration and utilities
"""

import logging
import logging.handlers
import sys
import time
from functools import wraps
from typing import Optional

from config import get_config


ROOT_LOGGER_NAME = 'lvd'


class LoggerSetup:
    """Setup and manage application logging"""

    _initialized = False

    @classmethod
    def setup_logging(cls, config=None, level: Optional[str] = None) -> logging.Logger:
        """
        Setup application-wide logging

        Console output goes to stderr so stdout stays machine-readable.

        Args:
            config: Configuration object (uses global config if None)
            level: Level override (e.g. from a --log-level flag)

        Returns:
            Application logger instance
        """
        app_logger = logging.getLogger(ROOT_LOGGER_NAME)
        if cls._initialized and level is None:
            return app_logger

        if config is None:
            config = get_config()

        log_config = config.logging
        log_level = getattr(logging, (level or log_config.log_level).upper())

        app_logger.setLevel(log_level)
        # Handlers we own are replaced; anything else (pytest's caplog) stays.
        for handler in list(app_logger.handlers):
            if getattr(handler, '_lvd_owned', False):
                app_logger.removeHandler(handler)

        formatter = logging.Formatter(log_config.log_format)

        if log_config.log_to_console:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(log_level)
            console_handler.setFormatter(formatter)
            console_handler._lvd_owned = True
            app_logger.addHandler(console_handler)

        if log_config.log_file:
            log_config.log_file.parent.mkdir(parents=True, exist_ok=True)

            file_handler = logging.handlers.RotatingFileHandler(
                log_config.log_file,
                maxBytes=log_config.max_log_size_mb * 1024 * 1024,
                backupCount=log_config.backup_count
            )
            file_handler.setLevel(log_level)
            file_handler.setFormatter(formatter)
            file_handler._lvd_owned = True
            app_logger.addHandler(file_handler)

        cls._initialized = True

        app_logger.debug("Logging initialized")
        app_logger.debug(f"Log level: {logging.getLevelName(log_level)}")
        app_logger.debug(f"Log file: {log_config.log_file}")

        return app_logger

    @classmethod
    def reset_logging(cls) -> None:
        """Reset logging (mainly for testing)"""
        app_logger = logging.getLogger(ROOT_LOGGER_NAME)
        for handler in list(app_logger.handlers):
            if getattr(handler, '_lvd_owned', False):
                app_logger.removeHandler(handler)
                handler.close()
        cls._initialized = False


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance for a specific module

    Args:
        name: Name of the module (typically __name__)

    Returns:
        Logger instance under the application namespace
    """
    if not LoggerSetup._initialized:
        LoggerSetup.setup_logging()

    return logging.getLogger(f'{ROOT_LOGGER_NAME}.{name}')


class LoggerMixin:
    """Mixin class to add logging capabilities to any class"""

    @property
    def logger(self) -> logging.Logger:
        """Get logger for this class"""
        if not hasattr(self, '_logger'):
            self._logger = get_logger(self.__class__.__name__)
        return self._logger


# Context managers for logging

class log_execution_time:
    """Context manager to log execution time of a code block"""

    def __init__(self, description: str, logger: Optional[logging.Logger] = None):
        """
        Initialize execution time logger

        Args:
            description: Description of the operation
            logger: Logger to use (creates one if None)
        """
        self.description = description
        self.logger = logger or get_logger('performance')
        self.start_time = None
        self.elapsed = 0.0

    def __enter__(self):
        """Start timing"""
        self.start_time = time.perf_counter()
        self.logger.debug(f"Starting: {self.description}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """End timing and log result"""
        self.elapsed = time.perf_counter() - self.start_time

        if exc_type is None:
            self.logger.info(f"Completed: {self.description} in {self.elapsed:.3f}s")
        else:
            self.logger.error(f"Failed: {self.description} after {self.elapsed:.3f}s - {exc_val}")

        return False


class log_errors:
    """Context manager to log errors with context"""

    def __init__(self, operation: str, logger: Optional[logging.Logger] = None):
        """
        Initialize error logger

        Args:
            operation: Description of the operation
            logger: Logger to use (creates one if None)
        """
        self.operation = operation
        self.logger = logger or get_logger('errors')

    def __enter__(self):
        """Enter context"""
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Log any errors that occurred"""
        if exc_type is not None:
            self.logger.debug(
                f"Error during {self.operation}: {exc_type.__name__}: {exc_val}",
                exc_info=True
            )
        return False


# Decorators for logging

def log_method_call(func):
    """Decorator to log method calls on LoggerMixin classes"""

    @wraps(func)
    def wrapper(self, *args, **kwargs):
        if isinstance(self, LoggerMixin):
            logger = self.logger
        else:
            logger = get_logger(self.__class__.__name__)

        logger.debug(f"Calling {self.__class__.__name__}.{func.__name__}")

        try:
            result = func(self, *args, **kwargs)
            logger.debug(f"{func.__name__} completed successfully")
            return result
        except Exception as e:
            logger.debug(f"{func.__name__} raised {type(e).__name__}: {e}")
            raise

    return wrapper
