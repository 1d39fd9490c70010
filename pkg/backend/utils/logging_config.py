"""
Logging configuration for the Kummer/Enriques verifier.
Structured logging through structlog, rendered by stdlib handlers so that
third-party log records share one format.
"""

import functools
import logging
import logging.config
import os
import time
from typing import Any, Callable, Dict, List

import structlog


def _shared_processors() -> List[Callable]:
    """Processors applied to both structlog and foreign stdlib records"""
    return [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
    ]


def _configure_structlog() -> None:
    structlog.configure(
        processors=_shared_processors() + [
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.StackInfoRenderer(),
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


# Route structlog through stdlib even before setup_logging runs, so nothing
# is printed to stdout where reports are written.
_configure_structlog()


def setup_logging(
    level: str = "WARNING",
    log_file: str = None,
    structured: bool = False,
    enable_console: bool = True
) -> None:
    """
    Set up application logging configuration.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Path to log file (if None, only console logging)
        structured: Whether to render records as JSON
        enable_console: Whether to enable console logging (stderr)
    """
    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)

    config: Dict[str, Any] = {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'console': {
                '()': structlog.stdlib.ProcessorFormatter,
                'processors': [
                    structlog.stdlib.ProcessorFormatter.remove_processors_meta,
                    structlog.dev.ConsoleRenderer(colors=False),
                ],
                'foreign_pre_chain': _shared_processors(),
            },
            'structured': {
                '()': structlog.stdlib.ProcessorFormatter,
                'processors': [
                    structlog.stdlib.ProcessorFormatter.remove_processors_meta,
                    structlog.processors.format_exc_info,
                    structlog.processors.JSONRenderer(sort_keys=True),
                ],
                'foreign_pre_chain': _shared_processors(),
            },
        },
        'handlers': {},
        'root': {
            'level': level,
            'handlers': []
        },
        'loggers': {
            'sympy': {
                'level': 'WARNING',
                'handlers': [],
                'propagate': True
            }
        }
    }

    if enable_console:
        config['handlers']['console'] = {
            'class': 'logging.StreamHandler',
            'level': level,
            'formatter': 'structured' if structured else 'console',
            'stream': 'ext://sys.stderr'
        }
        config['root']['handlers'].append('console')

    if log_file:
        config['handlers']['file'] = {
            'class': 'logging.handlers.RotatingFileHandler',
            'level': level,
            'formatter': 'structured',
            'filename': log_file,
            'maxBytes': 10485760,  # 10MB
            'backupCount': 5,
            'encoding': 'utf8'
        }
        config['root']['handlers'].append('file')

    logging.config.dictConfig(config)


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """
    Get a structured logger with the given name.

    Args:
        name: Logger name (typically __name__)

    Returns:
        Bound structlog logger backed by the stdlib logger of that name
    """
    return structlog.get_logger(name)


class LoggingMixin:
    """Mixin class that provides logging capabilities to any class"""

    @property
    def logger(self) -> structlog.stdlib.BoundLogger:
        """Get logger for this class"""
        return get_logger(f"{self.__class__.__module__}.{self.__class__.__name__}")

    def log_operation(self, operation: str, **kwargs):
        """Log an operation with additional context"""
        self.logger.info("operation", operation=operation, **kwargs)


def log_performance(func):
    """Decorator to log function performance"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = get_logger(f"{func.__module__}.{func.__name__}")
        start_time = time.perf_counter()

        try:
            result = func(*args, **kwargs)
        except Exception as e:
            duration_ms = (time.perf_counter() - start_time) * 1000
            logger.error(
                "function_failed",
                operation=func.__name__,
                error=str(e),
                duration_ms=round(duration_ms, 2),
            )
            raise

        duration_ms = (time.perf_counter() - start_time) * 1000
        logger.debug(
            "function_completed",
            operation=func.__name__,
            duration_ms=round(duration_ms, 2),
        )
        return result

    return wrapper


def init_logging(level: str = None):
    """Initialize logging with environment-based configuration"""
    log_level = (level or os.getenv('LOG_LEVEL', 'WARNING')).upper()
    log_file = os.getenv('LOG_FILE')
    structured_logging = os.getenv('STRUCTURED_LOGGING', 'false').lower() == 'true'

    setup_logging(
        level=log_level,
        log_file=log_file,
        structured=structured_logging,
        enable_console=True
    )
