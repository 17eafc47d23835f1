"""
Logging configuration for fraclab runs: a rotating run log, an error log and,
in debug mode, the console.
"""

import logging
from datetime import datetime
from logging.handlers import RotatingFileHandler
from pathlib import Path

LOG_FORMAT = '[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s'
CONSOLE_FORMAT = '[%(asctime)s] %(levelname)s: %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'
MAX_LOG_BYTES = 10 * 1024 * 1024
LOG_BACKUPS = 5

_HANDLER_TAG = "_fraclab_handler"


def _rotating_handler(path: Path, level: int) -> RotatingFileHandler:
    handler = RotatingFileHandler(path, maxBytes=MAX_LOG_BYTES, backupCount=LOG_BACKUPS)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    return handler


def _drop_own_handlers(root: logging.Logger) -> None:
    for handler in list(root.handlers):
        if getattr(handler, _HANDLER_TAG, False):
            root.removeHandler(handler)
            handler.close()


def setup_logging(config):
    """
    Attach fraclab handlers to the root logger. Safe to call more than once.

    Args:
        config: Config class or instance with LOG_DIR and DEBUG

    Returns:
        Root logger
    """
    log_dir = Path(config.LOG_DIR)
    log_dir.mkdir(parents=True, exist_ok=True)

    root = logging.getLogger()
    root.setLevel(logging.DEBUG if config.DEBUG else logging.INFO)
    _drop_own_handlers(root)

    handlers = [
        _rotating_handler(log_dir / 'fraclab.log', logging.INFO),
        _rotating_handler(log_dir / 'errors.log', logging.ERROR),
    ]
    if config.DEBUG:
        console = logging.StreamHandler()
        console.setLevel(logging.DEBUG)
        console.setFormatter(logging.Formatter(CONSOLE_FORMAT, datefmt=DATE_FORMAT))
        handlers.append(console)

    for handler in handlers:
        setattr(handler, _HANDLER_TAG, True)
        root.addHandler(handler)

    get_app_logger().info(
        f"fraclab logging to {log_dir} at {datetime.now().strftime(DATE_FORMAT)} (debug={config.DEBUG})"
    )
    return root


def get_app_logger():
    return logging.getLogger('fraclab')


def log_experiment_event(kind, details, success=True, error=None):
    """
    One-line structured record of an experiment step.

    Args:
        kind: Step name (e.g. 'START', 'FINISH', 'WRITE_CSV')
        details: mapping rendered as key=value pairs
        success: False logs at ERROR
        error: optional error message
    """
    parts = [f"{kind} - {'SUCCESS' if success else 'FAILED'}"]
    if details:
        parts.append(", ".join(f"{k}={v}" for k, v in details.items()))
    if error:
        parts.append(f"Error: {error}")
    message = " | ".join(parts)

    logger = get_app_logger()
    if success:
        logger.info(message)
    else:
        logger.error(message)
