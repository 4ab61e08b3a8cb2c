import logging
from .config import get_settings

settings = get_settings()

PACKAGE_LOGGER = "nozzle_solver"


def _configure(logger: logging.Logger) -> None:
    logger.setLevel(settings.LOG_LEVEL)

    # One console handler, shared by every module logger below the package
    handler = logging.StreamHandler()
    handler.setLevel(settings.LOG_LEVEL)
    handler.setFormatter(logging.Formatter(settings.LOG_FORMAT))
    logger.addHandler(handler)
    logger.propagate = False


def setup_logger(name: str) -> logging.Logger:
    """
    Return the logger for a module

    Loggers inside the package hand their records to the package logger, which owns
    the only handler; any other name gets a handler of its own.
    """
    root = logging.getLogger(PACKAGE_LOGGER)
    if not root.handlers:
        _configure(root)

    logger = logging.getLogger(name)
    if name != PACKAGE_LOGGER and not name.startswith(PACKAGE_LOGGER + ".") and not logger.handlers:
        _configure(logger)
    return logger


def set_verbosity(verbose: bool) -> None:
    """Switch the package logger between the configured level and DEBUG"""
    level = logging.DEBUG if verbose else settings.LOG_LEVEL
    root = logging.getLogger(PACKAGE_LOGGER)
    root.setLevel(level)
    for handler in root.handlers:
        handler.setLevel(level)
