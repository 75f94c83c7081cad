"""Logging configuration for honeylab."""

import logging
import sys
from datetime import UTC, datetime
from pathlib import Path

from . import __version__

FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


class _OwnedHandler:
    """Marks handlers installed by ``setup_logging`` so a later call can replace them."""

    owned = True


class _StderrHandler(_OwnedHandler, logging.StreamHandler):
    pass


class _FileHandler(_OwnedHandler, logging.FileHandler):
    pass


def _drop_owned_handlers(logger: logging.Logger) -> None:
    for handler in [h for h in logger.handlers if getattr(h, "owned", False)]:
        logger.removeHandler(handler)
        handler.close()


def setup_logging(verbose: int = 0, log_file: Path | None = None, **context: object) -> None:
    """Configure the ``honeylab`` logger from the verbosity level and optional file output.

    Only the package logger is touched; numpy, scipy and matplotlib keep their own.
    Calling again (several ``main`` runs in one process) replaces the handlers of the
    previous call instead of stacking them.

    Args:
        verbose: Verbosity level (0=off, 1=INFO, 2+=DEBUG)
        log_file: Optional path to write logs to file
        **context: key=value pairs appended to the startup line (threads, tolerances)
    """
    logger = logging.getLogger("honeylab")
    _drop_owned_handlers(logger)
    if verbose == 0 and log_file is None:
        return

    level = logging.DEBUG if verbose >= 2 else logging.INFO
    logger.setLevel(level)
    formatter = logging.Formatter(FORMAT, datefmt=DATE_FORMAT)

    handlers: list[logging.Handler] = []
    if verbose > 0:
        handlers.append(_StderrHandler(sys.stderr))
    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(_FileHandler(log_file))
    for handler in handlers:
        handler.setLevel(level)
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    timestamp = datetime.now(UTC).strftime("%Y-%m-%d %H:%M:%S UTC")
    extras = "".join(f" | {k}={v}" for k, v in context.items())
    logger.info("=" * 60)
    logger.info(
        f"honeylab {__version__} starting | {timestamp} | level={logging.getLevelName(level)}{extras}"
    )
    logger.info("=" * 60)
