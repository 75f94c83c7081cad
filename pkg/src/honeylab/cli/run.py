"""Dispatch of a validated run configuration to its command."""

import logging
from collections.abc import Callable

from pydantic import ValidationError

from ..config import Settings
from ..errors import HoneylabError
from ..models import Command, RunConfig
from .circumscribe import run_circumscribe, run_dowker_table
from .dowker import run_dowker_check, run_honeycomb, run_stability, run_sweep
from .isoperimetrix import run_isoperimetrix
from .output import error
from .shape import run_shape
from .tiling import run_steinhaus, run_tiling

logger = logging.getLogger(__name__)

COMMANDS: dict[Command, Callable[[RunConfig, Settings], int]] = {
    Command.SHAPE: run_shape,
    Command.ISOPERIMETRIX: run_isoperimetrix,
    Command.CIRCUMSCRIBE: run_circumscribe,
    Command.DOWKER_TABLE: run_dowker_table,
    Command.DOWKER_CHECK: run_dowker_check,
    Command.HONEYCOMB: run_honeycomb,
    Command.STABILITY: run_stability,
    Command.SWEEP: run_sweep,
    Command.TILING: run_tiling,
    Command.STEINHAUS: run_steinhaus,
}


def run(config: RunConfig, settings: Settings | None = None) -> int:
    """Run one command.

    Returns:
        Exit code: 0 on success or a passed check, 1 on a failed check, 2 on error
    """
    settings = settings or Settings()
    if config.tol_rel is not None or config.tol_abs is not None:
        overrides = {"tol_rel": config.tol_rel, "tol_abs": config.tol_abs}
        settings = settings.model_copy(update={k: v for k, v in overrides.items() if v is not None})
    logger.info(f"Running {config.command.value}")
    try:
        return COMMANDS[config.command](config, settings)
    except (HoneylabError, ValidationError) as e:
        logger.debug("Command failed", exc_info=True)
        error(f"{config.command.value}: {e}")
        return 2
    except OSError as e:
        logger.debug("I/O failure", exc_info=True)
        error(f"{config.command.value}: {e.strerror or e} ({e.filename})")
        return 2
