"""Circumscribe and dowker-table commands."""

import logging

from ..config import Settings
from ..geometry import read_polygon
from ..geometry.io import polygon_document
from ..models import NormDisk, RunConfig
from ..services import CircumscribeService
from .output import fmt, header, info, success, table
from .reporting import write_json, write_polygon_file, write_table_csv
from .svg import render_polygons

logger = logging.getLogger(__name__)


def run_circumscribe(config: RunConfig, settings: Settings) -> int:
    """Least-area n-gon (o-symmetric with ``--symmetric``) about the disk in ``config.input``.

    Returns:
        Exit code (0 for success)
    """
    assert config.input is not None and config.n is not None
    tol = settings.tolerance()
    service = CircumscribeService.from_settings(settings)
    K = read_polygon(config.input, tol)
    if config.symmetric:
        result = service.min_area_symmetric_circumscribed(
            NormDisk.from_polygon(K, settings.symmetry_rel), config.n
        )
    else:
        result = service.min_area_circumscribed(K, config.n)

    success(f"A({config.n}) = {fmt(result.area_value)} ({result.strategy.value})")
    info(f"flush edges: {result.flush_edges}")
    if result.slack_side_used:
        info("one side touches K at a single vertex")

    if config.out:
        write_polygon_file(config.out, config, result.polygon)
    if config.json_out:
        write_json(config.json_out, config, {**result.to_dict(), **polygon_document(result.polygon)})
    if config.svg:
        render_polygons(
            config.svg,
            [(K, "K"), (result.polygon, f"n = {result.n}")],
            title=f"{config.input.stem}, area {fmt(result.area_value)}",
            reproducible=config.reproducible,
        )
    return 0


def run_dowker_table(config: RunConfig, settings: Settings) -> int:
    """Tabulate ``A_K(n)`` for ``n = 3..n_max``.

    Returns:
        Exit code (0 for success)
    """
    assert config.input is not None
    service = CircumscribeService.from_settings(settings)
    K = read_polygon(config.input, settings.tolerance())
    dowker = service.dowker_table(K, config.n_max, disk_id=config.input.stem)

    header(f"Dowker table of {config.input.name} ({dowker.strategy.value}, area {fmt(dowker.disk_area)})")
    table(("n", "A(n)"), [(n, dowker.value(n)) for n in dowker.ns])

    if config.csv:
        write_table_csv(config.csv, config, dowker)
    if config.json_out:
        write_json(config.json_out, config, dowker.model_dump(mode="json"))
    return 0
