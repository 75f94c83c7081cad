"""Isoperimetrix command."""

import logging

from ..config import Settings
from ..geometry import isoperimetrix, read_norm
from ..geometry.io import polygon_document
from ..models import RunConfig
from .output import fmt, info, success
from .reporting import write_json, write_polygon_file
from .svg import render_polygons

logger = logging.getLogger(__name__)


def run_isoperimetrix(config: RunConfig, settings: Settings) -> int:
    """Compute the isoperimetrix of the unit disk in ``config.input``.

    Returns:
        Exit code (0 for success)
    """
    assert config.input is not None
    tol = settings.tolerance()
    M = read_norm(config.input, tol, settings.symmetry_rel)
    iso = isoperimetrix(M, tol)
    success(f"isoperimetrix of {config.input.name}: {iso.disk.size} vertices")
    info(f"area {fmt(iso.disk.area_value)}")

    if config.out:
        write_polygon_file(config.out, config, iso.disk)
    if config.json_out:
        write_json(
            config.json_out,
            config,
            {"edge_count": iso.disk.size, "area": iso.disk.area_value, **polygon_document(iso.disk)},
        )
    if config.svg:
        render_polygons(
            config.svg,
            [(M.disk, "M"), (iso.disk, "isoperimetrix")],
            title=config.input.stem,
            reproducible=config.reproducible,
        )
    return 0
