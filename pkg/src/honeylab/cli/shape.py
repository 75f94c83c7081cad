"""Shape command: write standard disks as polygon JSON."""

import logging

from ..config import Settings
from ..geometry import disk_approximation, ellipse_approximation, regular_polygon, square
from ..models import ConvexPolygon, RunConfig, ShapeKind
from .output import fmt, success
from .reporting import write_polygon_file

logger = logging.getLogger(__name__)


def build_shape(config: RunConfig, settings: Settings) -> ConvexPolygon:
    match config.kind:
        case ShapeKind.REGULAR:
            return regular_polygon(config.sides)
        case ShapeKind.DISK:
            return disk_approximation(settings.disk_vertices).disk
        case ShapeKind.ELLIPSE:
            return ellipse_approximation(config.a, config.b, settings.disk_vertices).disk
        case ShapeKind.SQUARE:
            return square().disk


def run_shape(config: RunConfig, settings: Settings) -> int:
    """Write the requested shape to ``config.out``.

    Returns:
        Exit code (0 for success)
    """
    polygon = build_shape(config, settings)
    assert config.out is not None
    write_polygon_file(config.out, config, polygon, kind=config.kind.value)
    success(f"{config.kind.value}: {polygon.size} vertices, area {fmt(polygon.area_value)} -> {config.out}")
    return 0
