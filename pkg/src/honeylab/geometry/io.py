"""Polygon JSON files: ``{"vertices": [[x, y], ...]}``."""

import json
import logging
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from ..errors import ParseError
from ..models.geometry import DEFAULT_TOLERANCE, ConvexPolygon, NormDisk, Tolerance
from .polygon_ops import canonicalize

logger = logging.getLogger(__name__)


class PolygonFile(BaseModel):
    """On-disk polygon; unknown keys (tool banner, config echo) are ignored."""

    model_config = ConfigDict(extra="ignore")

    vertices: list[tuple[float, float]]

    @field_validator("vertices")
    @classmethod
    def _enough_vertices(cls, v: list[tuple[float, float]]) -> list[tuple[float, float]]:
        if len(v) < 3:
            raise ValueError(f"polygon needs at least 3 vertices, got {len(v)}")
        return v


def parse_polygon(text: str, tol: Tolerance = DEFAULT_TOLERANCE) -> ConvexPolygon:
    """Parse and canonicalize polygon JSON text.

    Raises:
        ParseError: if the text is not valid polygon JSON.
        DegenerateInputError: if the vertices span no area.
    """
    try:
        data = PolygonFile.model_validate_json(text)
    except ValidationError as e:
        raise ParseError(f"invalid polygon JSON: {e.errors()[0]['msg']}") from e
    return canonicalize(data.vertices, tol)


def read_polygon(path: Path, tol: Tolerance = DEFAULT_TOLERANCE) -> ConvexPolygon:
    """Read a polygon file; the result is canonical whatever the file order."""
    polygon = parse_polygon(path.read_text(encoding="utf-8"), tol)
    logger.debug(f"Read {polygon.size}-gon from {path}")
    return polygon


def read_norm(
    path: Path, tol: Tolerance = DEFAULT_TOLERANCE, symmetry_rel: float = 1e-7
) -> NormDisk:
    """Read a polygon file and symmetrize it into a unit disk."""
    return NormDisk.from_polygon(read_polygon(path, tol), symmetry_rel)


def polygon_document(polygon: ConvexPolygon, **extra: Any) -> dict[str, Any]:
    """JSON-ready mapping with ``vertices`` first, followed by ``extra`` keys."""
    return {"vertices": [[p.x, p.y] for p in polygon.vertices], **extra}


def write_polygon(path: Path, polygon: ConvexPolygon, **extra: Any) -> None:
    """Write ``polygon`` in canonical vertex order."""
    path.write_text(json.dumps(polygon_document(polygon, **extra), indent=2) + "\n", encoding="utf-8")
    logger.debug(f"Wrote {polygon.size}-gon to {path}")
