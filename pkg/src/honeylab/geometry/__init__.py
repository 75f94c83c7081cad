"""Planar convex geometry: polygon primitives, gauges and standard disks."""

from .gauge import gauge_norm, gauge_values, isoperimetrix, m_perimeter
from .io import parse_polygon, read_norm, read_polygon, write_polygon
from .polygon_ops import (
    area,
    canonicalize,
    circumradius,
    contains,
    edge_normals,
    edge_vectors,
    hausdorff_distance,
    inradius,
    inscribed_disk,
    is_regular,
    min_width,
    perimeter,
    polar_dual,
    polygon_contains,
    rotate,
    support_function,
    support_values,
    tidy,
)
from .shapes import (
    disk_approximation,
    ellipse_approximation,
    regular_norm,
    regular_polygon,
    square,
)

__all__ = [
    "area",
    "canonicalize",
    "circumradius",
    "contains",
    "disk_approximation",
    "edge_normals",
    "edge_vectors",
    "ellipse_approximation",
    "gauge_norm",
    "gauge_values",
    "hausdorff_distance",
    "inradius",
    "inscribed_disk",
    "is_regular",
    "isoperimetrix",
    "m_perimeter",
    "min_width",
    "parse_polygon",
    "perimeter",
    "polar_dual",
    "polygon_contains",
    "read_norm",
    "read_polygon",
    "regular_norm",
    "regular_polygon",
    "rotate",
    "square",
    "support_function",
    "support_values",
    "tidy",
    "write_polygon",
]
