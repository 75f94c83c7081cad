"""Gauge (Minkowski functional) of a polygonal unit disk, M-perimeter and isoperimetrix."""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..models.geometry import DEFAULT_TOLERANCE, ConvexPolygon, NormDisk, Point2, Tolerance
from .polygon_ops import edge_normals, edge_vectors, polar_dual, rotate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _GaugeTable:
    """Sorted vertex angles of M and, per vertex, the scaled normal of the edge it starts."""

    angles: np.ndarray
    rows: np.ndarray


@lru_cache(maxsize=64)
def _gauge_table(M: NormDisk) -> _GaugeTable:
    arr = M.array
    n, h = edge_normals(M.disk)
    angles = np.arctan2(arr[:, 1], arr[:, 0])
    order = np.argsort(angles, kind="stable")
    return _GaugeTable(angles=angles[order], rows=(n / h[:, None])[order])


def gauge_values(M: NormDisk, points: np.ndarray) -> np.ndarray:
    """Vectorized ``||p||_M`` for an ``(k, 2)`` array of points.

    The ray from the origin through ``p`` leaves M through the edge that
    starts at the last vertex whose polar angle does not exceed the angle of
    ``p``; the gauge is then ``<N, p> / h`` for that edge.
    """
    table = _gauge_table(M)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    phi = np.arctan2(pts[:, 1], pts[:, 0])
    idx = np.searchsorted(table.angles, phi, side="right") - 1
    idx %= len(table.angles)
    values = np.einsum("ij,ij->i", table.rows[idx], pts)
    # Rounding at sector boundaries can pick the neighbouring edge.
    alt = np.einsum("ij,ij->i", table.rows[(idx + 1) % len(table.angles)], pts)
    alt2 = np.einsum("ij,ij->i", table.rows[idx - 1], pts)
    return np.maximum(np.maximum(values, alt), np.maximum(alt2, 0.0))


def gauge_norm(M: NormDisk, p: Point2 | tuple[float, float]) -> float:
    """``inf{lambda > 0 : p in lambda M}``; zero exactly at the origin."""
    return float(gauge_values(M, np.asarray([tuple(p)], dtype=float))[0])


def m_perimeter(M: NormDisk, K: ConvexPolygon) -> float:
    """Perimeter of ``K`` measured in the norm with unit disk ``M``."""
    return float(gauge_values(M, edge_vectors(K)).sum())


def isoperimetrix(M: NormDisk, tol: Tolerance = DEFAULT_TOLERANCE) -> NormDisk:
    """The polar of ``M`` rotated by a quarter turn about the origin."""
    iso = rotate(polar_dual(M.disk, tol), math.pi / 2)
    logger.debug(f"isoperimetrix: {M.disk.size} vertices -> {iso.size} vertices")
    return NormDisk.from_polygon(iso)
