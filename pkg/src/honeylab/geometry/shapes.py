"""Standard disks: regular polygons and dense approximations of smooth disks."""

import math

import numpy as np

from ..errors import OutOfRangeError
from ..models.geometry import ConvexPolygon, NormDisk
from .polygon_ops import tidy


def regular_polygon(sides: int, inradius: float = 1.0, phase: float | None = None) -> ConvexPolygon:
    """Regular polygon circumscribed about the disk of radius ``inradius``.

    ``phase`` is the direction of the first outer edge normal; by default it
    points along +x, so the regular 2k-gon has the vertical edge ``x = inradius``.
    """
    if sides < 3:
        raise OutOfRangeError(f"a regular polygon needs at least 3 sides, got {sides}")
    if inradius <= 0:
        raise OutOfRangeError(f"inradius must be positive, got {inradius}")
    phase = 0.0 if phase is None else phase
    step = 2.0 * math.pi / sides
    angles = phase - step / 2 + step * np.arange(sides)
    radius = inradius / math.cos(math.pi / sides)
    return tidy(radius * np.column_stack([np.cos(angles), np.sin(angles)]))


def regular_norm(k: int, inradius: float = 1.0) -> NormDisk:
    """The regular 2k-gon circumscribed about the disk of radius ``inradius``, as a unit disk."""
    if k < 2:
        raise OutOfRangeError(f"k must be at least 2, got {k}")
    return NormDisk.from_polygon(regular_polygon(2 * k, inradius))


def _circle_points(vertices: int, circumradius: float) -> np.ndarray:
    theta = 2.0 * math.pi * np.arange(vertices) / vertices
    return circumradius * np.column_stack([np.cos(theta), np.sin(theta)])


def disk_approximation(vertices: int = 4096, circumradius: float = 1.0) -> NormDisk:
    """Regular polygon inscribed in the circle of radius ``circumradius``."""
    if vertices < 4 or vertices % 2:
        raise OutOfRangeError(f"disk approximation needs an even vertex count >= 4, got {vertices}")
    if circumradius <= 0:
        raise OutOfRangeError(f"circumradius must be positive, got {circumradius}")
    return NormDisk.from_polygon(tidy(_circle_points(vertices, circumradius)))


def ellipse_approximation(a: float, b: float, vertices: int = 4096) -> NormDisk:
    """Affine image of :func:`disk_approximation` with semi-axes ``a`` (x) and ``b`` (y)."""
    if a <= 0 or b <= 0:
        raise OutOfRangeError(f"semi-axes must be positive, got a={a}, b={b}")
    if vertices < 4 or vertices % 2:
        raise OutOfRangeError(f"ellipse approximation needs an even vertex count >= 4, got {vertices}")
    pts = _circle_points(vertices, 1.0) * np.array([a, b])
    return NormDisk.from_polygon(tidy(pts))


def square(half_side: float = 1.0) -> NormDisk:
    """The square ``[-h, h]^2``, unit disk of the maximum norm."""
    h = half_side
    return NormDisk.from_polygon(tidy(np.array([[-h, -h], [h, -h], [h, h], [-h, h]])))
