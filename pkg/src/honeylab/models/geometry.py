"""Planar geometry models: points, tolerances, convex polygons and unit disks."""

import math
from functools import cached_property
from typing import NamedTuple, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..errors import AsymmetricDiskError


class Point2(NamedTuple):
    """A point (or direction) of the plane."""

    x: float
    y: float


class Tolerance(BaseModel):
    """Relative and absolute tolerances threaded through every comparison."""

    model_config = ConfigDict(frozen=True)

    rel: float = 1e-9
    abs: float = 1e-12

    @model_validator(mode="after")
    def _ordered(self) -> Self:
        if not (0 < self.abs <= self.rel < 1e-3):
            raise ValueError(
                f"tolerance must satisfy 0 < abs <= rel < 1e-3, got rel={self.rel} abs={self.abs}"
            )
        return self

    def allowance(self, *magnitudes: float) -> float:
        """Slack for a comparison between quantities of the given magnitudes."""
        scale = max((abs(m) for m in magnitudes), default=0.0)
        return max(self.abs, self.rel * scale)

    def close(self, a: float, b: float) -> bool:
        """Whether ``a`` and ``b`` agree within tolerance."""
        return abs(a - b) <= self.allowance(a, b)


DEFAULT_TOLERANCE = Tolerance()


def _turns(arr: np.ndarray) -> np.ndarray:
    """Cross product of consecutive edge vectors at every vertex (index = vertex)."""
    prev = arr - np.roll(arr, 1, axis=0)
    nxt = np.roll(arr, -1, axis=0) - arr
    return prev[:, 0] * nxt[:, 1] - prev[:, 1] * nxt[:, 0]


class ConvexPolygon(BaseModel):
    """Strictly convex polygon with counterclockwise vertices.

    The universal carrier for disks K, unit disks M, tiling cells and
    circumscribed polygons.
    """

    model_config = ConfigDict(frozen=True)

    vertices: tuple[Point2, ...]

    @field_validator("vertices")
    @classmethod
    def _at_least_three(cls, v: tuple[Point2, ...]) -> tuple[Point2, ...]:
        if len(v) < 3:
            raise ValueError(f"a polygon needs at least 3 vertices, got {len(v)}")
        if not all(math.isfinite(p.x) and math.isfinite(p.y) for p in v):
            raise ValueError("vertex coordinates must be finite")
        return v

    @model_validator(mode="after")
    def _strictly_convex(self) -> Self:
        arr = self.array
        span = float(np.ptp(arr, axis=0).max())
        floor = DEFAULT_TOLERANCE.abs * span * span
        if np.any(_turns(arr) <= floor):
            raise ValueError("vertices must make strict counterclockwise left turns")
        if self.area_value <= 0:
            raise ValueError("polygon area must be positive")
        return self

    @classmethod
    def trusted(cls, arr: np.ndarray) -> "ConvexPolygon":
        """Wrap an array already known to be strictly convex and counterclockwise."""
        return cls.model_construct(vertices=tuple(Point2(float(x), float(y)) for x, y in arr))

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.vertices, dtype=float)
        arr.flags.writeable = False
        return arr

    @cached_property
    def area_value(self) -> float:
        x, y = self.array[:, 0], self.array[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    @property
    def size(self) -> int:
        return len(self.vertices)

    @cached_property
    def diameter(self) -> float:
        arr = self.array
        best = 0.0
        for start in range(0, len(arr), 512):
            diff = arr[start : start + 512, None, :] - arr[None, :, :]
            best = max(best, float(np.einsum("ijk,ijk->ij", diff, diff).max()))
        return math.sqrt(best)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConvexPolygon):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def scaled(self, factor: float) -> "ConvexPolygon":
        return ConvexPolygon.trusted(self.array * factor)

    def translated(self, offset: Point2 | np.ndarray) -> "ConvexPolygon":
        return ConvexPolygon.trusted(self.array + np.asarray(offset, dtype=float))


class NormDisk(BaseModel):
    """Origin-symmetric convex polygon serving as the unit disk of a normed plane."""

    model_config = ConfigDict(frozen=True)

    disk: ConvexPolygon

    @model_validator(mode="after")
    def _origin_symmetric(self) -> Self:
        arr = self.disk.array
        m = len(arr)
        if m % 2:
            raise ValueError(f"an origin-symmetric polygon has an even vertex count, got {m}")
        mismatch = float(np.abs(arr + np.roll(arr, -m // 2, axis=0)).max())
        if mismatch > 1e-9 * self.disk.diameter:
            raise ValueError(f"polygon is not origin-symmetric (antipodal mismatch {mismatch:.3g})")
        return self

    @classmethod
    def from_polygon(cls, polygon: ConvexPolygon, symmetry_rel: float = 1e-7) -> "NormDisk":
        """Symmetrize ``polygon`` by averaging antipodal vertex pairs.

        Raises:
            AsymmetricDiskError: if the antipodal mismatch exceeds
                ``symmetry_rel`` times the diameter.
        """
        arr = polygon.array
        m = len(arr)
        if m % 2:
            raise AsymmetricDiskError(f"unit disk must have an even vertex count, got {m}")
        half = m // 2
        mismatch = float(np.abs(arr[:half] + arr[half:]).max())
        if mismatch > symmetry_rel * polygon.diameter:
            raise AsymmetricDiskError(
                f"antipodal mismatch {mismatch:.3g} exceeds {symmetry_rel:g} x diameter"
            )
        w = 0.5 * (arr[:half] - arr[half:])
        return cls(disk=ConvexPolygon.trusted(np.vstack([w, -w])))

    @property
    def array(self) -> np.ndarray:
        return self.disk.array
