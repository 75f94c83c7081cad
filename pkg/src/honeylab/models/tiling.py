"""Tiling patches and window-averaged statistics."""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any

import numpy as np

from .geometry import ConvexPolygon


class WindowShape(str, Enum):
    """Shape of the sampling window ``R * W``."""

    ROUND = "round"  # Euclidean disk of radius R
    SQUARE = "square"  # [-R, R]^2


class Proto(str, Enum):
    """Prototype of a lattice patch."""

    SQUARE = "square"
    TRIANGLE = "triangle"
    HEXAGON = "hexagon"
    CUSTOM = "custom"


class StatKind(str, Enum):
    """Per-cell statistic averaged over a window."""

    POWERED_PERIM = "powered_perim"  # perim_M(C) ** alpha
    LOG_PERIM = "log_perim"  # log perim_M(C)
    SIDES = "sides"  # v(C)
    ISO_RATIO = "iso_ratio"  # perim_M(C) ** 2 / area(C)


@dataclass(frozen=True)
class CustomPrototype:
    """A cell with two lattice vectors; ``reflect`` adds point-reflected copies."""

    polygon: ConvexPolygon
    v1: tuple[float, float]
    v2: tuple[float, float]
    reflect: bool = False


@dataclass
class CellGroup:
    """Cells sharing a vertex count ``k``: vertices ``(count, k, 2)`` and side counts ``(count,)``."""

    vertices: np.ndarray
    sides: np.ndarray

    @property
    def count(self) -> int:
        return len(self.vertices)


@dataclass
class TilingPatch:
    """Finite family of convex cells with the radius of its sampling window.

    Cells are stored grouped by vertex count; ``cells`` materializes them as
    polygons in group order. ``sides`` may exceed the vertex count where
    neighbouring corners split an edge.
    """

    groups: list[CellGroup]
    window_R: float
    window: WindowShape = WindowShape.ROUND
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def cell_count(self) -> int:
        return sum(g.count for g in self.groups)

    @cached_property
    def cells(self) -> list[ConvexPolygon]:
        return [ConvexPolygon.trusted(v) for g in self.groups for v in g.vertices]

    @cached_property
    def side_counts(self) -> np.ndarray:
        if not self.groups:
            return np.zeros(0, dtype=int)
        return np.concatenate([g.sides for g in self.groups])

    def window_radius(self, window: WindowShape | None = None) -> np.ndarray:
        """Smallest R with the cell inside ``R * W``, per cell in group order.

        ``window`` defaults to the patch's own window shape.
        """
        shape = window or self.window
        parts = []
        for g in self.groups:
            if shape is WindowShape.SQUARE:
                parts.append(np.abs(g.vertices).max(axis=(1, 2)))
            else:
                parts.append(np.linalg.norm(g.vertices, axis=2).max(axis=1))
        return np.concatenate(parts) if parts else np.zeros(0)


@dataclass
class AverageSeries:
    """Window averages of one statistic at increasing R."""

    R_values: list[float]
    counts: list[int]
    stat_values: list[float]
    stat_kind: StatKind
    alpha: float | None = None  # exponent for POWERED_PERIM

    def rows(self) -> list[tuple[float, int, float]]:
        return list(zip(self.R_values, self.counts, self.stat_values, strict=True))


@dataclass(frozen=True)
class NormalityConstants:
    """Uniform inradius / circumradius bounds of a patch and the neighbour bound they imply."""

    r_hat: float
    R_hat: float
    max_neighbors_bound: float
    max_neighbors: int
    aspect: float  # max over cells of circumradius / inradius

    @property
    def neighbors_ok(self) -> bool:
        return self.max_neighbors <= self.max_neighbors_bound


@dataclass(frozen=True)
class ChakerianGap:
    """``L^2 - 4 f F`` for a disk K in a normed plane."""

    L: float
    F: float
    f: float
    gap: float
    k_star: ConvexPolygon


@dataclass(frozen=True)
class PatchCheck:
    """Spot checks of a patch: coverage of sample points and disjointness of interiors."""

    samples: int
    uncovered: int
    overlapping: int

    @property
    def ok(self) -> bool:
        return self.uncovered == 0 and self.overlapping == 0


@dataclass
class SteinhausRun:
    """Schedule chosen by the greedy driver and the square-window side averages at its milestones."""

    schedule: list[str]
    radii: list[float]
    values: list[float]
    nu: float

    def rows(self) -> list[tuple[int, float, float]]:
        return [(i + 1, r, v) for i, (r, v) in enumerate(zip(self.radii, self.values, strict=True))]
