"""Nested square tilings whose square-window average of sides exceeds any bound.

Start from ``S = [-1, 1]^2``. Step A surrounds the block ``N S`` with four
rectangles of sides ``2N`` by ``4N`` in a pinwheel, giving ``3N S``. Step B
surrounds ``N S`` with a ring of ``4N + 4`` squares of side 2, giving
``(N + 2) S``. All corners are odd integers, so side counting is exact: a
cell has one side more for every corner of another cell lying inside one
of its edges.
"""

import logging

import numpy as np

from ..errors import OutOfRangeError
from ..models import CellGroup, SteinhausRun, TilingPatch, WindowShape

logger = logging.getLogger(__name__)

MAX_BLOCK = 10**7


def _step_a(N: int) -> np.ndarray:
    a = N
    return np.array(
        [
            [-a, -3 * a, 3 * a, -a],  # bottom
            [a, -a, 3 * a, 3 * a],  # right
            [-3 * a, a, a, 3 * a],  # top
            [-3 * a, -3 * a, -a, a],  # left
        ],
        dtype=np.int64,
    )


def _step_b(N: int) -> np.ndarray:
    row = np.arange(-N - 2, N + 1, 2, dtype=np.int64)
    col = np.arange(-N, N - 1, 2, dtype=np.int64)
    bottom = np.column_stack([row, np.full_like(row, -N - 2), row + 2, np.full_like(row, -N)])
    top = np.column_stack([row, np.full_like(row, N), row + 2, np.full_like(row, N + 2)])
    left = np.column_stack([np.full_like(col, -N - 2), col, np.full_like(col, -N), col + 2])
    right = np.column_stack([np.full_like(col, N), col, np.full_like(col, N + 2), col + 2])
    return np.vstack([bottom, right, top, left])


class SteinhausBuilder:
    """Axis-parallel rectangles ``(x0, y0, x1, y1)`` of the construction so far."""

    def __init__(self) -> None:
        self.rects = np.array([[-1, -1, 1, 1]], dtype=np.int64)
        self.N = 1
        self.schedule: list[str] = []

    def copy(self) -> "SteinhausBuilder":
        other = SteinhausBuilder()
        other.rects = self.rects.copy()
        other.N = self.N
        other.schedule = list(self.schedule)
        return other

    def step(self, kind: str) -> None:
        if kind == "A":
            self.rects = np.vstack([self.rects, _step_a(self.N)])
            self.N *= 3
        elif kind == "B":
            self.rects = np.vstack([self.rects, _step_b(self.N)])
            self.N += 2
        else:
            raise OutOfRangeError(f"unknown step {kind!r}, expected A or B")
        if self.N > MAX_BLOCK:
            raise OutOfRangeError(f"block size {self.N} exceeds {MAX_BLOCK}")
        self.schedule.append(kind)

    def side_counts(self) -> np.ndarray:
        """Edges per cell with split edges counted piecewise."""
        r = self.rects
        corners = np.vstack([r[:, [0, 1]], r[:, [2, 1]], r[:, [2, 3]], r[:, [0, 3]]])
        shift = int(np.abs(corners).max()) + 1
        base = 2 * shift + 1
        c = corners + shift
        rows = np.unique(c[:, 1] * base + c[:, 0])  # keyed by y, then x
        cols = np.unique(c[:, 0] * base + c[:, 1])  # keyed by x, then y
        x0, y0, x1, y1 = (r[:, i] + shift for i in range(4))

        def strictly_between(keys: np.ndarray, line: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
            left = np.searchsorted(keys, line * base + lo, side="right")
            right = np.searchsorted(keys, line * base + hi, side="left")
            return right - left

        extra = (
            strictly_between(rows, y0, x0, x1)
            + strictly_between(rows, y1, x0, x1)
            + strictly_between(cols, x0, y0, y1)
            + strictly_between(cols, x1, y0, y1)
        )
        return 4 + extra

    def patch(self) -> TilingPatch:
        r = self.rects.astype(float)
        vertices = np.stack(
            [r[:, [0, 1]], r[:, [2, 1]], r[:, [2, 3]], r[:, [0, 3]]],
            axis=1,
        )
        return TilingPatch(
            groups=[CellGroup(vertices=vertices, sides=self.side_counts())],
            window_R=float(self.N),
            window=WindowShape.SQUARE,
            meta={"generator": "steinhaus", "schedule": "".join(self.schedule), "N": self.N},
        )

    def square_average(self, R: float) -> float:
        """Mean side count of the cells inside ``[-R, R]^2``."""
        inside = np.abs(self.rects).max(axis=1) <= R
        return float(self.side_counts()[inside].mean())


def steinhaus_example_patch(schedule: list[str] | tuple[str, ...]) -> TilingPatch:
    """The construction after running ``schedule`` from ``S``."""
    if not schedule:
        raise OutOfRangeError("schedule must contain at least one step")
    builder = SteinhausBuilder()
    for kind in schedule:
        builder.step(kind.upper())
    patch = builder.patch()
    logger.debug(f"steinhaus {''.join(builder.schedule)}: {patch.cell_count} cells, N = {builder.N}")
    return patch


def steinhaus_schedule(nu: float, milestones: int, max_run: int = 8) -> SteinhausRun:
    """Greedy schedule pushing the square-window side average above ``nu`` at each milestone.

    Each milestone appends the shortest run of A-steps, then one B-step, for
    which the average at ``N + 1/2`` after the last A-step exceeds ``nu``.
    """
    if milestones < 1:
        raise OutOfRangeError(f"milestones must be positive, got {milestones}")
    builder = SteinhausBuilder()
    radii: list[float] = []
    values: list[float] = []
    for milestone in range(milestones):
        for run in range(1, max_run + 1):
            trial = builder.copy()
            for _ in range(run):
                trial.step("A")
            R = trial.N + 0.5
            trial.step("B")
            value = trial.square_average(R)
            if value > nu:
                break
        else:
            raise OutOfRangeError(f"nu = {nu:g} not exceeded within {max_run} A-steps")
        builder = trial
        radii.append(R)
        values.append(value)
        logger.info(f"milestone {milestone + 1}: N = {builder.N - 2}, average sides {value:.6f}")
    return SteinhausRun(schedule=builder.schedule, radii=radii, values=values, nu=nu)
