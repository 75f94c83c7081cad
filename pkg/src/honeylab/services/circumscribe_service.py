"""Minimum-area circumscribed polygons and Dowker tables."""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING

import numpy as np

from ..errors import HoneylabError, InvalidNError, OddNError, OutOfRangeError
from ..geometry.polygon_ops import edge_normals, polygon_contains, tidy
from ..models import (
    DEFAULT_TOLERANCE,
    CircumscribeResult,
    ConvexPolygon,
    DowkerTable,
    NormDisk,
    Strategy,
    Tolerance,
)
from .ear_table import (
    CycleDP,
    EarTable,
    band_refine,
    cut_corner,
    minplus,
    polygon_from_lines,
    uniform_choice,
)

if TYPE_CHECKING:
    from ..config import Settings

logger = logging.getLogger(__name__)


def regular_akn(k: int, n: int) -> float:
    """``A_K(n)`` for the regular 2k-gon circumscribed about the unit disk, in closed form.

    Raises:
        OutOfRangeError: if ``k < 2`` or ``n`` is outside ``3..2k``.
    """
    if k < 2:
        raise OutOfRangeError(f"k must be at least 2, got {k}")
    if not 3 <= n <= 2 * k:
        raise OutOfRangeError(f"n must lie in 3..{2 * k}, got {n}")
    q, r = divmod(2 * k, n)
    if n >= 4:
        return (n - r) * math.tan(math.pi * q / (2 * k)) + r * math.tan(math.pi * (q + 1) / (2 * k))
    if r == 0:
        return 3.0 * math.tan(math.pi / 3.0)
    scale = 2.0 / math.cos(math.pi / (2 * k)) ** 2
    small, large = math.sin(q * math.pi / k), math.sin((q + 1) * math.pi / k)
    if r == 1:
        return scale * (2.0 * small + large)
    return scale * (small + 2.0 * large)


def disk_akn(n: int) -> float:
    """``n tan(pi / n)``, the least area of an n-gon about the unit disk."""
    if n < 3:
        raise OutOfRangeError(f"n must be at least 3, got {n}")
    return n * math.tan(math.pi / n)


def _midtriangle(table: EarTable, tol: Tolerance) -> tuple[float, np.ndarray] | None:
    """Smallest triangle whose side midpoints are vertices of K.

    The triangle with midpoint triangle ``(a, b, c)`` contains K exactly when
    each of ``a, b, c`` is a farthest vertex from the opposite side.
    """
    V = table.V
    diff = V[None, :, :] - V[:, None, :]
    D = diff[:, :, None, 0] * diff[:, None, :, 1] - diff[:, :, None, 1] * diff[:, None, :, 0]
    Mx = D.max(axis=2)
    slack = tol.allowance(table.diameter**2)
    valid = (
        (D > slack)
        & (D >= Mx[None, :, :] - slack)
        & (D >= Mx.T[:, None, :] - slack)
        & (D >= Mx[:, :, None] - slack)
    )
    if not valid.any():
        return None
    area = np.where(valid, 2.0 * D, np.inf)
    a, b, c = np.unravel_index(int(np.argmin(area)), area.shape)
    tri = np.array([V[b] + V[c] - V[a], V[c] + V[a] - V[b], V[a] + V[b] - V[c]])
    return float(area[a, b, c]), tri


def flush_pattern(Q: ConvexPolygon, table: EarTable, tol: Tolerance) -> list[int | None]:
    """For each side of ``Q``, the edge of K it contains, or ``None``."""
    normals, offsets = edge_normals(Q)
    slack = 10.0 * tol.allowance(table.diameter, float(np.abs(table.h).max()))
    pattern: list[int | None] = []
    for n, h in zip(normals, offsets, strict=True):
        dots = table.N @ n
        e = int(np.argmax(dots))
        aligned = dots[e] >= 1.0 - 1e-9 and abs(table.h[e] - h) <= slack
        pattern.append(e if aligned else None)
    return pattern


class CircumscribeService:
    """Solves ``A_K(n)`` by the flush/slack decomposition.

    Disks with at most ``exact_vertex_limit`` edges get the exact cyclic DP
    with one slack side. Denser disks (polygonal stand-ins for smooth disks)
    use flush sides only: a DP over a subsample of edges followed by band
    refinement on the full edge set.
    """

    def __init__(
        self,
        tol: Tolerance = DEFAULT_TOLERANCE,
        exact_vertex_limit: int = 128,
        band_width: int = 32,
    ) -> None:
        self.tol = tol
        self.exact_vertex_limit = exact_vertex_limit
        self.band_width = band_width

    @classmethod
    def from_settings(cls, settings: Settings) -> CircumscribeService:
        return cls(
            tol=settings.tolerance(),
            exact_vertex_limit=settings.exact_vertex_limit,
            band_width=settings.band_width,
        )

    def _is_exact(self, K: ConvexPolygon) -> bool:
        return K.size <= self.exact_vertex_limit

    def _identity(self, K: ConvexPolygon) -> CircumscribeResult:
        return CircumscribeResult(
            polygon=K,
            flush_edges=list(range(K.size)),
            slack_side_used=False,
            strategy=Strategy.IDENTITY,
        )

    def _result(
        self, Q: ConvexPolygon, table: EarTable, strategy: Strategy
    ) -> CircumscribeResult:
        if not polygon_contains(Q, table.K, self.tol):
            logger.warning(
                f"{strategy.value} {Q.size}-gon of area {Q.area_value:.12g} leaves part of K uncovered"
            )
            raise HoneylabError(f"circumscribed {Q.size}-gon does not contain K")
        pattern = flush_pattern(Q, table, self.tol)
        return CircumscribeResult(
            polygon=Q,
            flush_edges=pattern,
            slack_side_used=any(e is None for e in pattern),
            strategy=strategy,
        )

    # general circumscription

    def min_area_circumscribed(self, K: ConvexPolygon, n: int) -> CircumscribeResult:
        """A minimum-area convex n-gon circumscribed about ``K``.

        For ``n`` at least the edge count of ``K`` the answer is ``K`` itself.

        Raises:
            InvalidNError: if ``n < 3``.
        """
        if n < 3:
            raise InvalidNError(f"n must be at least 3, got {n}")
        if n >= K.size:
            return self._identity(K)
        table = EarTable(K)
        if self._is_exact(K):
            return self._exact(table, n)
        return self._dense(table, n)

    def _exact(self, table: EarTable, n: int) -> CircumscribeResult:
        dp = CycleDP(table.matrix(np.arange(table.m)), table.slack_matrix(self.tol))
        plan = dp.solve(n)
        normals, offsets = [], []
        for pos, side in enumerate(plan.sides):
            if side is None:
                before = plan.sides[pos - 1]
                after = plan.sides[(pos + 1) % len(plan.sides)]
                assert before is not None and after is not None
                line = table.slack_line(before, after)
                normals.append(line.normal)
                offsets.append(line.offset)
            else:
                normals.append(table.N[side])
                offsets.append(table.h[side])
        Q = polygon_from_lines(np.array(normals), np.array(offsets))
        if n == 3:
            mid = _midtriangle(table, self.tol)
            if mid is not None and mid[0] < Q.area_value - self.tol.allowance(Q.area_value):
                logger.debug(f"n = 3: midpoint triangle {mid[0]:.12g} beats {Q.area_value:.12g}")
                Q = tidy(mid[1])
        logger.debug(f"exact n = {n}: area {Q.area_value:.12g}")
        return self._result(Q, table, Strategy.EXACT)

    def _dense_inits(self, table: EarTable, n_top: int) -> dict[int, np.ndarray]:
        """Starting flush choices for every ``3 <= n <= n_top`` from a subsampled DP."""
        m = table.m
        step = math.ceil(m / self.exact_vertex_limit)
        subset = np.arange(0, m, step)
        inits: dict[int, np.ndarray] = {}
        reachable = min(n_top, len(subset) - 1, self.exact_vertex_limit // 2)
        if reachable >= 3:
            plans = CycleDP(table.matrix(subset)).solve_all(reachable)
            inits = {n: subset[np.array(plan.sides, dtype=np.int64)] for n, plan in plans.items()}
        for n in range(3, n_top + 1):
            if n not in inits:
                inits[n] = uniform_choice(table, n, m)
        return inits

    def _dense_chain(self, table: EarTable, n_top: int) -> dict[int, tuple[np.ndarray, float]]:
        """Refined flush choices and ear sums for every ``3 <= n <= n_top``.

        Each n also starts from the (n - 1) answer with one corner cut off, so
        the ear sums never increase with n.
        """
        inits = self._dense_inits(table, n_top)
        solved: dict[int, tuple[np.ndarray, float]] = {}
        for n in range(3, n_top + 1):
            starts = [np.sort(inits[n])]
            if n - 1 in solved:
                starts.append(cut_corner(table, solved[n - 1][0]))
            refined = [band_refine(table, start, table.m, self.band_width) for start in starts]
            solved[n] = min(refined, key=lambda item: item[1])
        return solved

    def _dense(self, table: EarTable, n: int) -> CircumscribeResult:
        chosen, _ = self._dense_chain(table, n)[n]
        Q = polygon_from_lines(table.N[chosen % table.m], table.h[chosen % table.m])
        logger.debug(f"dense n = {n}: area {Q.area_value:.12g}")
        return self._result(Q, table, Strategy.DENSE)

    # tables

    def dowker_table(self, K: ConvexPolygon, n_max: int, disk_id: str = "K") -> DowkerTable:
        """``A_K(n)`` for ``n = 3..n_max``.

        Raises:
            OutOfRangeError: if ``n_max < 6``.
        """
        if n_max < 6:
            raise OutOfRangeError(f"n_max must be at least 6, got {n_max}")
        m = K.size
        area = K.area_value
        n_top = min(n_max, m - 1)
        table = EarTable(K)
        found: dict[int, float] = {}
        if n_top >= 3:
            if self._is_exact(K):
                strategy = Strategy.EXACT
                dp = CycleDP(table.matrix(np.arange(m)), table.slack_matrix(self.tol))
                found = {n: area + s for n, s in dp.totals(n_top).items()}
                mid = _midtriangle(table, self.tol)
                if mid is not None:
                    found[3] = min(found[3], mid[0])
            else:
                strategy = Strategy.DENSE
                logger.warning(
                    f"{disk_id}: {m} edges exceeds the exact limit {self.exact_vertex_limit}; "
                    "using flush-only band refinement"
                )
                found = {n: area + ears for n, (_, ears) in self._dense_chain(table, n_top).items()}
        else:
            strategy = Strategy.IDENTITY

        values = np.array([found.get(n, area) if n < m else area for n in range(3, n_max + 1)])
        if not np.isfinite(values).all():
            raise HoneylabError(f"{disk_id}: some circumscribed polygons could not be found")
        slack = self.tol.allowance(area, *values)
        rising = np.flatnonzero(np.diff(values) > slack)
        if rising.size:
            n = int(rising[0]) + 3
            logger.warning(
                f"{disk_id}: A({n + 1}) = {values[n - 2]:.12g} exceeds A({n}) = {values[n - 3]:.12g}"
            )
            raise HoneylabError(f"{disk_id}: circumscribed areas increase from n = {n} to n = {n + 1}")
        for n, v in zip(range(3, n_max + 1), values, strict=True):
            logger.debug(f"{disk_id}: A({n}) = {v:.12g}")
        return DowkerTable(
            disk_id=disk_id,
            n_max=n_max,
            values=tuple(float(v) for v in values),
            disk_area=area,
            tol=self.tol,
            edge_count=m,
            strategy=strategy,
        )

    # origin-symmetric circumscription

    def min_area_symmetric_circumscribed(self, K: NormDisk, n: int) -> CircumscribeResult:
        """A minimum-area origin-symmetric n-gon circumscribed about ``K``, every side flush.

        Raises:
            OddNError: if ``n`` is odd.
            InvalidNError: if ``n < 4``.
        """
        if n % 2:
            raise OddNError(f"an origin-symmetric polygon has an even side count, got {n}")
        if n < 4:
            raise InvalidNError(f"n must be at least 4, got {n}")
        disk = K.disk
        if n >= disk.size:
            return self._identity(disk)
        table = EarTable(disk)
        m = table.m
        half = m // 2
        if self._is_exact(disk):
            cand = np.arange(m)
        else:
            picks = np.unique(np.round(np.linspace(0, half, self.exact_vertex_limit // 2, endpoint=False)))
            cand = np.concatenate([picks, picks + half]).astype(np.int64)
        chosen, ears = _symmetric_path(table, cand, n // 2)
        if not self._is_exact(disk):
            chosen, ears = band_refine(table, chosen, half, self.band_width)
        full = np.concatenate([chosen, chosen + half]) % m
        Q = polygon_from_lines(table.N[full], table.h[full])
        logger.debug(f"symmetric n = {n}: area {Q.area_value:.12g} (ears {2 * ears:.12g})")
        strategy = Strategy.EXACT if self._is_exact(disk) else Strategy.DENSE
        return self._result(Q, table, strategy)


def _symmetric_path(table: EarTable, cand: np.ndarray, steps: int) -> tuple[np.ndarray, float]:
    """Cheapest chain of ``steps`` ears from a candidate edge to its antipodal edge.

    ``cand`` is sorted and antipodally closed: ``cand[t + c/2] = cand[t] + m/2``.
    Positions are unrolled past ``m`` so every chain is increasing.
    """
    m = table.m
    c = len(cand)
    c_half = c // 2
    size = c + c_half
    unrolled = np.arange(size)
    edge = cand[unrolled % c]
    pos = edge + m * (unrolled // c)
    ears = table.ears(edge[:, None], edge[None, :])
    ears = np.where(pos[None, :] > pos[:, None], ears, np.inf)

    state = np.full((c_half, size), np.inf)
    state[np.arange(c_half), np.arange(c_half)] = 0.0
    parents = []
    for _ in range(steps):
        state, par = minplus(state, ears)
        parents.append(par)
    finals = state[np.arange(c_half), np.arange(c_half) + c_half]
    f = int(np.argmin(finals))
    best = float(finals[f])
    if not math.isfinite(best):
        raise HoneylabError(f"no origin-symmetric {2 * steps}-gon found")
    seq = []
    u = f + c_half
    for par in reversed(parents):
        u = int(par[f, u])
        seq.append(u)
    chosen = pos[np.array(seq[::-1], dtype=np.int64)]
    return chosen, best
