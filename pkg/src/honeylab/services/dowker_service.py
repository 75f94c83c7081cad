"""Convexity checks on Dowker tables and the honeycomb certificate pipeline."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING

from ..errors import InsufficientTableError, OutOfRangeError
from ..geometry import disk_approximation, hausdorff_distance, isoperimetrix, perimeter, regular_polygon
from ..models import (
    Conclusion,
    DowkerProperty,
    DowkerReport,
    DowkerTable,
    HoneycombCertificate,
    Margin,
    NormDisk,
    StabilityResult,
    SweepRow,
    TailBound,
    Tolerance,
)
from .circumscribe_service import CircumscribeService, disk_akn, regular_akn

if TYPE_CHECKING:
    from ..config import Settings

logger = logging.getLogger(__name__)

ALPHA_CAP = 4.0
ALPHA_WIDTH = 1e-6
CERTIFICATE_N_CAP = 64


def _powered(table: DowkerTable, alpha: float, ns: range) -> dict[int, float]:
    if alpha == 0:
        return {n: math.log(table.value(n)) for n in ns}
    return {n: table.value(n) ** alpha for n in ns}


def _threshold(table: DowkerTable, alpha: float) -> float:
    return 1e-9 * table.value(min(6, table.n_max)) ** max(alpha, 1.0)


def _report(
    prop: DowkerProperty,
    alpha: float,
    margins: list[Margin],
    threshold: float,
    truncated_at: int | None = None,
) -> DowkerReport:
    worst = min((m.value for m in margins), default=0.0)
    warnings = [
        f"borderline margin {m.value:.3g} at {m.witness}"
        for m in margins
        if m.value != 0 and abs(m.value) <= 10 * threshold
    ]
    for w in warnings:
        logger.warning(w)
    return DowkerReport(
        property=prop,
        alpha=alpha,
        verdict=worst >= -threshold,
        margins=margins,
        worst_margin=worst,
        threshold=threshold,
        warnings=warnings,
        truncated_at=truncated_at,
    )


def check_alpha_dowker(table: DowkerTable, alpha: float) -> DowkerReport:
    """Convexity of ``A^alpha`` (``log A`` when ``alpha == 0``) at every ``4 <= n <= n_max - 1``.

    Raises:
        InsufficientTableError: if the table stops before n = 6.
        OutOfRangeError: if ``alpha`` is negative.
    """
    if alpha < 0:
        raise OutOfRangeError(f"alpha must be nonnegative, got {alpha}")
    if table.n_max < 5:
        raise InsufficientTableError(f"alpha-Dowker check needs n up to 5, table stops at {table.n_max}")
    f = _powered(table, alpha, table.ns)
    margins = [
        Margin(witness=(n - 1, n, n + 1), value=f[n - 1] + f[n + 1] - 2 * f[n])
        for n in range(4, table.n_max)
    ]
    prop = DowkerProperty.LOG_DOWKER if alpha == 0 else DowkerProperty.ALPHA_DOWKER
    return _report(prop, alpha, margins, _threshold(table, alpha))


def _weak_range(table: DowkerTable) -> tuple[int, int | None]:
    """Largest n worth checking and, when the table ends first, where it was cut."""
    if table.edge_count is None:
        return table.n_max, None
    if table.edge_count <= table.n_max:
        return max(7, table.edge_count), None
    return table.n_max, table.n_max


def _weak_margins(table: DowkerTable, alpha: float, n_hi: int) -> list[Margin]:
    f = _powered(table, alpha, range(3, n_hi + 1))
    return [
        Margin(
            witness=(m, 6, n),
            value=(n - 6) / (n - m) * f[m] + (6 - m) / (n - m) * f[n] - f[6],
        )
        for m in (3, 4, 5)
        for n in range(7, n_hi + 1)
    ]


def check_weak_alpha_dowker(table: DowkerTable, alpha: float) -> DowkerReport:
    """The weak property: chord inequalities across 6 for ``m in {3, 4, 5}``, ``6 < n``.

    For a polygon the values are constant from its edge count on, so ``n``
    stops there; when the table ends earlier the report records the
    truncation.

    Raises:
        InsufficientTableError: if the table stops before n = 7.
    """
    if alpha < 0:
        raise OutOfRangeError(f"alpha must be nonnegative, got {alpha}")
    if table.n_max < 7:
        raise InsufficientTableError(
            f"weak Dowker check needs n up to 7, table stops at {table.n_max}"
        )
    n_hi, truncated_at = _weak_range(table)
    if truncated_at is not None:
        logger.warning(
            f"{table.disk_id}: weak check truncated at n = {table.n_max} "
            f"(disk has {table.edge_count} edges)"
        )
    margins = _weak_margins(table, alpha, n_hi)
    prop = DowkerProperty.WEAK_LOG_DOWKER if alpha == 0 else DowkerProperty.WEAK_ALPHA_DOWKER
    report = _report(prop, alpha, margins, _threshold(table, alpha), truncated_at)
    logger.info(
        f"{table.disk_id}: weak alpha={alpha:g} verdict={report.verdict} "
        f"worst={report.worst_margin:.6g}"
    )
    return report


def estimate_min_weak_alpha(table: DowkerTable) -> float | None:
    """Smallest ``alpha`` in ``[0, 4]`` passing the weak check, by bisection to 1e-6.

    ``None`` when even ``alpha = 4`` fails.
    """
    if table.n_max < 7:
        raise InsufficientTableError(f"table stops at {table.n_max}, need n up to 7")
    n_hi, _ = _weak_range(table)

    def passes(alpha: float) -> bool:
        worst = min(m.value for m in _weak_margins(table, alpha, n_hi))
        return worst >= -_threshold(table, alpha)

    if passes(0.0):
        return 0.0
    if not passes(ALPHA_CAP):
        return None
    lo, hi = 0.0, ALPHA_CAP
    while hi - lo > ALPHA_WIDTH:
        mid = 0.5 * (lo + hi)
        if passes(mid):
            hi = mid
        else:
            lo = mid
    logger.info(f"{table.disk_id}: minimal weak alpha ~ {hi:.6f}")
    return hi


def log_convexity_scan(table: DowkerTable, n_from: int, n_to: int) -> list[Margin]:
    """``log A(n-1) + log A(n+1) - 2 log A(n)`` for ``n_from <= n <= n_to``."""
    if n_from > n_to:
        raise OutOfRangeError(f"empty scan range {n_from}..{n_to}")
    if not table.covers(n_from - 1, n_to + 1):
        raise InsufficientTableError(
            f"scan {n_from}..{n_to} needs n = {n_from - 1}..{n_to + 1}, "
            f"table covers {table.n_min}..{table.n_max}"
        )
    logs = {n: math.log(table.value(n)) for n in range(n_from - 1, n_to + 2)}
    return [
        Margin(witness=(n - 1, n, n + 1), value=logs[n - 1] + logs[n + 1] - 2 * logs[n])
        for n in range(n_from, n_to + 1)
    ]


def stability_epsilon0() -> float:
    """Radius of the Hausdorff ball around the Euclidean disk certified by the (5, 6, 7) gap."""
    s5, s6, s7 = (math.sqrt(disk_akn(n)) for n in (5, 6, 7))
    return (s5 + s7 - 2 * s6) / (s5 + s7 + 2 * s6)


def stability_sandwich(eps: float, n: int) -> tuple[float, float]:
    """Bounds on ``A_{M_iso}(n)`` for ``(1 - eps) B <= M <= (1 + eps) B``."""
    if not 0 <= eps < 1:
        raise OutOfRangeError(f"eps must lie in [0, 1), got {eps}")
    a = disk_akn(n)
    return a / (1 + eps) ** 2, a / (1 - eps) ** 2


def regular_tail_bound(k: int) -> TailBound:
    """Table-free test of the weak 1/2-Dowker inequality for the regular 2k-gon.

    Any circumscribed polygon of the unit disk has at least the disk's
    area, so ``sqrt(A(k, 6))`` at or below the disk's (5, 7) chord value is enough.
    """
    a6 = regular_akn(k, min(6, 2 * k))
    floor = 0.5 * (math.sqrt(disk_akn(5)) + math.sqrt(disk_akn(7)))
    return TailBound(k=k, a6=a6, lhs_floor=floor, holds=math.sqrt(a6) <= floor)


class DowkerService:
    """Pipelines built on circumscription: certificates, stability gate and sweeps."""

    def __init__(
        self,
        circumscribe: CircumscribeService | None = None,
        threads: int = 1,
        disk_vertices: int = 4096,
        hausdorff_grid: int = 4096,
    ) -> None:
        self.circumscribe = circumscribe or CircumscribeService()
        self.threads = threads
        self.disk_vertices = disk_vertices
        self.hausdorff_grid = hausdorff_grid

    @classmethod
    def from_settings(cls, settings: Settings) -> DowkerService:
        return cls(
            circumscribe=CircumscribeService.from_settings(settings),
            threads=settings.threads,
            disk_vertices=settings.disk_vertices,
            hausdorff_grid=settings.hausdorff_grid,
        )

    @property
    def tol(self) -> Tolerance:
        return self.circumscribe.tol

    def honeycomb_certificate(
        self, M: NormDisk, alpha: float, norm_id: str = "M"
    ) -> HoneycombCertificate:
        """Isoperimetrix, its Dowker table and the weak alpha-Dowker check.

        A failed check yields NOT_CERTIFIED, which is not a disproof.
        """
        iso = isoperimetrix(M, self.tol)
        edges = iso.disk.size
        n_max = max(edges, 7)
        if n_max > CERTIFICATE_N_CAP:
            logger.warning(f"{norm_id}: table capped at n = {CERTIFICATE_N_CAP} ({edges} edges)")
            n_max = CERTIFICATE_N_CAP
        logger.info(f"{norm_id}: isoperimetrix has {edges} edges; tabulating n = 3..{n_max}")
        table = self.circumscribe.dowker_table(iso.disk, n_max, disk_id=f"{norm_id}_iso")
        report = check_weak_alpha_dowker(table, alpha)
        a6 = table.value(6)
        bound = 0.5 * math.log(4 * a6) if alpha == 0 else (4 * a6) ** alpha
        hexagon = None
        conclusion = Conclusion.NOT_CERTIFIED
        if report.verdict:
            conclusion = Conclusion.CERTIFIED_2ALPHA_HONEYCOMB
            hexagon = self.circumscribe.min_area_symmetric_circumscribed(iso, 6).polygon
        logger.info(f"{norm_id}: {conclusion.value} at alpha={alpha:g}")
        return HoneycombCertificate(
            norm_id=norm_id,
            alpha=alpha,
            iso_table=table,
            weak_report=report,
            conclusion=conclusion,
            hexagon=hexagon,
            bound_value=bound,
        )

    def check_stability_gate(self, M: NormDisk) -> StabilityResult:
        """Hausdorff distance to the unit disk after scaling M's mean support value to 1."""
        disk = disk_approximation(self.disk_vertices).disk
        scale = 2 * math.pi / perimeter(M.disk)
        raw = hausdorff_distance(M.disk, disk, self.hausdorff_grid)
        distance = hausdorff_distance(M.disk.scaled(scale), disk, self.hausdorff_grid)
        eps0 = stability_epsilon0()
        logger.info(f"stability: distance {distance:.6g} vs eps0 {eps0:.6g}")
        return StabilityResult(
            distance=distance,
            certified=distance <= eps0,
            epsilon0=eps0,
            raw_distance=raw,
            scale=scale,
        )

    def _sweep_row(self, k: int, alpha: float) -> SweepRow:
        K = regular_polygon(2 * k)
        table = self.circumscribe.dowker_table(K, max(2 * k, 7), disk_id=f"regular-{2 * k}")
        report = check_weak_alpha_dowker(table, alpha)
        worst = report.worst
        return SweepRow(
            k=k,
            verdict=report.verdict,
            worst_margin=report.worst_margin,
            witness=worst.witness if worst else None,
            tail_holds=regular_tail_bound(k).holds,
        )

    def regular_gon_sweep(self, k_min: int, k_max: int, alpha: float) -> list[SweepRow]:
        """Weak alpha-Dowker verdicts for the regular 2k-gons, ``k_min <= k <= k_max``, in order of k."""
        if not 2 <= k_min <= k_max <= 64:
            raise OutOfRangeError(f"need 2 <= k_min <= k_max <= 64, got {k_min}..{k_max}")
        ks = range(k_min, k_max + 1)
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            rows = list(pool.map(lambda k: self._sweep_row(k, alpha), ks))
        failing = [r.k for r in rows if not r.verdict]
        logger.info(f"sweep k={k_min}..{k_max}, alpha={alpha:g}: failing k = {failing}")
        return rows
