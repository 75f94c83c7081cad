"""Tests for Dowker checks, honeycomb certificates, the stability gate and sweeps."""

import math

import pytest

from honeylab.errors import InsufficientTableError, OutOfRangeError
from honeylab.geometry import disk_approximation, regular_norm, regular_polygon, square
from honeylab.models import Conclusion, DowkerProperty, DowkerTable
from honeylab.services import (
    CircumscribeService,
    DowkerService,
    check_alpha_dowker,
    check_weak_alpha_dowker,
    disk_akn,
    estimate_min_weak_alpha,
    log_convexity_scan,
    regular_akn,
    regular_tail_bound,
    stability_epsilon0,
    stability_sandwich,
)


def _regular_table(k: int, n_max: int | None = None) -> DowkerTable:
    n_max = n_max or max(2 * k, 7)
    return CircumscribeService().dowker_table(regular_polygon(2 * k), n_max, disk_id=f"regular-{2 * k}")


@pytest.fixture
def octagon_table() -> DowkerTable:
    """Dowker table of the regular octagon about the unit disk."""
    return _regular_table(4)


@pytest.fixture
def disk_table() -> DowkerTable:
    """Closed-form table of the Euclidean disk, n = 3..20."""
    return DowkerTable(
        disk_id="disk",
        n_max=20,
        values=tuple(disk_akn(n) for n in range(3, 21)),
        disk_area=math.pi,
    )


class TestAlphaDowker:
    """Tests for check_alpha_dowker and log_convexity_scan."""

    def test_disk_is_log_dowker(self, disk_table: DowkerTable):
        """n tan(pi/n) is log-convex."""
        report = check_alpha_dowker(disk_table, 0.0)
        assert report.property is DowkerProperty.LOG_DOWKER
        assert report.verdict
        assert report.worst_margin > 0

    def test_area_sequence_is_convex(self, octagon_table: DowkerTable):
        """With alpha = 1 every convex disk passes."""
        assert check_alpha_dowker(octagon_table, 1.0).verdict

    def test_square_root_fails_on_linear_stretch(self):
        """For the 12-gon, A is linear on 6..12, so its square root is strictly concave there."""
        report = check_alpha_dowker(_regular_table(6, n_max=14), 0.5)
        assert not report.verdict
        margins = {m.witness[1]: m.value for m in report.margins}
        assert margins[10] < 0
        assert margins[12] > 0

    def test_margins_cover_interior_n(self, octagon_table: DowkerTable):
        """One second difference per 4 <= n <= n_max - 1."""
        report = check_alpha_dowker(octagon_table, 0.5)
        assert [m.witness for m in report.margins] == [(n - 1, n, n + 1) for n in range(4, 8)]

    def test_short_table_raises(self):
        """Convexity needs values up to n = 5."""
        short = DowkerTable(disk_id="short", n_max=4, values=(8.0, 4.0), disk_area=4.0)
        with pytest.raises(InsufficientTableError):
            check_alpha_dowker(short, 1.0)

    def test_negative_alpha(self, octagon_table: DowkerTable):
        """alpha must be nonnegative."""
        with pytest.raises(OutOfRangeError):
            check_alpha_dowker(octagon_table, -0.5)

    def test_log_convexity_scan(self, disk_table: DowkerTable):
        """Second differences of log A are positive for the disk."""
        margins = log_convexity_scan(disk_table, 5, 18)
        assert len(margins) == 14
        assert all(m.value > 0 for m in margins)

    def test_log_convexity_scan_needs_neighbours(self, disk_table: DowkerTable):
        """The scan reads A(n_to + 1)."""
        with pytest.raises(InsufficientTableError):
            log_convexity_scan(disk_table, 5, 20)


class TestWeakAlphaDowker:
    """Tests for check_weak_alpha_dowker and estimate_min_weak_alpha."""

    def test_octagon_fails_at_one_half(self, octagon_table: DowkerTable):
        """The (5, 6, 7) chord of sqrt(A) dips below the hexagon value."""
        report = check_weak_alpha_dowker(octagon_table, 0.5)
        assert not report.verdict
        margin = next(m.value for m in report.margins if m.witness == (5, 6, 7))
        expected = 0.5 * (math.sqrt(regular_akn(4, 5)) + math.sqrt(regular_akn(4, 7))) - math.sqrt(
            regular_akn(4, 6)
        )
        assert margin == pytest.approx(expected, abs=1e-10)
        assert -6e-4 < margin < -4e-4

    def test_hexagon_passes(self):
        """Beyond n = 6 the hexagon's values stay at its own area."""
        report = check_weak_alpha_dowker(_regular_table(3), 0.5)
        assert report.verdict
        assert report.property is DowkerProperty.WEAK_ALPHA_DOWKER

    def test_witnesses_straddle_six(self, octagon_table: DowkerTable):
        """m ranges over 3, 4, 5 and n over 7..8 for the octagon."""
        report = check_weak_alpha_dowker(octagon_table, 1.0)
        assert {m.witness for m in report.margins} == {(m, 6, n) for m in (3, 4, 5) for n in (7, 8)}

    def test_truncation_is_reported(self):
        """A table shorter than the edge count is checked as far as it goes."""
        table = _regular_table(6, n_max=9)
        report = check_weak_alpha_dowker(table, 1.0)
        assert report.truncated_at == 9
        assert report.to_dict()["truncated_at"] == 9

    def test_short_table_raises(self):
        """The weak property needs n = 7."""
        table = DowkerTable(disk_id="t", n_max=6, values=(8.0, 4.0, 4.0, 4.0), disk_area=4.0)
        with pytest.raises(InsufficientTableError):
            check_weak_alpha_dowker(table, 0.5)

    def test_report_dict(self, octagon_table: DowkerTable):
        """The JSON form names the worst inequality."""
        data = check_weak_alpha_dowker(octagon_table, 0.5).to_dict()
        assert data["verdict"] is False
        assert data["worst_witness"] == [4, 6, 8]
        assert data["property"] == "weak"

    def test_min_alpha_of_disk(self, disk_table: DowkerTable):
        """The disk already passes the weak log property."""
        assert estimate_min_weak_alpha(disk_table) == pytest.approx(0.0, abs=1e-6)

    def test_min_alpha_of_octagon(self, octagon_table: DowkerTable):
        """One half fails and one passes."""
        alpha = estimate_min_weak_alpha(octagon_table)
        assert alpha is not None
        assert 0.5 < alpha <= 1.0 + 1e-6

    def test_min_alpha_of_hexagon(self):
        """Every alpha passes for the hexagon."""
        assert estimate_min_weak_alpha(_regular_table(3)) == 0.0


class TestConstants:
    """Tests for the stability constants and the tail bound."""

    def test_epsilon0(self):
        """The certified Hausdorff radius."""
        assert round(stability_epsilon0(), 6) == 0.002623

    def test_sandwich(self):
        """The bounds collapse at eps = 0 and widen with eps."""
        lo, hi = stability_sandwich(0.0, 6)
        assert lo == pytest.approx(2 * math.sqrt(3))
        assert hi == pytest.approx(2 * math.sqrt(3))
        lo, hi = stability_sandwich(0.01, 6)
        assert lo < 2 * math.sqrt(3) < hi

    def test_sandwich_range(self):
        """eps must lie in [0, 1)."""
        with pytest.raises(OutOfRangeError):
            stability_sandwich(1.0, 6)

    def test_tail_bound(self):
        """The table-free test holds for k = 9 and not for the octagon."""
        assert regular_tail_bound(9).holds
        assert not regular_tail_bound(4).holds
        assert regular_tail_bound(9).a6 == pytest.approx(2 * math.sqrt(3))


class TestDowkerService:
    """Tests for DowkerService pipelines."""

    @pytest.fixture
    def service(self) -> DowkerService:
        """Service with a coarser disk to keep the stability gate quick."""
        return DowkerService(disk_vertices=1024, hausdorff_grid=1024)

    def test_twelve_gon_is_certified(self, service: DowkerService):
        """The regular 12-gon norm has the honeycomb property at alpha = 1/2."""
        cert = service.honeycomb_certificate(regular_norm(6), 0.5, norm_id="12-gon")
        assert cert.conclusion is Conclusion.CERTIFIED_2ALPHA_HONEYCOMB
        assert cert.hexagon is not None
        assert cert.hexagon.area_value == pytest.approx(cert.iso_table.value(6), rel=1e-9)
        assert cert.bound_value == pytest.approx(math.sqrt(4 * cert.iso_table.value(6)))

    def test_decagon_is_not_certified(self, service: DowkerService):
        """A failed weak check is reported as NOT_CERTIFIED."""
        cert = service.honeycomb_certificate(regular_norm(5), 0.5)
        assert cert.conclusion is Conclusion.NOT_CERTIFIED
        assert cert.hexagon is None
        assert cert.to_dict()["conclusion"] == "NOT_CERTIFIED"

    def test_square_is_certified(self, service: DowkerService):
        """The max norm passes: its isoperimetrix is a diamond."""
        cert = service.honeycomb_certificate(square(), 0.5)
        assert cert.certified
        assert cert.iso_table.n_max == 7

    def test_log_bound(self, service: DowkerService):
        """At alpha = 0 the bound is on the mean log-perimeter."""
        cert = service.honeycomb_certificate(regular_norm(6), 0.0)
        assert cert.bound_value == pytest.approx(0.5 * math.log(4 * cert.iso_table.value(6)))

    def test_euclidean_disk_passes_stability_gate(self, service: DowkerService):
        """The disk is at distance ~0 from itself."""
        result = service.check_stability_gate(disk_approximation(1024))
        assert result.certified
        assert result.distance < 1e-5

    def test_square_fails_stability_gate(self, service: DowkerService):
        """After rescaling, the edge midpoints are ~0.2146 inside the circle."""
        result = service.check_stability_gate(square())
        assert not result.certified
        assert result.scale == pytest.approx(math.pi / 4)
        assert result.distance == pytest.approx(1 - math.pi / 4, abs=1e-4)
        assert result.raw_distance == pytest.approx(math.sqrt(2) - 1, abs=1e-4)

    def test_small_sweep(self, service: DowkerService):
        """Regular 2k-gons fail at k = 4, 5, 7 among k = 2..9."""
        rows = service.regular_gon_sweep(2, 9, 0.5)
        assert [r.k for r in rows] == list(range(2, 10))
        assert [r.k for r in rows if not r.verdict] == [4, 5, 7]

    def test_sweep_range(self, service: DowkerService):
        """k runs from 2 up to 64."""
        with pytest.raises(OutOfRangeError):
            service.regular_gon_sweep(1, 5, 0.5)
        with pytest.raises(OutOfRangeError):
            service.regular_gon_sweep(6, 5, 0.5)

    @pytest.mark.slow
    def test_full_sweep(self):
        """Up to k = 30 the failures are exactly k = 4, 5, 7."""
        rows = DowkerService(threads=4).regular_gon_sweep(2, 30, 0.5)
        assert [r.k for r in rows if not r.verdict] == [4, 5, 7]
        octagon = next(r for r in rows if r.k == 4)
        assert octagon.witness == (4, 6, 8)
