"""Tests for tiling patches, window averages and per-tiling checks."""

import math

import numpy as np
import pytest
from hypothesis import given, settings

from honeylab.errors import EmptyWindowError, NonTilingPrototypeError, OutOfRangeError
from honeylab.geometry import (
    canonicalize,
    disk_approximation,
    isoperimetrix,
    regular_norm,
    regular_polygon,
    square,
)
from honeylab.models import ConvexPolygon, CustomPrototype, NormDisk, Proto, StatKind, WindowShape
from honeylab.services import (
    TilingService,
    boundary_cell_count,
    build_lattice_patch,
    cell_statistic,
    chakerian_gap,
    jittered_voronoi_patch,
    max_isoperimetric_ratio,
    neighbor_counts,
    normality_constants,
    steinhaus_example_patch,
    verify_patch,
    window_average,
    window_average_square,
)

from .strategies import convex_polygons, norm_disks


@pytest.fixture(scope="module")
def euclid() -> NormDisk:
    """Dense polygonal stand-in for the Euclidean unit disk."""
    return disk_approximation(4096)


@pytest.fixture
def service() -> TilingService:
    """Tiling service with default settings."""
    return TilingService()


class TestLatticePatches:
    """Tests for build_lattice_patch."""

    def test_square_tiling(self, euclid: NormDisk):
        """Unit squares have perimeter 4."""
        patch = build_lattice_patch(Proto.SQUARE, 10.0)
        series = window_average(patch, euclid, StatKind.POWERED_PERIM, [5.0, 10.0])
        assert series.stat_values == pytest.approx([16.0, 16.0], rel=1e-9)
        assert series.counts[0] < series.counts[1]
        assert series.alpha == 2.0

    def test_triangle_tiling(self, euclid: NormDisk):
        """Unit-area equilateral triangles, upright and reflected."""
        patch = build_lattice_patch(Proto.TRIANGLE, 10.0)
        assert {g.vertices.shape[1] for g in patch.groups} == {3}
        series = window_average(patch, euclid, StatKind.POWERED_PERIM, [10.0])
        assert series.stat_values[0] == pytest.approx(12 * math.sqrt(3), rel=1e-5)

    @pytest.mark.parametrize(("proto", "sides"), [(Proto.SQUARE, 4), (Proto.TRIANGLE, 3), (Proto.HEXAGON, 6)])
    def test_side_counts(self, proto: Proto, sides: int):
        """Lattice cells have no split edges."""
        patch = build_lattice_patch(proto, 8.0)
        series = window_average(patch, None, StatKind.SIDES, [8.0])
        assert series.stat_values == [float(sides)]

    def test_cells_have_unit_area(self):
        """Every prototype is rescaled to area one."""
        for proto in (Proto.SQUARE, Proto.TRIANGLE, Proto.HEXAGON):
            patch = build_lattice_patch(proto, 5.0)
            assert all(c.area_value == pytest.approx(1.0) for c in patch.cells)

    def test_cells_lie_in_window(self):
        """Only cells inside R B^2 are kept."""
        patch = build_lattice_patch(Proto.HEXAGON, 6.0)
        assert patch.window_radius().max() <= 6.0 + 1e-9

    def test_custom_rectangle(self):
        """A 2 x 1 rectangle tiles under its side vectors."""
        rect = canonicalize([(0, 0), (2, 0), (2, 1), (0, 1)])
        custom = CustomPrototype(polygon=rect, v1=(2.0, 0.0), v2=(0.0, 1.0))
        patch = build_lattice_patch(Proto.CUSTOM, 6.0, custom)
        assert patch.cell_count > 0
        assert verify_patch(patch).ok

    def test_custom_pentagon_does_not_tile(self):
        """A regular pentagon has no translation lattice."""
        pentagon = regular_polygon(5)
        custom = CustomPrototype(polygon=pentagon, v1=(1.0, 0.0), v2=(0.0, 1.0))
        with pytest.raises(NonTilingPrototypeError):
            build_lattice_patch(Proto.CUSTOM, 5.0, custom)

    def test_custom_needs_prototype(self):
        """CUSTOM without a prototype is an error."""
        with pytest.raises(NonTilingPrototypeError):
            build_lattice_patch(Proto.CUSTOM, 5.0)


class TestWindowAverages:
    """Tests for window_average, window_average_square and cell_statistic."""

    def test_radius_beyond_patch(self):
        """A window larger than the patch would undercount cells."""
        patch = build_lattice_patch(Proto.SQUARE, 5.0)
        with pytest.raises(OutOfRangeError):
            window_average(patch, None, StatKind.SIDES, [6.0])

    def test_empty_window(self):
        """No unit square fits in a disk of radius 0.1."""
        patch = build_lattice_patch(Proto.SQUARE, 5.0)
        with pytest.raises(EmptyWindowError):
            window_average(patch, None, StatKind.SIDES, [0.1, 5.0])

    def test_norm_required(self):
        """Perimeter statistics need a norm."""
        patch = build_lattice_patch(Proto.SQUARE, 3.0)
        with pytest.raises(OutOfRangeError):
            cell_statistic(patch, None, StatKind.LOG_PERIM)

    def test_square_window(self):
        """[-2.5, 2.5]^2 holds a 5 x 5 block of unit squares."""
        patch = build_lattice_patch(Proto.SQUARE, 10.0)
        series = window_average_square(patch, None, StatKind.SIDES, [2.5])
        assert series.counts == [25]

    def test_iso_ratio_is_scale_free(self, euclid: NormDisk):
        """perim^2 / area equals perim^2 for unit-area cells."""
        patch = build_lattice_patch(Proto.SQUARE, 4.0)
        ratio, _ = max_isoperimetric_ratio(patch, euclid)
        assert ratio == pytest.approx(16.0, rel=1e-9)

    def test_power_mean_chain(self, euclid: NormDisk):
        """Geometric mean <= arithmetic mean <= quadratic mean of the perimeters."""
        patch = jittered_voronoi_patch(10.0, 0.3, seed=5)
        log_mean = window_average(patch, euclid, StatKind.LOG_PERIM, [10.0]).stat_values[0]
        mean = window_average(patch, euclid, StatKind.POWERED_PERIM, [10.0], alpha=1.0).stat_values[0]
        square_mean = window_average(patch, euclid, StatKind.POWERED_PERIM, [10.0], alpha=2.0).stat_values[0]
        assert math.exp(log_mean) <= mean <= math.sqrt(square_mean)

    def test_service_series_uses_patch_window(self):
        """Steinhaus patches are averaged over square windows."""
        patch = steinhaus_example_patch(["A", "A", "B"])
        assert patch.window is WindowShape.SQUARE
        series = TilingService(threads=2).series(patch, None, StatKind.SIDES, [9.5])
        assert series.stat_values[0] == pytest.approx(76 / 9)


class TestHexTiling:
    """Tests for the optimal hexagonal tiling and the honeycomb bound."""

    @pytest.fixture(scope="class")
    def disk(self) -> NormDisk:
        """A coarser disk keeps the dense circumscription quick."""
        return disk_approximation(1024)

    def test_euclidean_hexagons(self, service: TilingService, disk: NormDisk):
        """Regular unit-area hexagons: perimeter squared 8 sqrt(3)."""
        patch = service.build_hex_tiling(disk, 8.0)
        series = window_average(patch, disk, StatKind.POWERED_PERIM, [8.0])
        assert series.stat_values[0] == pytest.approx(8 * math.sqrt(3), rel=1e-4)
        assert verify_patch(patch).ok

    def test_honeycomb_bound(self, service: TilingService, disk: NormDisk):
        """4 A(6) of the Euclidean isoperimetrix."""
        assert service.honeycomb_bound(disk, 1.0) == pytest.approx(8 * math.sqrt(3), rel=1e-4)
        assert service.honeycomb_bound(disk, 0.0) == pytest.approx(
            0.5 * math.log(8 * math.sqrt(3)), rel=1e-4
        )

    def test_square_norm_meets_bound(self, service: TilingService):
        """Under the max norm the optimal cell is a diamond and the bound is attained."""
        M = square()
        patch = service.build_hex_tiling(M, 6.0)
        assert patch.groups[0].vertices.shape[1] == 4
        series = window_average(patch, M, StatKind.POWERED_PERIM, [6.0])
        assert series.stat_values[0] == pytest.approx(service.honeycomb_bound(M, 1.0), rel=1e-9)

    def test_other_tilings_exceed_bound(self, euclid: NormDisk):
        """Squares (16) and triangles (20.78) are worse than hexagons."""
        bound = 8 * math.sqrt(3)
        for proto in (Proto.SQUARE, Proto.TRIANGLE):
            patch = build_lattice_patch(proto, 6.0)
            value = window_average(patch, euclid, StatKind.POWERED_PERIM, [6.0]).stat_values[0]
            assert value > bound

    def test_negative_alpha(self, service: TilingService):
        """The bound is defined for alpha >= 0."""
        with pytest.raises(OutOfRangeError):
            service.honeycomb_bound(square(), -1.0)

    @pytest.mark.slow
    def test_large_window(self, service: TilingService, euclid: NormDisk):
        """At R = 200 the Euclidean hexagon average is within 1% of 8 sqrt(3)."""
        patch = service.build_hex_tiling(euclid, 200.0)
        series = service.series(patch, euclid, StatKind.POWERED_PERIM, [200.0])
        assert series.stat_values[0] == pytest.approx(8 * math.sqrt(3), rel=0.01)


class TestNormality:
    """Tests for neighbour counts, normality constants and boundary counts."""

    def test_square_patch(self):
        """Unit squares: inradius 1/2, circumradius sqrt(2)/2, eight neighbours."""
        constants = normality_constants(build_lattice_patch(Proto.SQUARE, 6.0))
        assert constants.r_hat == pytest.approx(0.5, abs=1e-9)
        assert constants.R_hat == pytest.approx(math.sqrt(2) / 2, abs=1e-9)
        assert constants.max_neighbors_bound == pytest.approx(17.0, rel=1e-6)
        assert constants.max_neighbors == 8
        assert constants.neighbors_ok

    def test_single_cell_has_no_neighbours(self):
        """Only the central square fits in a disk of radius 0.75."""
        patch = build_lattice_patch(Proto.SQUARE, 0.75)
        assert patch.cell_count == 1
        assert neighbor_counts(patch).tolist() == [0]

    def test_boundary_cells_grow_linearly(self):
        """Doubling R roughly doubles the cells meeting the circle."""
        patch = build_lattice_patch(Proto.SQUARE, 45.0)
        ratio = boundary_cell_count(patch, 40.0) / boundary_cell_count(patch, 20.0)
        assert 1.5 <= ratio <= 2.5

    def test_voronoi_sides_average(self):
        """Jittered Voronoi cells average close to six sides."""
        patch = jittered_voronoi_patch(15.0, 0.25, seed=1)
        series = window_average(patch, None, StatKind.SIDES, [15.0])
        assert series.stat_values[0] <= 6.5
        assert normality_constants(patch).neighbors_ok

    def test_voronoi_jitter_range(self):
        """The jitter must keep sites apart."""
        with pytest.raises(OutOfRangeError):
            jittered_voronoi_patch(5.0, 0.5)

    def test_voronoi_is_seeded(self):
        """The same seed gives the same cells."""
        a = jittered_voronoi_patch(6.0, 0.2, seed=9)
        b = jittered_voronoi_patch(6.0, 0.2, seed=9)
        assert a.cell_count == b.cell_count
        assert np.array_equal(a.side_counts, b.side_counts)


class TestVerifyPatch:
    """Tests for verify_patch."""

    @pytest.mark.parametrize("proto", [Proto.SQUARE, Proto.TRIANGLE, Proto.HEXAGON])
    def test_lattice_patches(self, proto: Proto):
        """Lattice patches cover their core without overlaps."""
        check = verify_patch(build_lattice_patch(proto, 8.0))
        assert check.ok
        assert check.samples == 2000

    def test_voronoi_patch(self):
        """Voronoi cells partition the plane."""
        assert verify_patch(jittered_voronoi_patch(8.0, 0.3, seed=2)).ok

    def test_steinhaus_patch(self):
        """The nested construction fills its square window."""
        assert verify_patch(steinhaus_example_patch(["A", "B", "A"])).ok

    def test_too_small_window(self):
        """A round window smaller than two cells leaves nothing to sample."""
        with pytest.raises(EmptyWindowError):
            verify_patch(build_lattice_patch(Proto.SQUARE, 0.75))


class TestChakerian:
    """Tests for chakerian_gap."""

    def test_square_in_max_norm(self):
        """K equal to M: L = 8, F = 4 and K* = K."""
        result = chakerian_gap(square(), square().disk)
        assert result.L == pytest.approx(8.0)
        assert result.f == pytest.approx(4.0)
        assert result.gap == pytest.approx(0.0, abs=1e-9)

    def test_rectangle_in_euclidean_plane(self, euclid: NormDisk):
        """[-1, 1] x [-1/2, 1/2]: 6^2 - 4 * 4 * 2 = 4."""
        rect = canonicalize([(-1, -0.5), (1, -0.5), (1, 0.5), (-1, 0.5)])
        assert chakerian_gap(euclid, rect).gap == pytest.approx(4.0, rel=1e-9)

    def test_isoperimetrix_attains_equality(self):
        """The isoperimetrix is its own K*."""
        M = regular_norm(5)
        iso = isoperimetrix(M).disk
        result = chakerian_gap(M, iso)
        assert result.gap == pytest.approx(0.0, abs=1e-9 * result.L**2)
        assert result.f == pytest.approx(result.F)

    def test_triangle_k_star(self):
        """K* of a triangle is cut by three support lines of the diamond."""
        tri = canonicalize([(0, 0), (1, 0), (0, 1)])
        result = chakerian_gap(square(), tri)
        assert result.k_star.size == 3
        assert result.gap >= 0

    @pytest.mark.slow
    @settings(max_examples=500, deadline=None, derandomize=True)
    @given(norm_disks(), convex_polygons())
    def test_gap_is_nonnegative(self, M: NormDisk, K: ConvexPolygon):
        """L^2 >= 4 f F for every disk in every normed plane."""
        result = chakerian_gap(M, K)
        assert result.gap >= -1e-9 * result.L**2
