"""Tests for the nested square construction with unbounded side averages."""

import numpy as np
import pytest

from honeylab.errors import OutOfRangeError
from honeylab.models import WindowShape
from honeylab.services import SteinhausBuilder, steinhaus_example_patch, steinhaus_schedule, verify_patch


@pytest.fixture
def aab() -> SteinhausBuilder:
    """Two A-steps followed by one B-step."""
    builder = SteinhausBuilder()
    for kind in "AAB":
        builder.step(kind)
    return builder


class TestSteinhausBuilder:
    """Tests for SteinhausBuilder."""

    def test_cell_counts(self, aab: SteinhausBuilder):
        """Nine cells from the A-steps and a ring of 40 squares."""
        assert len(aab.rects) == 9 + 40
        assert aab.N == 11
        assert aab.schedule == ["A", "A", "B"]

    def test_cells_tile_the_block(self, aab: SteinhausBuilder):
        """Cell areas add up to the area of [-N, N]^2."""
        r = aab.rects
        areas = (r[:, 2] - r[:, 0]) * (r[:, 3] - r[:, 1])
        assert int(areas.sum()) == (2 * aab.N) ** 2

    def test_first_step_is_a_pinwheel(self):
        """Each A-rectangle sees one corner of S inside its inner edge."""
        builder = SteinhausBuilder()
        builder.step("A")
        assert builder.N == 3
        assert builder.side_counts().tolist() == [4, 5, 5, 5, 5]

    def test_worked_average(self, aab: SteinhausBuilder):
        """After A, A, B the square window at 9.5 averages 76/9 sides."""
        assert aab.square_average(9.5) == pytest.approx(76 / 9)

    def test_short_schedule_average(self):
        """After A, B the square window at 3.5 averages 28/5 sides."""
        builder = SteinhausBuilder()
        builder.step("A")
        builder.step("B")
        assert builder.square_average(3.5) == pytest.approx(28 / 5)

    def test_ring_squares_are_quadrilaterals_or_more(self, aab: SteinhausBuilder):
        """Split edges only ever add sides."""
        assert (aab.side_counts() >= 4).all()

    def test_unknown_step(self):
        """Only A and B are steps."""
        with pytest.raises(OutOfRangeError):
            SteinhausBuilder().step("C")

    def test_block_limit(self):
        """Coordinates stay well inside int64 arithmetic."""
        builder = SteinhausBuilder()
        with pytest.raises(OutOfRangeError):
            for _ in range(20):
                builder.step("A")

    def test_copy_is_independent(self, aab: SteinhausBuilder):
        """Trial steps on a copy leave the original alone."""
        trial = aab.copy()
        trial.step("A")
        assert aab.N == 11
        assert len(aab.rects) == 49
        assert trial.N == 33


class TestExamplePatch:
    """Tests for steinhaus_example_patch."""

    def test_patch_window(self):
        """The patch is sampled over the square [-N, N]^2."""
        patch = steinhaus_example_patch(["A", "A", "B"])
        assert patch.window is WindowShape.SQUARE
        assert patch.window_R == 11.0
        assert patch.cell_count == 49
        assert patch.meta["schedule"] == "AAB"

    def test_patch_is_a_tiling(self):
        """Sampled points are covered exactly once."""
        assert verify_patch(steinhaus_example_patch(["A", "B", "A", "B"])).ok

    def test_lowercase_steps(self):
        """Steps are case-insensitive."""
        patch = steinhaus_example_patch(["a", "b"])
        assert patch.meta["N"] == 5

    def test_empty_schedule(self):
        """At least one step is needed."""
        with pytest.raises(OutOfRangeError):
            steinhaus_example_patch([])


class TestSchedule:
    """Tests for steinhaus_schedule."""

    def test_exceeds_eight(self):
        """Three milestones, each above nu = 8."""
        run = steinhaus_schedule(8.0, 3)
        assert run.radii[0] == 9.5
        assert run.schedule[:3] == ["A", "A", "B"]
        assert all(v > 8.0 for v in run.values)
        assert np.all(np.diff(run.radii) > 0)
        assert [row[0] for row in run.rows()] == [1, 2, 3]

    def test_small_nu_uses_single_runs(self):
        """With nu = 5 one A-step per milestone is enough at first."""
        run = steinhaus_schedule(5.0, 1)
        assert run.schedule == ["A", "B"]
        assert run.values == [pytest.approx(28 / 5)]

    def test_unreachable_nu(self):
        """Short runs cannot push the average arbitrarily high."""
        with pytest.raises(OutOfRangeError):
            steinhaus_schedule(1000.0, 1, max_run=2)

    def test_milestones_positive(self):
        """At least one milestone."""
        with pytest.raises(OutOfRangeError):
            steinhaus_schedule(8.0, 0)
