"""Tests for the honeylab command line."""

import csv
import json
import logging
from pathlib import Path

import pytest

from honeylab import __version__
from honeylab.__main__ import main
from honeylab.cli.output import error, fmt, info, success, table, verdict
from honeylab.geometry import read_polygon
from honeylab.logging import setup_logging
from honeylab.services import regular_akn


def _run(*argv: str) -> int:
    """Invoke ``main`` and return its exit code."""
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    return exc.value.code


def _rows(path: Path) -> list[dict[str, str]]:
    lines = [line for line in path.read_text().splitlines() if not line.startswith("#")]
    return list(csv.DictReader(lines))


@pytest.fixture
def polygon_dir(tmp_path: Path) -> Path:
    """Regular 8-, 12-gon and square files written by the shape command."""
    assert _run("shape", "--kind", "regular", "--sides", "8", "--out", str(tmp_path / "octagon.json")) == 0
    assert _run("shape", "--kind", "regular", "--sides", "12", "--out", str(tmp_path / "dodecagon.json")) == 0
    assert _run("shape", "--kind", "square", "--out", str(tmp_path / "square.json")) == 0
    return tmp_path


class TestShapeCommand:
    """Tests for the shape command."""

    def test_writes_polygon(self, polygon_dir: Path):
        """The file reads back as the requested polygon."""
        octagon = read_polygon(polygon_dir / "octagon.json")
        assert octagon.size == 8
        data = json.loads((polygon_dir / "octagon.json").read_text())
        assert data["tool"] == "honeylab"
        assert data["kind"] == "regular"
        assert data["config"]["sides"] == 8
        assert data["version"] == __version__

    def test_requires_out(self, capsys):
        """Without --out there is nowhere to write."""
        assert _run("shape", "--kind", "square") == 2
        assert "requires --out" in capsys.readouterr().err


class TestCircumscribeCommands:
    """Tests for circumscribe and dowker-table."""

    def test_triangle_about_square(self, polygon_dir: Path):
        """JSON report carries the area and the polygon."""
        report = polygon_dir / "tri.json"
        code = _run(
            "circumscribe", "--in", str(polygon_dir / "square.json"), "--n", "3", "--json", str(report)
        )
        assert code == 0
        data = json.loads(report.read_text())
        assert data["tool"] == "honeylab"
        assert data["version"] == __version__
        assert data["config"]["n"] == 3
        assert data["result"]["area"] == pytest.approx(8.0)
        assert len(data["result"]["vertices"]) == 3

    def test_polygon_out_echoes_config(self, polygon_dir: Path):
        """The --out polygon records the run that made it and still reads back."""
        out = polygon_dir / "tri-polygon.json"
        code = _run("circumscribe", "--in", str(polygon_dir / "square.json"), "--n", "3", "--out", str(out))
        assert code == 0
        data = json.loads(out.read_text())
        assert data["config"]["n"] == 3
        assert data["config"]["command"] == "circumscribe"
        assert read_polygon(out).size == 3

    def test_symmetric_odd_n_is_an_error(self, polygon_dir: Path, capsys):
        """Odd side counts are rejected with exit code 2."""
        code = _run("circumscribe", "--in", str(polygon_dir / "octagon.json"), "--n", "5", "--symmetric")
        assert code == 2
        assert "even" in capsys.readouterr().err

    def test_dowker_table_csv(self, polygon_dir: Path):
        """The octagon's table follows the closed form, then stays at its area."""
        out = polygon_dir / "octagon.csv"
        code = _run(
            "dowker-table", "--in", str(polygon_dir / "octagon.json"), "--nmax", "10", "--csv", str(out)
        )
        assert code == 0
        header = out.read_text().splitlines()[:2]
        assert header[0] == f"# honeylab {__version__}"
        assert header[1].startswith("# config ")
        rows = _rows(out)
        assert [int(r["n"]) for r in rows] == list(range(3, 11))
        for r in rows:
            n = min(int(r["n"]), 8)
            assert float(r["area"]) == pytest.approx(regular_akn(4, n), rel=1e-10)

    def test_missing_input_file(self, tmp_path: Path, capsys):
        """A missing --in file fails validation with exit code 2."""
        code = _run("dowker-table", "--in", str(tmp_path / "nope.json"))
        assert code == 2
        assert "not found" in capsys.readouterr().err

    def test_malformed_input_file(self, tmp_path: Path, capsys):
        """Unreadable polygon JSON is reported, not raised."""
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        assert _run("circumscribe", "--in", str(bad), "--n", "4") == 2
        assert "invalid polygon JSON" in capsys.readouterr().err


class TestDowkerCommands:
    """Tests for dowker-check, honeycomb, stability and sweep."""

    @pytest.fixture
    def octagon_csv(self, polygon_dir: Path) -> Path:
        """Dowker table of the octagon, n = 3..8."""
        out = polygon_dir / "octagon-table.csv"
        assert _run("dowker-table", "--in", str(polygon_dir / "octagon.json"), "--nmax", "8", "--csv", str(out)) == 0
        return out

    def test_weak_check_from_table(self, octagon_csv: Path, tmp_path: Path):
        """The octagon fails at alpha = 1/2 and passes at 1."""
        report = tmp_path / "check.json"
        assert _run("dowker-check", "--table", str(octagon_csv), "--alpha", "0.5", "--json", str(report)) == 1
        data = json.loads(report.read_text())["result"]
        assert data["verdict"] is False
        assert 0.5 < data["min_weak_alpha"] <= 1.0 + 1e-6
        assert _run("dowker-check", "--table", str(octagon_csv), "--alpha", "1") == 0

    def test_margins_csv(self, octagon_csv: Path, tmp_path: Path):
        """One CSV row per (m, n) pair."""
        out = tmp_path / "margins.csv"
        _run("dowker-check", "--table", str(octagon_csv), "--alpha", "0.5", "--csv", str(out))
        rows = _rows(out)
        assert len(rows) == 6
        assert {r["six"] for r in rows} == {"6"}

    def test_bad_table_file(self, tmp_path: Path):
        """Tables must start at n = 3."""
        bad = tmp_path / "bad.csv"
        bad.write_text("n,area\n4,4.0\n5,3.9\n")
        assert _run("dowker-check", "--table", str(bad)) == 2

    def test_honeycomb_certified(self, polygon_dir: Path, tmp_path: Path):
        """The 12-gon norm is certified and its hexagon written out."""
        hexagon = tmp_path / "hexagon.json"
        report = tmp_path / "cert.json"
        code = _run(
            "honeycomb",
            "--in",
            str(polygon_dir / "dodecagon.json"),
            "--alpha",
            "0.5",
            "--out",
            str(hexagon),
            "--json",
            str(report),
        )
        assert code == 0
        assert read_polygon(hexagon).size == 6
        assert json.loads(hexagon.read_text())["config"]["alpha"] == 0.5
        data = json.loads(report.read_text())["result"]
        assert data["conclusion"] == "CERTIFIED_2ALPHA_HONEYCOMB"

    def test_honeycomb_not_certified(self, polygon_dir: Path, tmp_path: Path):
        """The octagon norm fails the weak check; no hexagon is written."""
        hexagon = tmp_path / "hexagon.json"
        code = _run("honeycomb", "--in", str(polygon_dir / "octagon.json"), "--out", str(hexagon))
        assert code == 1
        assert not hexagon.exists()

    def test_stability(self, polygon_dir: Path, tmp_path: Path):
        """The square is far from the disk."""
        report = tmp_path / "stab.json"
        code = _run("stability", "--in", str(polygon_dir / "square.json"), "--json", str(report))
        assert code == 1
        data = json.loads(report.read_text())["result"]
        assert data["distance"] == pytest.approx(0.2146, abs=1e-3)
        assert "sandwich" in data

    def test_sweep(self, tmp_path: Path):
        """k = 4, 5, 7 fail among k = 2..8; the sweep itself succeeds."""
        out = tmp_path / "sweep.csv"
        assert _run("sweep", "--kmin", "2", "--kmax", "8", "--csv", str(out)) == 0
        rows = _rows(out)
        assert [int(r["k"]) for r in rows] == list(range(2, 9))
        assert [int(r["k"]) for r in rows if r["verdict"] == "false"] == [4, 5, 7]

    def test_sweep_range(self, capsys):
        """k_min may not exceed k_max."""
        assert _run("sweep", "--kmin", "9", "--kmax", "3") == 2
        assert "k_min" in capsys.readouterr().err


class TestTilingCommands:
    """Tests for tiling and steinhaus."""

    def test_square_tiling_sides(self, tmp_path: Path):
        """Every window of the square tiling averages four sides."""
        report = tmp_path / "tiling.json"
        code = _run("tiling", "--proto", "square", "--R", "8", "--stat", "sides", "--json", str(report))
        assert code == 0
        data = json.loads(report.read_text())["result"]
        assert [row["R"] for row in data["rows"]] == [2.0, 4.0, 8.0]
        assert {row["value"] for row in data["rows"]} == {4.0}
        assert data["normality"]["max_neighbors"] == 8

    def test_steinhaus_patch_statistics(self, tmp_path: Path):
        """The A, A, B patch averages 76/9 sides in its square window."""
        out = tmp_path / "aab.csv"
        code = _run(
            "tiling", "--proto", "steinhaus", "--schedule", "AAB", "--stat", "sides",
            "--R-list", "9.5", "--csv", str(out),
        )
        assert code == 0
        assert float(_rows(out)[0]["value"]) == pytest.approx(76 / 9)

    def test_custom_cell(self, polygon_dir: Path, tmp_path: Path):
        """A 2x2 square cell on the lattice it fills is a four-sided tiling."""
        report = tmp_path / "custom.json"
        code = _run(
            "tiling", "--proto", "custom", "--in", str(polygon_dir / "square.json"),
            "--v1", "2", "0", "--v2", "0", "2", "--R", "6", "--stat", "sides", "--json", str(report),
        )
        assert code == 0
        data = json.loads(report.read_text())
        assert data["config"]["v1"] == [2.0, 0.0]
        assert data["result"]["generator"]["generator"] == "custom"
        assert {row["value"] for row in data["result"]["rows"]} == {4.0}

    def test_voronoi_patch_is_seeded(self, tmp_path: Path):
        """Jittered Voronoi runs are reproducible from their seed."""
        reports = [tmp_path / "a.json", tmp_path / "b.json"]
        for report in reports:
            code = _run(
                "tiling", "--proto", "voronoi", "--jitter", "0.2", "--seed", "7",
                "--R-list", "6", "8", "--stat", "sides", "--json", str(report),
            )
            assert code == 0
        first, second = (json.loads(r.read_text())["result"] for r in reports)
        assert first["generator"] == {"generator": "voronoi", "jitter": 0.2, "seed": 7}
        assert first["rows"] == second["rows"]
        assert all(5.0 < row["value"] < 7.0 for row in first["rows"])

    def test_custom_cell_off_lattice(self, polygon_dir: Path, capsys):
        """A cell that does not fill its lattice is rejected."""
        code = _run(
            "tiling", "--proto", "custom", "--in", str(polygon_dir / "square.json"),
            "--v1", "2", "0", "--v2", "0", "3", "--R", "6",
        )
        assert code == 2
        assert "does not fill" in capsys.readouterr().err

    def test_custom_cell_needs_vectors(self, polygon_dir: Path, capsys):
        """The lattice vectors are required."""
        assert _run("tiling", "--proto", "custom", "--in", str(polygon_dir / "square.json")) == 2
        assert "requires --in, --v1 and --v2" in capsys.readouterr().err

    def test_bad_schedule(self):
        """Schedules are made of A and B."""
        assert _run("tiling", "--proto", "steinhaus", "--schedule", "ACB") == 2

    def test_steinhaus_driver(self, tmp_path: Path):
        """Three milestones above nu = 8."""
        out = tmp_path / "run.json"
        assert _run("steinhaus", "--nu", "8", "--milestones", "3", "--json", str(out)) == 0
        data = json.loads(out.read_text())["result"]
        assert len(data["values"]) == 3
        assert data["radii"][0] == 9.5


class TestOutputFiles:
    """Tests for determinism and global options."""

    def test_json_is_deterministic(self, polygon_dir: Path):
        """Re-running a command rewrites identical bytes."""
        report = polygon_dir / "table.json"
        args = ("dowker-table", "--in", str(polygon_dir / "octagon.json"), "--nmax", "8", "--json", str(report))
        assert _run(*args) == 0
        first = report.read_bytes()
        assert _run(*args) == 0
        assert report.read_bytes() == first

    def test_reproducible_svg(self, polygon_dir: Path):
        """With --reproducible the SVG is byte-identical across runs."""
        figure = polygon_dir / "iso.svg"
        args = ("--reproducible", "isoperimetrix", "--in", str(polygon_dir / "square.json"), "--svg", str(figure))
        assert _run(*args) == 0
        first = figure.read_bytes()
        assert _run(*args) == 0
        assert figure.read_bytes() == first
        assert first.startswith(b"<?xml")

    def test_version(self, capsys):
        """--version prints the tool version."""
        assert _run("--version") == 0
        assert f"honeylab {__version__}" in capsys.readouterr().out

    def test_tolerance_order(self, polygon_dir: Path):
        """The absolute tolerance may not exceed the relative one."""
        code = _run(
            "--tol-rel", "1e-10", "--tol-abs", "1e-8",
            "circumscribe", "--in", str(polygon_dir / "square.json"), "--n", "3",
        )
        assert code == 2

    def test_log_file(self, tmp_path: Path):
        """--log-file collects the run's log records."""
        log = tmp_path / "logs" / "run.log"
        logger = logging.getLogger("honeylab")
        before = list(logger.handlers)
        try:
            assert _run("-vv", "--log-file", str(log), "shape", "--out", str(tmp_path / "s.json")) == 0
        finally:
            for handler in [h for h in logger.handlers if h not in before]:
                handler.close()
                logger.removeHandler(handler)
            logger.setLevel(logging.NOTSET)
        text = log.read_text()
        assert f"honeylab {__version__} starting" in text
        assert "threads=" in text

    def test_repeated_setup_replaces_handlers(self, tmp_path: Path):
        """Two verbose runs in one process leave one stderr handler, and quiet runs none."""
        logger = logging.getLogger("honeylab")
        before = list(logger.handlers)
        try:
            setup_logging(1)
            setup_logging(1)
            assert len([h for h in logger.handlers if h not in before]) == 1
            setup_logging(0)
            assert [h for h in logger.handlers if h not in before] == []
        finally:
            for handler in [h for h in logger.handlers if h not in before]:
                handler.close()
                logger.removeHandler(handler)
            logger.setLevel(logging.NOTSET)


class TestOutputHelpers:
    """Tests for CLI output helpers."""

    def test_success_prints_checkmark(self, capsys):
        """success() prints message with checkmark."""
        success("Test message")
        assert "Test message" in capsys.readouterr().out

    def test_info_prints_bullet(self, capsys):
        """info() prints message with bullet."""
        info("Info message")
        assert "Info message" in capsys.readouterr().out

    def test_error_goes_to_stderr(self, capsys):
        """error() prints on stderr only."""
        error("Error message")
        captured = capsys.readouterr()
        assert "Error message" in captured.err
        assert captured.out == ""

    def test_verdict(self, capsys):
        """Both outcomes print the message on stdout."""
        verdict(True, "passed")
        verdict(False, "failed")
        out = capsys.readouterr().out
        assert "passed" in out
        assert "failed" in out

    def test_table_alignment(self, capsys):
        """Columns are right-aligned and floats use 12 significant digits."""
        table(("n", "A(n)"), [(3, 8.0), (10, 1 / 3)])
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == " n            A(n)"
        assert lines[2].endswith(fmt(1 / 3))
        assert fmt(1 / 3) == "0.333333333333"
