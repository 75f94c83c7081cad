"""JSON and CSV report files.

Every file carries the tool version and the full run configuration, so a
run can be repeated from its output alone.
"""

import csv
import json
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from .. import __version__
from ..errors import ParseError
from ..geometry import write_polygon
from ..models import DEFAULT_TOLERANCE, ConvexPolygon, DowkerTable, RunConfig, Tolerance
from .output import fmt

logger = logging.getLogger(__name__)

TOOL = "honeylab"


def config_echo(config: RunConfig) -> dict[str, Any]:
    return config.model_dump(mode="json")


def envelope(config: RunConfig, result: dict[str, Any]) -> dict[str, Any]:
    return {"tool": TOOL, "version": __version__, "config": config_echo(config), "result": result}


def write_json(path: Path, config: RunConfig, result: dict[str, Any]) -> None:
    path.write_text(json.dumps(envelope(config, result), indent=2) + "\n", encoding="utf-8")
    logger.debug(f"Wrote JSON report {path}")


def write_polygon_file(path: Path, config: RunConfig, polygon: ConvexPolygon, **extra: Any) -> None:
    """Polygon JSON that still reads as plain vertices, with the run configuration alongside."""
    write_polygon(path, polygon, tool=TOOL, version=__version__, config=config_echo(config), **extra)


def _cell(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return fmt(value)
    return "" if value is None else str(value)


def write_csv(
    path: Path, config: RunConfig, headers: Sequence[str], rows: Sequence[Sequence[object]]
) -> None:
    """Two comment lines (version, config) then the header row and the data."""
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write(f"# {TOOL} {__version__}\n")
        handle.write(f"# config {json.dumps(config_echo(config), sort_keys=True)}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(headers)
        writer.writerows([_cell(v) for v in row] for row in rows)
    logger.debug(f"Wrote {len(rows)} CSV rows to {path}")


def write_table_csv(path: Path, config: RunConfig, table: DowkerTable) -> None:
    rows = [(n, table.value(n)) for n in table.ns]
    write_csv(path, config, ("n", "area"), rows)


def read_table_csv(path: Path, tol: Tolerance = DEFAULT_TOLERANCE) -> DowkerTable:
    """Read an ``n, area`` table written by ``dowker-table``.

    The disk area is not stored, so the smallest value stands in for it.

    Raises:
        ParseError: if the file is not a table starting at n = 3 with consecutive n.
    """
    lines = [
        line
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    ]
    reader = csv.DictReader(lines)
    if reader.fieldnames is None or not {"n", "area"} <= set(reader.fieldnames):
        raise ParseError(f"{path}: expected columns n, area")
    try:
        pairs = [(int(row["n"]), float(row["area"])) for row in reader]
    except (TypeError, ValueError) as e:
        raise ParseError(f"{path}: {e}") from e
    ns = [n for n, _ in pairs]
    if not pairs or ns != list(range(3, 3 + len(ns))):
        raise ParseError(f"{path}: rows must list n = 3, 4, ... consecutively")
    values = tuple(v for _, v in pairs)
    try:
        table = DowkerTable(
            disk_id=path.stem,
            n_max=ns[-1],
            values=values,
            disk_area=min(values),
            tol=tol,
        )
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from e
    logger.debug(f"Read table {path} with n = 3..{table.n_max}")
    return table
