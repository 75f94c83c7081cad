"""Static SVG figures of polygons and tiling patches."""

import logging
from collections.abc import Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

from matplotlib.collections import PolyCollection  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402
from matplotlib.patches import Circle, Rectangle  # noqa: E402

from ..models import ConvexPolygon, TilingPatch, WindowShape  # noqa: E402

logger = logging.getLogger(__name__)

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")
HASH_SALT = "honeylab"


def _save(fig: Figure, path: Path, reproducible: bool) -> None:
    rc = {"svg.hashsalt": HASH_SALT} if reproducible else {}
    with matplotlib.rc_context(rc):
        fig.savefig(path, format="svg", metadata={"Date": None})
    logger.debug(f"Wrote SVG {path}")


def _frame(fig: Figure, title: str):
    ax = fig.add_subplot()
    ax.set_aspect("equal")
    ax.set_title(title)
    return ax


def render_polygons(
    path: Path,
    polygons: Sequence[tuple[ConvexPolygon, str]],
    title: str = "",
    reproducible: bool = False,
) -> None:
    """Outline each polygon in its own colour, labelled in the legend."""
    fig = Figure(figsize=(6, 6))
    ax = _frame(fig, title)
    for i, (polygon, label) in enumerate(polygons):
        closed = list(polygon.array) + [polygon.array[0]]
        xs, ys = zip(*closed, strict=True)
        ax.plot(xs, ys, color=PALETTE[i % len(PALETTE)], linewidth=1.2, label=label)
    ax.plot([0], [0], marker="+", color="black")
    if any(label for _, label in polygons):
        ax.legend(loc="upper right", fontsize="small")
    _save(fig, path, reproducible)


def render_patch(
    path: Path,
    patch: TilingPatch,
    R: float | None = None,
    title: str = "",
    reproducible: bool = False,
) -> None:
    """Draw the cells, shaded by side count, with the window ``R W`` overlaid."""
    R = patch.window_R if R is None else R
    fig = Figure(figsize=(8, 8))
    ax = _frame(fig, title or f"{patch.meta.get('generator', 'patch')}, {patch.cell_count} cells")
    for g in patch.groups:
        cells = PolyCollection(
            list(g.vertices),
            array=g.sides.astype(float),
            cmap="viridis",
            edgecolors="black",
            linewidths=0.2,
        )
        cells.set_clim(3, 10)
        ax.add_collection(cells)
    if patch.window is WindowShape.SQUARE:
        ax.add_patch(Rectangle((-R, -R), 2 * R, 2 * R, fill=False, edgecolor="red", linewidth=1.0))
    else:
        ax.add_patch(Circle((0, 0), R, fill=False, edgecolor="red", linewidth=1.0))
    reach = 1.05 * max(R, patch.window_R)
    ax.set_xlim(-reach, reach)
    ax.set_ylim(-reach, reach)
    _save(fig, path, reproducible)
