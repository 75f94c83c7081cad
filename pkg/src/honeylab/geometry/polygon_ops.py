"""Convex polygon primitives shared by every other module.

All functions are pure and operate on immutable :class:`ConvexPolygon`
values; vertex arrays are ``(m, 2)`` numpy arrays in counterclockwise order.
"""

import logging
import math
import random
from collections.abc import Iterable, Sequence

import numpy as np
import shapely
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from ..errors import DegenerateInputError, HoneylabError, OriginNotInteriorError, ZeroDirectionError
from ..models.geometry import DEFAULT_TOLERANCE, ConvexPolygon, Point2, Tolerance

logger = logging.getLogger(__name__)


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def tidy(arr: np.ndarray, tol: Tolerance = DEFAULT_TOLERANCE) -> ConvexPolygon:
    """Drop duplicate and collinear vertices of a convex cycle.

    Clockwise input is reversed; the result is counterclockwise and starts at
    the lexicographically smallest vertex.

    Raises:
        DegenerateInputError: if fewer than three vertices survive.
    """
    pts = np.asarray(arr, dtype=float)
    if len(pts) >= 3 and float(_cross(pts, np.roll(pts, -1, axis=0)).sum()) < 0:
        pts = pts[::-1]
    span = float(np.ptp(pts, axis=0).max()) if len(pts) else 0.0
    floor = tol.abs * span * span
    while len(pts) >= 3:
        turns = _cross(pts - np.roll(pts, 1, axis=0), np.roll(pts, -1, axis=0) - pts)
        weakest = int(np.argmin(turns))
        if turns[weakest] > floor:
            break
        pts = np.delete(pts, weakest, axis=0)
    if len(pts) < 3:
        raise DegenerateInputError("convex hull is a segment or a point")
    start = int(np.lexsort((pts[:, 1], pts[:, 0]))[0])
    return ConvexPolygon.trusted(np.roll(pts, -start, axis=0))


def canonicalize(
    raw: Iterable[Point2 | Sequence[float]], tol: Tolerance = DEFAULT_TOLERANCE
) -> ConvexPolygon:
    """Convex hull of ``raw`` without duplicate or collinear vertices, counterclockwise.

    Raises:
        DegenerateInputError: if the hull is one- or zero-dimensional.
    """
    pts = np.array([tuple(p) for p in raw], dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] != 2:
        raise DegenerateInputError("need at least three planar points")
    if not np.isfinite(pts).all():
        raise DegenerateInputError("coordinates must be finite")
    pts = np.unique(pts, axis=0)
    if len(pts) < 3:
        raise DegenerateInputError("need at least three distinct points")
    try:
        hull = ConvexHull(pts)
    except QhullError as e:
        raise DegenerateInputError(f"convex hull is degenerate: {e.args[0].splitlines()[0]}") from e
    polygon = tidy(pts[hull.vertices], tol)
    logger.debug(f"canonicalize: {len(pts)} distinct points -> {polygon.size} vertices")
    return polygon


def area(P: ConvexPolygon) -> float:
    """Shoelace area."""
    return P.area_value


def perimeter(P: ConvexPolygon) -> float:
    """Euclidean perimeter."""
    return float(np.linalg.norm(edge_vectors(P), axis=1).sum())


def edge_vectors(P: ConvexPolygon) -> np.ndarray:
    """Edge ``i`` runs from vertex ``i`` to vertex ``i + 1``."""
    arr = P.array
    return np.roll(arr, -1, axis=0) - arr


def edge_normals(P: ConvexPolygon) -> tuple[np.ndarray, np.ndarray]:
    """Outer unit normals of the edges and their support values ``h_i = <N_i, v_i>``."""
    e = edge_vectors(P)
    n = np.column_stack([e[:, 1], -e[:, 0]])
    n /= np.linalg.norm(n, axis=1)[:, None]
    h = np.einsum("ij,ij->i", n, P.array)
    return n, h


def rotate(P: ConvexPolygon, angle: float) -> ConvexPolygon:
    """Rotate every vertex about the origin by ``angle`` radians."""
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    return tidy(P.array @ rot.T)


def support_function(P: ConvexPolygon, u: Point2 | Sequence[float]) -> float:
    """``max <v, u>`` over the vertices of ``P``.

    Raises:
        ZeroDirectionError: if ``u`` is the zero vector.
    """
    direction = np.asarray(u, dtype=float)
    if not np.any(direction):
        raise ZeroDirectionError("support function needs a nonzero direction")
    return float((P.array @ direction).max())


def support_values(P: ConvexPolygon, directions: np.ndarray) -> np.ndarray:
    """Support function at many directions at once, chunked to bound memory."""
    out = np.empty(len(directions))
    for start in range(0, len(directions), 1024):
        block = directions[start : start + 1024]
        out[start : start + 1024] = (block @ P.array.T).max(axis=1)
    return out


def polar_dual(P: ConvexPolygon, tol: Tolerance = DEFAULT_TOLERANCE) -> ConvexPolygon:
    """Polar body ``{u : <u, v> <= 1 for all v in P}``.

    Each edge of ``P`` with outer normal ``N`` at distance ``h`` from the
    origin becomes the vertex ``N / h``.

    Raises:
        OriginNotInteriorError: if the origin is not strictly inside ``P``.
    """
    n, h = edge_normals(P)
    if h.min() <= tol.allowance(P.diameter):
        raise OriginNotInteriorError(
            f"origin must be strictly interior (closest edge offset {h.min():.3g})"
        )
    return tidy(n / h[:, None], tol)


def hausdorff_distance(P: ConvexPolygon, Q: ConvexPolygon, grid: int = 4096) -> float:
    """Euclidean Hausdorff distance between two convex polygons.

    Combines the support-function gap on ``grid`` uniform directions plus both
    polygons' edge normals with exact vertex-to-set distances.
    """
    theta = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    dirs = np.vstack(
        [np.column_stack([np.cos(theta), np.sin(theta)]), edge_normals(P)[0], edge_normals(Q)[0]]
    )
    gap = float(np.abs(support_values(P, dirs) - support_values(Q, dirs)).max())
    shape_p, shape_q = shapely.Polygon(P.array), shapely.Polygon(Q.array)
    shapely.prepare(shape_p)
    shapely.prepare(shape_q)
    d_pq = float(shapely.distance(shapely.points(P.array), shape_q).max())
    d_qp = float(shapely.distance(shapely.points(Q.array), shape_p).max())
    return max(gap, d_pq, d_qp)


def inradius(P: ConvexPolygon) -> float:
    """Radius of the largest inscribed Euclidean disk (linear program over edge offsets)."""
    return inscribed_disk(P)[1]


def inscribed_disk(P: ConvexPolygon) -> tuple[Point2, float]:
    """Center and radius of a largest inscribed disk."""
    n, h = edge_normals(P)
    a_ub = np.column_stack([n, np.ones(len(n))])
    res = linprog(
        c=[0.0, 0.0, -1.0],
        A_ub=a_ub,
        b_ub=h,
        bounds=[(None, None), (None, None), (0.0, None)],
        method="highs",
    )
    if not res.success:
        raise HoneylabError(f"inradius linear program failed: {res.message}")
    cx, cy, r = res.x
    return Point2(float(cx), float(cy)), float(r)


def circumradius(P: ConvexPolygon) -> float:
    """Radius of the smallest enclosing disk."""
    return enclosing_circle(P.array)[2]


def enclosing_circle(points: np.ndarray, seed: int = 0) -> tuple[float, float, float]:
    """Welzl's smallest enclosing circle, returned as ``(cx, cy, r)``.

    Randomized incremental form; the shuffle is seeded so results are reproducible.
    """
    pts = [(float(x), float(y)) for x, y in points]
    random.Random(seed).shuffle(pts)
    c: tuple[float, float, float] | None = None
    for i, p in enumerate(pts):
        if c is None or not _in_circle(p, c):
            c = _circle_with_one(pts[: i + 1], p)
    assert c is not None
    return c


def _in_circle(p: tuple[float, float], c: tuple[float, float, float]) -> bool:
    return math.hypot(p[0] - c[0], p[1] - c[1]) <= c[2] * (1 + 1e-12) + 1e-14


def _circle_with_one(points: list[tuple[float, float]], p: tuple[float, float]) -> tuple[float, float, float]:
    c = (p[0], p[1], 0.0)
    for i, q in enumerate(points):
        if not _in_circle(q, c):
            c = _diameter_circle(p, q) if c[2] == 0.0 else _circle_with_two(points[: i + 1], p, q)
    return c


def _circle_with_two(
    points: list[tuple[float, float]], p: tuple[float, float], q: tuple[float, float]
) -> tuple[float, float, float]:
    circ = _diameter_circle(p, q)
    left: tuple[float, float, float] | None = None
    right: tuple[float, float, float] | None = None
    px, py = p
    qx, qy = q
    for r in points:
        if _in_circle(r, circ):
            continue
        turn = (qx - px) * (r[1] - py) - (qy - py) * (r[0] - px)
        c = _circumcircle(p, q, r)
        if c is None:
            continue
        side = (qx - px) * (c[1] - py) - (qy - py) * (c[0] - px)
        if turn > 0 and (left is None or side > (qx - px) * (left[1] - py) - (qy - py) * (left[0] - px)):
            left = c
        elif turn < 0 and (
            right is None or side < (qx - px) * (right[1] - py) - (qy - py) * (right[0] - px)
        ):
            right = c
    if left is None and right is None:
        return circ
    if left is None:
        assert right is not None
        return right
    if right is None:
        return left
    return left if left[2] <= right[2] else right


def _diameter_circle(a: tuple[float, float], b: tuple[float, float]) -> tuple[float, float, float]:
    cx, cy = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
    return cx, cy, max(math.hypot(cx - a[0], cy - a[1]), math.hypot(cx - b[0], cy - b[1]))


def _circumcircle(
    a: tuple[float, float], b: tuple[float, float], c: tuple[float, float]
) -> tuple[float, float, float] | None:
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2
    if d == 0:
        return None
    x = ox + (
        (ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)
    ) / d
    y = oy + (
        (ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)
    ) / d
    r = max(math.hypot(x - a[0], y - a[1]), math.hypot(x - b[0], y - b[1]), math.hypot(x - c[0], y - c[1]))
    return x, y, r


def min_width(P: ConvexPolygon) -> float:
    """Minimal width over edge-normal directions (rotating calipers)."""
    arr = P.array
    m = len(arr)
    n, h = edge_normals(P)
    # j is the vertex deepest behind edge i; it only moves forward as i does.
    j = 1
    best = math.inf
    for i in range(m):
        depth = h[i] - arr[j] @ n[i]
        for _ in range(m):
            nxt = (j + 1) % m
            candidate = h[i] - arr[nxt] @ n[i]
            if candidate < depth:
                break
            j, depth = nxt, candidate
        best = min(best, float(depth))
    return best


def contains(P: ConvexPolygon, points: np.ndarray, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Boolean mask of ``points`` lying in ``P`` (closed, within tolerance)."""
    n, h = edge_normals(P)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    slack = tol.allowance(P.diameter, float(np.abs(pts).max(initial=0.0)))
    return ((pts @ n.T) - h[None, :] <= slack).all(axis=1)


def polygon_contains(outer: ConvexPolygon, inner: ConvexPolygon, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """Whether ``inner`` lies in ``outer`` within tolerance."""
    return bool(contains(outer, inner.array, tol).all())


def is_regular(P: ConvexPolygon, tol: float = 1e-9) -> bool:
    """Equal side lengths and equal vertex distances from the vertex centroid."""
    sides = np.linalg.norm(edge_vectors(P), axis=1)
    radii = np.linalg.norm(P.array - P.array.mean(axis=0), axis=1)
    return bool(np.ptp(sides) <= tol * sides.max() and np.ptp(radii) <= tol * radii.max())
