"""Tiling patches, window-averaged statistics and the checks run on them."""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from concurrent.futures import Executor, ThreadPoolExecutor
from typing import TYPE_CHECKING

import numpy as np
import shapely
from scipy.spatial import HalfspaceIntersection, Voronoi

from ..errors import EmptyWindowError, NonTilingPrototypeError, OutOfRangeError, UnboundedKStarError
from ..geometry import (
    canonicalize,
    circumradius,
    edge_normals,
    edge_vectors,
    gauge_values,
    inradius,
    isoperimetrix,
    m_perimeter,
    regular_polygon,
    support_values,
)
from ..models import (
    DEFAULT_TOLERANCE,
    AverageSeries,
    CellGroup,
    ChakerianGap,
    ConvexPolygon,
    CustomPrototype,
    NormalityConstants,
    NormDisk,
    PatchCheck,
    Proto,
    StatKind,
    TilingPatch,
    Tolerance,
    WindowShape,
)
from .circumscribe_service import CircumscribeService

if TYPE_CHECKING:
    from ..config import Settings

logger = logging.getLogger(__name__)

HEX_SITE_SPACING = math.sqrt(2 / math.sqrt(3))  # nearest-site distance of unit-area hexagons
LATTICE_REL = 1e-7


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _in_lattice(points: np.ndarray, v1: np.ndarray, v2: np.ndarray) -> bool:
    basis = np.column_stack([v1, v2])
    coeffs = np.linalg.solve(basis, np.atleast_2d(points).T)
    return bool(np.abs(coeffs - np.round(coeffs)).max() <= LATTICE_REL)


def _check_tiles(arr: np.ndarray, v1: np.ndarray, v2: np.ndarray, reflect: bool) -> None:
    """Edge pairing of a prototype under its lattice.

    Without reflection each edge midpoint, doubled about the cell center, must
    be a lattice vector. With reflection the copy ``2 m_0 - P`` sits across
    edge 0 and every other edge must reach a translate of it.

    Raises:
        NonTilingPrototypeError: if the cell area does not match the lattice or an edge is unpaired.
    """
    det = abs(float(_cross(v1, v2)))
    cell_area = 0.5 * float(_cross(arr, np.roll(arr, -1, axis=0)).sum())
    if det <= 0 or abs(cell_area * (1 + reflect) - det) > LATTICE_REL * det:
        raise NonTilingPrototypeError(
            f"cell area {cell_area:.6g} does not fill the lattice cell {det:.6g}"
        )
    mids = 0.5 * (arr + np.roll(arr, -1, axis=0))
    if reflect:
        offsets = 2 * (mids - mids[0])
    else:
        offsets = 2 * (mids - arr.mean(axis=0))
    if not _in_lattice(offsets, v1, v2):
        raise NonTilingPrototypeError("an edge of the prototype has no partner under the lattice")


def _group_cells(cells: list[np.ndarray]) -> list[CellGroup]:
    by_size: dict[int, list[np.ndarray]] = defaultdict(list)
    for cell in cells:
        by_size[len(cell)].append(cell)
    return [
        CellGroup(vertices=np.array(v), sides=np.full(len(v), k))
        for k, v in sorted(by_size.items())
    ]


def _lattice_groups(
    protos: list[np.ndarray], v1: np.ndarray, v2: np.ndarray, R: float
) -> list[CellGroup]:
    """Translates of each prototype by ``i v1 + j v2`` lying inside ``R B^2``."""
    reach = R + max(float(np.linalg.norm(p, axis=1).max()) for p in protos)
    inv = np.linalg.inv(np.column_stack([v1, v2]))
    bound_i = math.ceil(reach * float(np.linalg.norm(inv[0]))) + 1
    bound_j = math.ceil(reach * float(np.linalg.norm(inv[1]))) + 1
    ii, jj = np.meshgrid(np.arange(-bound_i, bound_i + 1), np.arange(-bound_j, bound_j + 1))
    shifts = ii.reshape(-1, 1) * v1 + jj.reshape(-1, 1) * v2
    shifts = shifts[np.linalg.norm(shifts, axis=1) <= reach]
    groups: dict[int, list[np.ndarray]] = defaultdict(list)
    limit = R * (1 + 1e-12)
    for proto in protos:
        verts = proto[None, :, :] + shifts[:, None, :]
        keep = np.linalg.norm(verts, axis=2).max(axis=1) <= limit
        groups[len(proto)].append(verts[keep])
    return [
        CellGroup(vertices=np.concatenate(v), sides=np.full(sum(len(x) for x in v), k))
        for k, v in sorted(groups.items())
    ]


def lattice_vectors(H: ConvexPolygon) -> tuple[np.ndarray, np.ndarray]:
    """Translation vectors under which a centrally symmetric hexagon or parallelogram tiles."""
    a = edge_vectors(H)
    if H.size == 4:
        return a[0], a[1]
    if H.size == 6:
        return a[0] + a[1], a[1] + a[2]
    raise NonTilingPrototypeError(f"a {H.size}-gon does not tile by translations")


def _unit_area(arr: np.ndarray) -> np.ndarray:
    """Centered copy of a vertex array with area one."""
    cell_area = 0.5 * float(_cross(arr, np.roll(arr, -1, axis=0)).sum())
    scale = 1 / math.sqrt(cell_area)
    return (arr - arr.mean(axis=0)) * scale


def _triangle() -> CustomPrototype:
    s = math.sqrt(4 / math.sqrt(3))
    arr = np.array([[0.0, 0.0], [s, 0.0], [s / 2, s * math.sqrt(3) / 2]])
    arr -= arr.mean(axis=0)
    return CustomPrototype(
        polygon=ConvexPolygon.trusted(arr),
        v1=(s, 0.0),
        v2=(s / 2, s * math.sqrt(3) / 2),
        reflect=True,
    )


def _hexagon() -> CustomPrototype:
    rho = math.sqrt(2 / (3 * math.sqrt(3)))
    H = regular_polygon(6, inradius=rho * math.cos(math.pi / 6))
    v1, v2 = lattice_vectors(H)
    return CustomPrototype(polygon=H, v1=tuple(v1), v2=tuple(v2))


def _square() -> CustomPrototype:
    arr = np.array([[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]])
    return CustomPrototype(polygon=ConvexPolygon.trusted(arr), v1=(1.0, 0.0), v2=(0.0, 1.0))


def build_lattice_patch(proto: Proto, R: float, custom: CustomPrototype | None = None) -> TilingPatch:
    """Unit-area lattice tiling inside ``R B^2``.

    CUSTOM prototypes are rescaled to unit area together with their vectors.

    Raises:
        NonTilingPrototypeError: if the CUSTOM prototype's edges do not pair up.
    """
    if R <= 0:
        raise OutOfRangeError(f"R must be positive, got {R}")
    match proto:
        case Proto.SQUARE:
            prototype = _square()
        case Proto.TRIANGLE:
            prototype = _triangle()
        case Proto.HEXAGON:
            prototype = _hexagon()
        case Proto.CUSTOM:
            if custom is None:
                raise NonTilingPrototypeError("CUSTOM lattice patch needs a prototype")
            prototype = custom
    arr = prototype.polygon.array
    v1, v2 = np.asarray(prototype.v1, dtype=float), np.asarray(prototype.v2, dtype=float)
    _check_tiles(arr, v1, v2, prototype.reflect)
    scale = 1 / math.sqrt(prototype.polygon.area_value)
    arr = (arr - arr.mean(axis=0)) * scale
    v1, v2 = v1 * scale, v2 * scale
    protos = [arr]
    if prototype.reflect:
        anchor = 0.5 * (arr[0] + arr[1])
        protos.append(2 * anchor - arr)
    groups = _lattice_groups(protos, v1, v2, R)
    patch = TilingPatch(
        groups=groups,
        window_R=R,
        meta={"generator": proto.value, "v1": v1.tolist(), "v2": v2.tolist(), "reflect": prototype.reflect},
    )
    logger.debug(f"{proto.value} patch R={R:g}: {patch.cell_count} cells")
    return patch


def jittered_voronoi_patch(R: float, amplitude: float, seed: int = 0) -> TilingPatch:
    """Voronoi cells of hexagonal-lattice sites moved by uniform noise.

    The noise is ``amplitude`` times the site spacing in each coordinate;
    unbounded regions are dropped and only cells inside ``R B^2`` are kept.
    """
    if not 0 <= amplitude < 0.5:
        raise OutOfRangeError(f"jitter amplitude must lie in [0, 0.5), got {amplitude}")
    d = HEX_SITE_SPACING
    v1 = np.array([d, 0.0])
    v2 = np.array([d / 2, d * math.sqrt(3) / 2])
    reach = R + 4 * d
    bound = math.ceil(reach / (d * math.sqrt(3) / 2)) + 1
    ii, jj = np.meshgrid(np.arange(-bound, bound + 1), np.arange(-bound, bound + 1))
    sites = ii.reshape(-1, 1) * v1 + jj.reshape(-1, 1) * v2
    sites = sites[np.linalg.norm(sites, axis=1) <= reach]
    rng = np.random.default_rng(seed)
    sites = sites + rng.uniform(-amplitude * d, amplitude * d, size=sites.shape)
    vor = Voronoi(sites)
    cells = []
    limit = R * (1 + 1e-12)
    for region_index in vor.point_region:
        region = vor.regions[region_index]
        if not region or -1 in region:
            continue
        verts = vor.vertices[region]
        if np.linalg.norm(verts, axis=1).max() > limit:
            continue
        center = verts.mean(axis=0)
        order = np.argsort(np.arctan2(verts[:, 1] - center[1], verts[:, 0] - center[0]))
        cells.append(verts[order])
    patch = TilingPatch(
        groups=_group_cells(cells),
        window_R=R,
        meta={"generator": "voronoi", "jitter": amplitude, "seed": seed},
    )
    logger.debug(f"voronoi patch R={R:g} jitter={amplitude:g}: {patch.cell_count} cells")
    return patch


def _cell_areas(g: CellGroup) -> np.ndarray:
    v = g.vertices
    return 0.5 * _cross(v, np.roll(v, -1, axis=1)).sum(axis=1)


def _cell_perimeters(g: CellGroup, M: NormDisk) -> np.ndarray:
    edges = np.roll(g.vertices, -1, axis=1) - g.vertices
    return gauge_values(M, edges.reshape(-1, 2)).reshape(edges.shape[:2]).sum(axis=1)


def _group_statistic(g: CellGroup, M: NormDisk, kind: StatKind, alpha: float) -> np.ndarray:
    perim = _cell_perimeters(g, M)
    match kind:
        case StatKind.POWERED_PERIM:
            return perim**alpha
        case StatKind.LOG_PERIM:
            return np.log(perim)
        case _:
            return perim**2 / _cell_areas(g)


def cell_statistic(
    patch: TilingPatch,
    M: NormDisk | None,
    kind: StatKind,
    alpha: float = 2.0,
    pool: Executor | None = None,
) -> np.ndarray:
    """Per-cell value of ``kind`` in group order; SIDES needs no norm.

    With ``pool`` the cell groups are evaluated concurrently.
    """
    if kind is StatKind.SIDES:
        return patch.side_counts.astype(float)
    if M is None:
        raise OutOfRangeError(f"{kind.value} needs a norm")
    mapper = pool.map if pool is not None else map
    parts = list(mapper(lambda g: _group_statistic(g, M, kind, alpha), patch.groups))
    return np.concatenate(parts) if parts else np.zeros(0)


def _window_series(
    patch: TilingPatch,
    M: NormDisk | None,
    kind: StatKind,
    R_list: list[float],
    alpha: float,
    window: WindowShape,
    pool: Executor | None = None,
) -> AverageSeries:
    if not R_list:
        raise OutOfRangeError("R_list is empty")
    R_values = sorted(R_list)
    if R_values[-1] > patch.window_R * (1 + 1e-12):
        raise OutOfRangeError(f"R = {R_values[-1]:g} exceeds the patch window {patch.window_R:g}")
    values = cell_statistic(patch, M, kind, alpha, pool)
    reach = patch.window_radius(window)
    counts, stats = [], []
    for R in R_values:
        inside = reach <= R * (1 + 1e-12)
        count = int(inside.sum())
        if count == 0:
            raise EmptyWindowError(f"no cell fits in the {window.value} window of radius {R:g}")
        counts.append(count)
        stats.append(float(values[inside].mean()))
        logger.debug(f"{window.value} window R={R:g}: {count} cells, {kind.value} = {stats[-1]:.9g}")
    return AverageSeries(
        R_values=R_values,
        counts=counts,
        stat_values=stats,
        stat_kind=kind,
        alpha=alpha if kind is StatKind.POWERED_PERIM else None,
    )


def window_average(
    patch: TilingPatch,
    M: NormDisk | None,
    kind: StatKind,
    R_list: list[float],
    alpha: float = 2.0,
) -> AverageSeries:
    """Average of a per-cell statistic over the cells inside ``R B^2``, for each R.

    Raises:
        EmptyWindowError: if no cell fits at some R.
        OutOfRangeError: if some R exceeds the patch window.
    """
    return _window_series(patch, M, kind, R_list, alpha, WindowShape.ROUND)


def window_average_square(
    patch: TilingPatch,
    M: NormDisk | None,
    kind: StatKind,
    R_list: list[float],
    alpha: float = 2.0,
) -> AverageSeries:
    """As :func:`window_average` with the square windows ``[-R, R]^2``."""
    return _window_series(patch, M, kind, R_list, alpha, WindowShape.SQUARE)


def chakerian_gap(M: NormDisk, K: ConvexPolygon, tol: Tolerance = DEFAULT_TOLERANCE) -> ChakerianGap:
    """``L^2 - 4 f F`` with ``L`` the M-perimeter of K and ``f`` the area of K*.

    K* is cut out by the support lines of the isoperimetrix in the directions
    of K's outer edge normals.

    Raises:
        UnboundedKStarError: if K's normals leave a gap of half a turn or more.
    """
    normals, _ = edge_normals(K)
    angles = np.sort(np.arctan2(normals[:, 1], normals[:, 0]))
    gaps = np.diff(np.append(angles, angles[0] + 2 * math.pi))
    if gaps.max() >= math.pi - 1e-12:
        raise UnboundedKStarError("edge normals do not surround the origin")
    iso = isoperimetrix(M, tol)
    offsets = support_values(iso.disk, normals)
    halfspaces = np.column_stack([normals, -offsets])
    hs = HalfspaceIntersection(halfspaces, np.zeros(2))
    k_star = canonicalize(hs.intersections, tol)
    L = m_perimeter(M, K)
    F = K.area_value
    f = k_star.area_value
    gap = L * L - 4 * f * F
    logger.debug(f"chakerian: L={L:.9g} F={F:.9g} f={f:.9g} gap={gap:.3g}")
    return ChakerianGap(L=L, F=F, f=f, gap=gap, k_star=k_star)


def cell_shapes(patch: TilingPatch) -> np.ndarray:
    """The patch's cells as shapely polygons, in group order."""
    if not patch.groups:
        return np.empty(0, dtype=object)
    return np.concatenate([shapely.polygons(g.vertices) for g in patch.groups])


def _distinct_shapes(patch: TilingPatch) -> list[ConvexPolygon]:
    seen: dict[bytes, ConvexPolygon] = {}
    for g in patch.groups:
        rel = g.vertices - g.vertices.mean(axis=1, keepdims=True)
        keys = np.round(rel, 9)
        for key, verts in zip(keys, g.vertices, strict=True):
            seen.setdefault(key.tobytes(), ConvexPolygon.trusted(verts))
    return list(seen.values())


def neighbor_counts(patch: TilingPatch, shapes: np.ndarray | None = None) -> np.ndarray:
    """Number of other cells each cell touches (shares at least a point with)."""
    shapes = cell_shapes(patch) if shapes is None else shapes
    if len(shapes) == 0:
        return np.zeros(0, dtype=int)
    tree = shapely.STRtree(shapes)
    left, right = tree.query(shapes, predicate="dwithin", distance=1e-9)
    distinct = left != right
    return np.bincount(left[distinct], minlength=len(shapes))


def normality_constants(patch: TilingPatch) -> NormalityConstants:
    """Inradius / circumradius bounds over the cells and the neighbour bound ``9 R^2 / r^2 - 1``."""
    if patch.cell_count == 0:
        raise EmptyWindowError("patch has no cells")
    distinct = _distinct_shapes(patch)
    inner = np.array([inradius(c) for c in distinct])
    outer = np.array([circumradius(c) for c in distinct])
    r_hat, R_hat = float(inner.min()), float(outer.max())
    bound = 9 * R_hat**2 / r_hat**2 - 1
    counts = neighbor_counts(patch)
    logger.debug(f"normality: {len(distinct)} distinct cells, r={r_hat:.6g} R={R_hat:.6g}")
    return NormalityConstants(
        r_hat=r_hat,
        R_hat=R_hat,
        max_neighbors_bound=bound,
        max_neighbors=int(counts.max()),
        aspect=float((outer / inner).max()),
    )


def boundary_cell_count(patch: TilingPatch, R: float) -> int:
    """Cells meeting the circle ``R S^1``."""
    shapes = cell_shapes(patch)
    if len(shapes) == 0:
        return 0
    near = shapely.distance(shapely.Point(0.0, 0.0), shapes)
    far = patch.window_radius(WindowShape.ROUND)
    return int(((near <= R) & (far >= R)).sum())


def max_isoperimetric_ratio(patch: TilingPatch, M: NormDisk) -> tuple[float, int]:
    """Largest ``perim_M(C)^2 / area(C)`` over the cells and the index of a cell attaining it."""
    ratios = cell_statistic(patch, M, StatKind.ISO_RATIO)
    if len(ratios) == 0:
        raise EmptyWindowError("patch has no cells")
    index = int(np.argmax(ratios))
    return float(ratios[index]), index


def _max_cell_radius(patch: TilingPatch) -> float:
    """Largest distance from a cell's vertex mean to its vertices."""
    return max(
        float(np.linalg.norm(g.vertices - g.vertices.mean(axis=1, keepdims=True), axis=2).max())
        for g in patch.groups
    )


def verify_patch(patch: TilingPatch, samples: int = 2000, seed: int = 0) -> PatchCheck:
    """Random points of the covered core must lie in one cell and inside at most one interior.

    The core is the window itself for square windows and ``R - 2 R_hat`` for
    round ones, since lattice cells are only kept when they fit.
    """
    shapes = cell_shapes(patch)
    if len(shapes) == 0:
        raise EmptyWindowError("patch has no cells")
    rng = np.random.default_rng(seed)
    if patch.window is WindowShape.SQUARE:
        pts = rng.uniform(-patch.window_R, patch.window_R, size=(samples, 2)) * (1 - 1e-9)
    else:
        core = patch.window_R - 2 * _max_cell_radius(patch)
        if core <= 0:
            raise EmptyWindowError(f"window {patch.window_R:g} is too small to sample")
        radius = core * np.sqrt(rng.uniform(size=samples))
        phi = rng.uniform(0, 2 * math.pi, size=samples)
        pts = np.column_stack([radius * np.cos(phi), radius * np.sin(phi)])
    points = shapely.points(pts)
    tree = shapely.STRtree(shapes)
    hit_pt, _ = tree.query(points, predicate="intersects")
    inside_pt, _ = tree.query(points, predicate="within")
    hits = np.bincount(hit_pt, minlength=samples)
    interiors = np.bincount(inside_pt, minlength=samples)
    check = PatchCheck(
        samples=samples,
        uncovered=int((hits == 0).sum()),
        overlapping=int((interiors > 1).sum()),
    )
    logger.debug(f"patch check: {check}")
    return check


class TilingService:
    """Generators and statistics that depend on circumscription: the optimal hexagonal tiling."""

    def __init__(self, circumscribe: CircumscribeService | None = None, threads: int = 1) -> None:
        self.circumscribe = circumscribe or CircumscribeService()
        self.threads = threads

    @classmethod
    def from_settings(cls, settings: Settings) -> TilingService:
        return cls(CircumscribeService.from_settings(settings), threads=settings.threads)

    @property
    def tol(self) -> Tolerance:
        return self.circumscribe.tol

    def optimal_hexagon(self, M: NormDisk) -> ConvexPolygon:
        """Least-area centrally symmetric hexagon about the isoperimetrix of M, at unit area."""
        iso = isoperimetrix(M, self.tol)
        H = self.circumscribe.min_area_symmetric_circumscribed(iso, 6).polygon
        return ConvexPolygon.trusted(_unit_area(H.array))

    def build_hex_tiling(self, M: NormDisk, R: float) -> TilingPatch:
        """Tiling by translates of the optimal hexagon inside ``R B^2``."""
        H = self.optimal_hexagon(M)
        v1, v2 = lattice_vectors(H)
        _check_tiles(H.array, v1, v2, reflect=False)
        patch = TilingPatch(
            groups=_lattice_groups([H.array], v1, v2, R),
            window_R=R,
            meta={
                "generator": "hex",
                "hexagon": H.array.tolist(),
                "v1": v1.tolist(),
                "v2": v2.tolist(),
            },
        )
        logger.info(f"hex tiling R={R:g}: {patch.cell_count} cells of {H.size} sides")
        return patch

    def honeycomb_bound(self, M: NormDisk, alpha: float) -> float:
        """``(4 A(6))^alpha`` for the isoperimetrix of M; ``log(4 A(6)) / 2`` when ``alpha == 0``."""
        if alpha < 0:
            raise OutOfRangeError(f"alpha must be nonnegative, got {alpha}")
        iso = isoperimetrix(M, self.tol)
        a6 = self.circumscribe.dowker_table(iso.disk, 6, disk_id="iso").value(6)
        if alpha == 0:
            return 0.5 * math.log(4 * a6)
        return (4 * a6) ** alpha

    def series(
        self,
        patch: TilingPatch,
        M: NormDisk | None,
        kind: StatKind,
        R_list: list[float],
        alpha: float = 2.0,
    ) -> AverageSeries:
        """Window averages in the patch's own window shape, cell groups spread over the worker pool."""
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return _window_series(patch, M, kind, R_list, alpha, patch.window, pool)
