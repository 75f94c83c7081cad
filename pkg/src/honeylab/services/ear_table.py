"""Ear areas and the dynamic programs behind minimum-area circumscription.

Edge ``i`` of K runs from ``V[i]`` to ``V[i + 1]``. A circumscribed polygon
whose sides lie on chosen edge lines of K is K plus one ear per consecutive
pair of chosen lines: the region between the two lines and the boundary
chain of K they skip. Ears are independent of each other, which makes the
search a shortest cycle over edge indices.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import HoneylabError
from ..geometry.polygon_ops import edge_normals, tidy
from ..models.geometry import ConvexPolygon, Tolerance

logger = logging.getLogger(__name__)

EPS_DET = 1e-12
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_GOLDEN_STEPS = 60


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def line_meet(
    n1: np.ndarray, h1: np.ndarray, n2: np.ndarray, h2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Intersection of the lines ``<n1, x> = h1`` and ``<n2, x> = h2`` and ``cross(n1, n2)``."""
    det = _cross(n1, n2)
    safe = np.where(np.abs(det) > EPS_DET, det, 1.0)
    x = (h1 * n2[..., 1] - h2 * n1[..., 1]) / safe
    y = (n1[..., 0] * h2 - n2[..., 0] * h1) / safe
    return np.stack([x, y], axis=-1), det


def polygon_from_lines(normals: np.ndarray, offsets: np.ndarray) -> ConvexPolygon:
    """Polygon bounded by lines given in counterclockwise normal order."""
    X, _ = line_meet(normals, offsets, np.roll(normals, -1, axis=0), np.roll(offsets, -1))
    return tidy(X)


def minplus(A: np.ndarray, B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Min-plus product ``C[a, b] = min_x A[a, x] + B[x, b]`` with the minimizing ``x``."""
    S = A[:, :, None] + B[None, :, :]
    arg = S.argmin(axis=1)
    return np.take_along_axis(S, arg[:, None, :], axis=1)[:, 0, :], arg.astype(np.int32)


@dataclass(frozen=True)
class SlackLine:
    """A side touching K only at vertex ``t``, between flush lines ``i`` and ``j``."""

    i: int
    j: int
    t: int
    normal: np.ndarray
    offset: float
    ear_sum: float


class EarTable:
    """Edge lines of K with everything needed to price ears and slack sides."""

    def __init__(self, K: ConvexPolygon) -> None:
        self.K = K
        self.V = K.array
        self.m = len(self.V)
        self.N, self.h = edge_normals(K)
        self.theta = np.arctan2(self.N[:, 1], self.N[:, 0]) % (2.0 * math.pi)
        c = _cross(self.V, np.roll(self.V, -1, axis=0))
        self.prefix = np.concatenate([[0.0], np.cumsum(c)])
        self.diameter = K.diameter
        self._slack: _SlackCandidates | None = None

    def chain(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Twice the signed area swept by the boundary chain from vertex ``a`` to vertex ``b``."""
        P = self.prefix
        return P[b] - P[a] + np.where(b < a, P[self.m], 0.0)

    def ears(self, I: np.ndarray | int, J: np.ndarray | int) -> np.ndarray:
        """Ear areas between edge lines ``I`` and ``J`` (broadcast); ``inf`` where the lines
        do not meet on the outer side."""
        I, J = np.broadcast_arrays(np.asarray(I) % self.m, np.asarray(J) % self.m)
        X, det = line_meet(self.N[I], self.h[I], self.N[J], self.h[J])
        a = (I + 1) % self.m
        ear = 0.5 * (_cross(self.V[a], X) + _cross(X, self.V[J]) - self.chain(a, J))
        return np.where((det > EPS_DET) & (I != J), np.maximum(ear, 0.0), np.inf)

    def matrix(self, idx: np.ndarray) -> np.ndarray:
        return self.ears(idx[:, None], idx[None, :])

    # slack sides

    def slack_matrix(self, tol: Tolerance) -> np.ndarray:
        """``Sl[i, j]``: least ear sum of a slack side between flush lines ``i`` and ``j``.

        Only pairs whose lines diverge (normals more than a half-turn apart)
        are priced; elsewhere a slack side through a vertex never beats the
        flush sides of that vertex.
        """
        if self._slack is None:
            self._slack = _SlackCandidates.build(self, tol)
        return self._slack.matrix

    def slack_line(self, i: int, j: int) -> SlackLine:
        if self._slack is None:
            raise HoneylabError("slack sides were not priced for this table")
        return self._slack.line(self, i, j)

    def slack_objective(
        self, I: np.ndarray, J: np.ndarray, T: np.ndarray, phi: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Ear sums of slack lines with normal at angle ``phi`` past ``N[I]`` through ``V[T]``."""
        ang = self.theta[I] + phi
        NL = np.stack([np.cos(ang), np.sin(ang)], axis=-1)
        hL = np.einsum("ij,ij->i", NL, self.V[T])
        X1, d1 = line_meet(self.N[I], self.h[I], NL, hL)
        X2, d2 = line_meet(NL, hL, self.N[J], self.h[J])
        a = (I + 1) % self.m
        e1 = 0.5 * (_cross(self.V[a], X1) + _cross(X1, self.V[T]) - self.chain(a, T))
        e2 = 0.5 * (_cross(self.V[T], X2) + _cross(X2, self.V[J]) - self.chain(T, J))
        total = np.where((d1 > EPS_DET) & (d2 > EPS_DET), e1 + e2, np.inf)
        return total, X1, X2, e1, e2


@dataclass
class _SlackCandidates:
    """Optimized slack lines for every (flush i, touching vertex t, flush j) triple."""

    I: np.ndarray
    J: np.ndarray
    T: np.ndarray
    phi: np.ndarray
    value: np.ndarray
    matrix: np.ndarray

    @classmethod
    def build(cls, table: EarTable, tol: Tolerance) -> "_SlackCandidates":
        m = table.m
        idx = np.arange(m)
        det = _cross(table.N[:, None, :], table.N[None, :, :])
        eligible = (det <= EPS_DET) & (idx[:, None] != idx[None, :])
        pi, pj = np.nonzero(eligible)
        gaps = (pj - pi) % m
        I = np.repeat(pi, gaps)
        J = np.repeat(pj, gaps)
        starts = np.repeat(np.cumsum(gaps) - gaps, gaps)
        T = (I + 1 + np.arange(len(I)) - starts) % m

        two_pi = 2.0 * math.pi
        rel_j = (table.theta[J] - table.theta[I]) % two_pi
        rel_prev = (table.theta[(T - 1) % m] - table.theta[I]) % two_pi
        rel_t = (table.theta[T] - table.theta[I]) % two_pi
        lo = np.maximum(rel_prev, rel_j - math.pi)
        hi = np.minimum(rel_t, math.pi)
        keep = lo < hi
        I, J, T, lo, hi = I[keep], J[keep], T[keep], lo[keep], hi[keep]
        logger.debug(f"slack sides: {len(pi)} diverging pairs, {len(I)} touching vertices")

        phi = _golden_section(table, I, J, T, lo, hi)
        value, X1, X2, e1, e2 = table.slack_objective(I, J, T, phi)
        mid = 0.5 * (X1 + X2)
        off = np.linalg.norm(mid - table.V[T], axis=1)
        floor = -tol.allowance(table.K.area_value)
        valid = (off <= 1e-6 * table.diameter) & (e1 >= floor) & (e2 >= floor)
        value = np.where(valid, np.maximum(value, 0.0), np.inf)

        matrix = np.full((m, m), np.inf)
        np.minimum.at(matrix, (I, J), value)
        return cls(I=I, J=J, T=T, phi=phi, value=value, matrix=matrix)

    def line(self, table: EarTable, i: int, j: int) -> SlackLine:
        hits = np.nonzero((self.I == i) & (self.J == j))[0]
        if len(hits) == 0 or not np.isfinite(self.matrix[i, j]):
            raise HoneylabError(f"no valid slack side between edges {i} and {j}")
        best = hits[int(np.argmin(self.value[hits]))]
        t = int(self.T[best])
        ang = table.theta[i] + self.phi[best]
        normal = np.array([math.cos(ang), math.sin(ang)])
        return SlackLine(
            i=i,
            j=j,
            t=t,
            normal=normal,
            offset=float(normal @ table.V[t]),
            ear_sum=float(self.value[best]),
        )


def _golden_section(
    table: EarTable, I: np.ndarray, J: np.ndarray, T: np.ndarray, lo: np.ndarray, hi: np.ndarray
) -> np.ndarray:
    """Vectorized golden-section search of the slack angle on each ``[lo, hi]``."""

    def f(phi: np.ndarray) -> np.ndarray:
        return table.slack_objective(I, J, T, phi)[0]

    a, b = lo.copy(), hi.copy()
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(_GOLDEN_STEPS):
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        x = np.where(left, b - GOLDEN * (b - a), a + GOLDEN * (b - a))
        fx = f(x)
        c, d, fc, fd = (
            np.where(left, x, d),
            np.where(left, c, x),
            np.where(left, fx, fd),
            np.where(left, fc, fx),
        )
    return 0.5 * (a + b)


# exact cyclic DP


@dataclass
class CyclePlan:
    """Sides of an optimal cycle in counterclockwise order.

    Entries are edge indices of K; ``None`` marks the slack side, which sits
    between its two neighbouring entries.
    """

    sides: list[int | None]
    ear_sum: float


class CycleDP:
    """Shortest cycles of ``n`` chosen edge lines, optionally with one slack side.

    States fix the first (smallest) chosen index ``f``; ``D0[s][f, j]`` is the
    cheapest chain of ``s`` flush sides from ``f`` to ``j``; ``D1[s]`` the same
    with the slack side already used, counted among the ``s`` sides.
    """

    def __init__(self, ears: np.ndarray, slack: np.ndarray | None = None) -> None:
        c = len(ears)
        upper = np.triu(np.ones((c, c), dtype=bool), k=1)
        self.c = c
        self.forward = np.where(upper, ears, np.inf)
        self.closing = np.where(upper, ears.T, np.inf)
        self.slack_forward = None if slack is None else np.where(upper, slack, np.inf)
        self.slack_closing = None if slack is None else np.where(upper, slack.T, np.inf)

    def totals(self, n_top: int) -> dict[int, float]:
        """Least ear sum for every ``3 <= n <= n_top`` in one pass."""
        return self._run(n_top, keep_parents=False)[0]

    def solve(self, n: int) -> CyclePlan:
        totals, parents = self._run(n, keep_parents=True)
        if not math.isfinite(totals.get(n, math.inf)):
            raise HoneylabError(f"no circumscribed {n}-gon found")
        return self._reconstruct(n, parents, totals[n])

    def solve_all(self, n_top: int) -> dict[int, CyclePlan]:
        """Optimal cycles for every ``3 <= n <= n_top`` from a single pass."""
        totals, parents = self._run(n_top, keep_parents=True)
        return {
            n: self._reconstruct(n, parents, total)
            for n, total in totals.items()
            if math.isfinite(total)
        }

    def _run(self, n_top: int, keep_parents: bool) -> tuple[dict[int, float], dict]:
        c = self.c
        d0 = {1: np.where(np.eye(c, dtype=bool), 0.0, np.inf)}
        d1: dict[int, np.ndarray] = {}
        p0: dict[int, np.ndarray] = {}
        p1: dict[int, np.ndarray] = {}
        via_slack: dict[int, np.ndarray] = {}
        totals: dict[int, float] = {}
        slack = self.slack_forward is not None
        for s in range(2, n_top + 1):
            d0[s], par = minplus(d0[s - 1], self.forward)
            if keep_parents:
                p0[s] = par
            if slack:
                options = []
                if s - 1 in d1:
                    options.append((*minplus(d1[s - 1], self.forward), False))
                if s - 2 >= 1:
                    options.append((*minplus(d0[s - 2], self.slack_forward), True))
                if options:
                    val, par, flag = options[0]
                    from_slack = np.full(val.shape, flag)
                    for v2, p2, f2 in options[1:]:
                        better = v2 < val
                        val = np.where(better, v2, val)
                        par = np.where(better, p2, par)
                        from_slack = np.where(better, f2, from_slack)
                    d1[s] = val
                    if keep_parents:
                        p1[s] = par
                        via_slack[s] = from_slack
            if s >= 3:
                best = float((d0[s] + self.closing).min())
                if s in d1:
                    best = min(best, float((d1[s] + self.closing).min()))
                if slack:
                    best = min(best, float((d0[s - 1] + self.slack_closing).min()))
                totals[s] = best
            if not keep_parents:
                d0.pop(s - 2, None)
                d1.pop(s - 1, None)
        parents = {"d0": d0, "d1": d1, "p0": p0, "p1": p1, "via_slack": via_slack}
        return totals, parents

    def _flush_chain(self, s: int, f: int, j: int, p0: dict[int, np.ndarray]) -> list[int | None]:
        seq: list[int | None] = [j]
        while s > 1:
            j = int(p0[s][f, j])
            seq.append(j)
            s -= 1
        return seq[::-1]

    def _reconstruct(self, n: int, parents: dict, total: float) -> CyclePlan:
        d0, d1, p0, p1, via = (
            parents["d0"],
            parents["d1"],
            parents["p0"],
            parents["p1"],
            parents["via_slack"],
        )
        candidates = [(d0[n] + self.closing, "flush")]
        if n in d1:
            candidates.append((d1[n] + self.closing, "slack-inside"))
        if self.slack_closing is not None:
            candidates.append((d0[n - 1] + self.slack_closing, "slack-closing"))
        grid, kind = min(candidates, key=lambda item: float(item[0].min()))
        f, j = np.unravel_index(int(np.argmin(grid)), grid.shape)
        f, j = int(f), int(j)
        if kind == "flush":
            return CyclePlan(self._flush_chain(n, f, j, p0), total)
        if kind == "slack-closing":
            return CyclePlan([*self._flush_chain(n - 1, f, j, p0), None], total)
        tail: list[int | None] = []
        s = n
        while True:
            i = int(p1[s][f, j])
            if via[s][f, j]:
                tail = [None, j, *tail]
                return CyclePlan([*self._flush_chain(s - 2, f, i, p0), *tail], total)
            tail = [j, *tail]
            j, s = i, s - 1


# band refinement for dense disks


def band_refine(
    table: EarTable, chosen: np.ndarray, period: int, band: int, max_passes: int = 16
) -> tuple[np.ndarray, float]:
    """Improve a cyclic choice of flush edges by re-solving inside windows around it.

    ``chosen`` is increasing with ``chosen[-1] < chosen[0] + period``; the
    cycle closes on ``chosen[0] + period``. Windows never overlap, so any
    selection stays increasing. Returns the refined choice and its ear sum.
    """
    pos = np.asarray(chosen, dtype=np.int64)
    width = band
    value = math.inf
    for it in range(max_passes):
        k = len(pos)
        gaps = np.diff(np.append(pos, pos[0] + period))
        after = np.minimum(width, (gaps - 1) // 2)
        before = np.roll(np.minimum(width, gaps - 1 - after), 1)
        windows = [pos[t] + np.arange(-before[t], after[t] + 1) for t in range(k)]

        first = windows[0]
        state = np.where(np.eye(len(first), dtype=bool), 0.0, np.inf)
        parents = []
        for t in range(1, k):
            state, par = minplus(state, table.ears(windows[t - 1][:, None], windows[t][None, :]))
            parents.append(par)
        closing = table.ears(windows[-1][:, None], (first + period)[None, :])
        grid = state + closing.T
        a, x = np.unravel_index(int(np.argmin(grid)), grid.shape)
        value = float(grid[a, x])
        if not math.isfinite(value):
            raise HoneylabError("band refinement found no feasible cycle")
        seq = [int(windows[-1][x])]
        idx = int(x)
        for t in range(k - 1, 0, -1):
            idx = int(parents[t - 1][a, idx])
            seq.append(int(windows[t - 1][idx]))
        new = np.array(seq[::-1], dtype=np.int64)
        new -= table.m * (new[0] // table.m)
        logger.debug(f"band pass {it}: width {width}, ear sum {value:.12g}")
        if np.array_equal(new, pos):
            break
        pos = new
        width = max(4, band // 4)
    return pos, value


def uniform_choice(table: EarTable, count: int, period: int) -> np.ndarray:
    """Edges whose normals are closest to ``count`` equally spaced directions over ``period`` edges."""
    m = table.m
    span = 2.0 * math.pi * period / m
    unwrapped = table.theta[0] + (table.theta - table.theta[0]) % (2.0 * math.pi)
    targets = table.theta[0] + span * np.arange(count) / count
    idx = np.clip(np.searchsorted(unwrapped, targets), 0, m - 1)
    for t in range(1, count):
        idx[t] = max(idx[t], idx[t - 1] + 1)
    if idx[-1] >= idx[0] + period:
        raise HoneylabError(f"cannot spread {count} sides over {period} edges")
    return idx.astype(np.int64)


def cut_corner(table: EarTable, chosen: np.ndarray) -> np.ndarray:
    """``chosen`` with one more flush edge, placed where it trims the largest ear area.

    Same layout as for :func:`band_refine`, cycle period ``table.m``. Adding a
    side only cuts a corner off the polygon, so the ear sum never grows.
    """
    pos = np.asarray(chosen, dtype=np.int64)
    nxt = np.append(pos[1:], pos[0] + table.m)
    best_delta, best_at, best_edge = math.inf, -1, -1
    for t, (p, q) in enumerate(zip(pos, nxt, strict=True)):
        if q - p < 2:
            continue
        inner = np.arange(p + 1, q)
        delta = table.ears(p, inner) + table.ears(inner, q) - table.ears(p, q)
        delta = np.where(np.isfinite(delta), delta, np.inf)
        k = int(np.argmin(delta))
        if delta[k] < best_delta:
            best_delta, best_at, best_edge = float(delta[k]), t, int(inner[k])
    if best_at < 0:
        raise HoneylabError(f"no room for another side among {table.m} edges")
    return np.insert(pos, best_at + 1, best_edge)
