"""Planar curve sets: marching-squares extraction, gluing, Hausdorff distance."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

# Fraction of a cell used to shift sampling grids off rational lines, so that
# curves such as x = 1/2 do not run exactly through grid nodes.
GRID_SHIFT = 0.1372031


@dataclass
class PlanarCurveSet:
    """Polyline approximation of a planar curve.

    ``segments`` holds one ``(n, 2)`` array per polyline.  ``tolerance`` is
    the bound on ``|f|`` at the vertices declared by the generating call.
    """

    segments: list[np.ndarray] = field(default_factory=list)
    resolution: float = 0.0
    tolerance: float = float("inf")

    def __len__(self) -> int:
        return len(self.segments)

    @property
    def empty(self) -> bool:
        return not any(len(s) for s in self.segments)

    def vertices(self) -> np.ndarray:
        if self.empty:
            return np.zeros((0, 2))
        return np.vstack([s for s in self.segments if len(s)])

    def total_length(self) -> float:
        return float(sum(np.linalg.norm(np.diff(s, axis=0), axis=1).sum() for s in self.segments if len(s) > 1))

    def to_json(self) -> dict:
        return {
            "resolution": self.resolution,
            "tolerance": self.tolerance,
            "segments": [s.tolist() for s in self.segments],
        }

    def csv_rows(self):
        for k, seg in enumerate(self.segments):
            for px, py in seg:
                yield k, float(px), float(py)


def shifted_grid(lo: float, hi: float, resolution: float) -> np.ndarray:
    """Uniform grid covering ``[lo, hi]`` with one extra cell each side, shifted off-lattice."""
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    n = int(np.ceil((hi - lo) / resolution)) + 2
    return lo - resolution + GRID_SHIFT * resolution + resolution * np.arange(n + 1)


def marching_squares(values: np.ndarray, xs: np.ndarray, ys: np.ndarray,
                     level: float = 0.0) -> list[tuple[np.ndarray, np.ndarray, int, int]]:
    """Iso-segments of ``values[iy, ix]`` at ``level``.

    Returns a list of ``(p, q, edge_p, edge_q)``: the two endpoints of each
    segment and the integer ids of the grid edges they sit on (shared by the
    neighbouring cell, which is what lets the caller chain segments).
    Saddle cells are resolved with the cell-centre average.
    """
    v = np.asarray(values, float) - level
    ny, nx = v.shape
    inside = v >= 0

    # edge ids: horizontal edges (iy, ix)-(iy, ix+1) first, then vertical (iy, ix)-(iy+1, ix)
    n_h = ny * (nx - 1)

    def h_id(iy, ix):
        return iy * (nx - 1) + ix

    def v_id(iy, ix):
        return n_h + iy * nx + ix

    def interp(a, b, pa, pb):
        t = a / (a - b)
        return pa + t * (pb - pa)

    c00 = inside[:-1, :-1]
    c10 = inside[:-1, 1:]
    c11 = inside[1:, 1:]
    c01 = inside[1:, :-1]
    case = c00.astype(int) | (c10.astype(int) << 1) | (c11.astype(int) << 2) | (c01.astype(int) << 3)
    active = np.argwhere((case != 0) & (case != 15))

    segments = []
    for iy, ix in active:
        iy = int(iy)
        ix = int(ix)
        k = int(case[iy, ix])
        x0, x1 = xs[ix], xs[ix + 1]
        y0, y1 = ys[iy], ys[iy + 1]
        f00, f10, f11, f01 = v[iy, ix], v[iy, ix + 1], v[iy + 1, ix + 1], v[iy + 1, ix]
        # crossing points on the four cell edges: bottom, right, top, left
        pts = {}
        ids = {}
        if (k & 1) != ((k >> 1) & 1):
            pts["b"] = np.array([interp(f00, f10, x0, x1), y0])
            ids["b"] = h_id(iy, ix)
        if ((k >> 1) & 1) != ((k >> 2) & 1):
            pts["r"] = np.array([x1, interp(f10, f11, y0, y1)])
            ids["r"] = v_id(iy, ix + 1)
        if ((k >> 2) & 1) != ((k >> 3) & 1):
            pts["t"] = np.array([interp(f01, f11, x0, x1), y1])
            ids["t"] = h_id(iy + 1, ix)
        if ((k >> 3) & 1) != (k & 1):
            pts["l"] = np.array([x0, interp(f00, f01, y0, y1)])
            ids["l"] = v_id(iy, ix)
        if len(pts) == 2:
            a, b = pts
            segments.append((pts[a], pts[b], ids[a], ids[b]))
        else:
            centre_inside = (f00 + f10 + f11 + f01) / 4.0 >= 0
            # case 5: c00 and c11 inside; case 10: c10 and c01 inside
            if (k == 5) == centre_inside:
                pairs = (("b", "r"), ("t", "l"))
            else:
                pairs = (("b", "l"), ("t", "r"))
            for a, b in pairs:
                segments.append((pts[a], pts[b], ids[a], ids[b]))
    return segments


def chain_segments(segments) -> list[np.ndarray]:
    """Join segments sharing edge ids into maximal polylines."""
    if not segments:
        return []
    adj: dict[int, list[int]] = {}
    for i, (_, _, ea, eb) in enumerate(segments):
        adj.setdefault(ea, []).append(i)
        adj.setdefault(eb, []).append(i)
    used = [False] * len(segments)

    def walk(seg_idx, from_edge):
        # follow the chain starting from segment seg_idx, leaving through the edge != from_edge
        pts = []
        cur, entry = seg_idx, from_edge
        while True:
            used[cur] = True
            p, q, ea, eb = segments[cur]
            if ea == entry:
                pts.append(q)
                exit_edge = eb
            else:
                pts.append(p)
                exit_edge = ea
            nxt = [s for s in adj[exit_edge] if not used[s]]
            if not nxt:
                return pts
            cur, entry = nxt[0], exit_edge

    polylines = []
    # open chains first: start at edges of degree one
    order = sorted(range(len(segments)), key=lambda i: min(len(adj[segments[i][2]]), len(adj[segments[i][3]])))
    for i in order:
        if used[i]:
            continue
        p, q, ea, eb = segments[i]
        if len(adj[ea]) == 1:
            start_pt, entry = p, ea
        elif len(adj[eb]) == 1:
            start_pt, entry = q, eb
        else:
            start_pt, entry = p, ea
        pts = [start_pt] + walk(i, entry)
        polylines.append(np.array(pts))
    return polylines


def contour(values: np.ndarray, xs: np.ndarray, ys: np.ndarray, level: float = 0.0,
            clip_radius: float | None = None) -> list[np.ndarray]:
    """Polylines of ``{values == level}``; optionally clipped to the closed disk of ``clip_radius``."""
    segs = marching_squares(values, xs, ys, level)
    if clip_radius is not None:
        segs = _clip_to_disk(segs, clip_radius)
    return chain_segments(segs)


def _clip_to_disk(segments, radius):
    out = []
    fresh = -1
    r2 = radius * radius
    for p, q, ea, eb in segments:
        pin = p @ p <= r2
        qin = q @ q <= r2
        if pin and qin:
            out.append((p, q, ea, eb))
        elif pin or qin:
            a, b = (p, q) if pin else (q, p)
            d = b - a
            # |a + t d| = radius, t in [0, 1]
            A = d @ d
            B = 2 * (a @ d)
            C = a @ a - r2
            t = (-B + np.sqrt(max(B * B - 4 * A * C, 0.0))) / (2 * A)
            cut = a + t * d
            cut = cut * (radius / np.linalg.norm(cut))
            if pin:
                out.append((p, cut, ea, fresh))
            else:
                out.append((cut, q, fresh, eb))
            fresh -= 1
    return out


def count_components(curves: PlanarCurveSet, glue_tol: float) -> int:
    """Connected components of the union of polylines, joining vertices closer than ``glue_tol``."""
    segs = [s for s in curves.segments if len(s)]
    if not segs:
        return 0
    pts = np.vstack(segs)
    n = len(pts)
    rows, cols = [], []
    start = 0
    for s in segs:
        idx = np.arange(start, start + len(s))
        rows.append(idx[:-1])
        cols.append(idx[1:])
        start += len(s)
    if glue_tol > 0:
        pairs = cKDTree(pts).query_pairs(glue_tol, output_type="ndarray")
        if len(pairs):
            rows.append(pairs[:, 0])
            cols.append(pairs[:, 1])
    r = np.concatenate(rows) if rows else np.zeros(0, int)
    c = np.concatenate(cols) if cols else np.zeros(0, int)
    graph = coo_matrix((np.ones(len(r)), (r, c)), shape=(n, n))
    return int(connected_components(graph, directed=False)[0])


def component_labels(curves: PlanarCurveSet, glue_tol: float) -> list[int]:
    """Component label of each polyline in ``curves.segments`` (same gluing as :func:`count_components`)."""
    segs = curves.segments
    if not segs:
        return []
    parent = list(range(len(segs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    trees = [cKDTree(s) if len(s) else None for s in segs]
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            if trees[i] is None or trees[j] is None:
                continue
            if trees[i].sparse_distance_matrix(trees[j], glue_tol).nnz:
                parent[find(i)] = find(j)
    roots = {}
    return [roots.setdefault(find(i), len(roots)) for i in range(len(segs))]


def directed_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """``sup_{p in a} inf_{q in b} |p - q|`` for point arrays."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("Hausdorff distance needs nonempty point sets")
    d, _ = cKDTree(b).query(a)
    return float(d.max())


def hausdorff_points(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two finite point sets (any dimension).

    The k-d tree gives exact nearest neighbours, so the result matches the
    brute-force double loop.
    """
    return max(directed_hausdorff(a, b), directed_hausdorff(b, a))


def hausdorff_distance(A: PlanarCurveSet, B: PlanarCurveSet) -> float:
    """Symmetric Hausdorff distance between the vertex sets of two curve sets."""
    if A.empty or B.empty:
        raise ValueError("Hausdorff distance needs nonempty curve sets")
    return hausdorff_points(A.vertices(), B.vertices())
