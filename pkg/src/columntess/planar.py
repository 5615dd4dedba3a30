"""Planar tessellations stored as half-edge complexes on a square window.

A tessellation lives on the extended window ``[-m, L + m]^2``; statistics are
taken on the inner window ``[0, L)^2`` only.  Vertices that lie in the
relative interior of a side of one of their cells are *pi-vertices*; that
cell is their owner.

Half-edge ``2k`` runs along edge ``k`` from ``edges[k, 0]`` to
``edges[k, 1]``, half-edge ``2k + 1`` is its twin.  Cells are traversed
counter-clockwise, so every cell lies to the left of its half-edges.
"""

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .errors import (
    AmbiguousAngle,
    DanglingEdge,
    DegenerateSegment,
    MissingMark,
    NonConvexFace,
    TessellationError,
)

__all__ = [
    "Window",
    "PlanarTessellation",
    "build_from_segments",
    "classify_vertex",
    "zero_faces",
    "mark_alpha",
    "mark_beta",
    "mark_gamma",
    "edges_intersecting_cell",
    "vertex_alpha",
    "edge_alpha",
    "pi_beta",
    "z0_beta",
    "vertex_gamma",
    "edge_gamma",
    "cell_gamma",
    "planar_to_dict",
    "planar_from_dict",
    "dump_planar",
    "load_planar",
]

DEFAULT_EPS_ANGLE = 1e-9


@dataclass(frozen=True)
class Window:
    """Inner observation window ``[0, L)^2`` with a margin ``m`` around it."""

    length: float
    margin: float | None = None

    def __post_init__(self):
        if self.margin is None:
            object.__setattr__(self, "margin", self.length / 4.0)
        if not self.length > 0 or not self.margin >= 0:
            raise ValueError("window length must be positive and margin non-negative")

    @property
    def lo(self):
        return -self.margin

    @property
    def hi(self):
        return self.length + self.margin

    @property
    def area(self):
        return self.length * self.length

    def contains(self, xy):
        """Half-open membership test for reference points, shape ``(..., 2)``."""
        xy = np.asarray(xy, dtype=float)
        x, y = xy[..., 0], xy[..., 1]
        return (x >= 0.0) & (x < self.length) & (y >= 0.0) & (y < self.length)


def _polygon_area_centroid(xy):
    """Signed area, centroid and perimeter of a closed polygon ``(n, 2)``."""
    origin = xy[0]
    p = xy - origin
    q = np.roll(p, -1, axis=0)
    cross = p[:, 0] * q[:, 1] - q[:, 0] * p[:, 1]
    area = 0.5 * cross.sum()
    cx = ((p[:, 0] + q[:, 0]) * cross).sum() / (6.0 * area)
    cy = ((p[:, 1] + q[:, 1]) * cross).sum() / (6.0 * area)
    perimeter = np.hypot(q[:, 0] - p[:, 0], q[:, 1] - p[:, 1]).sum()
    return area, origin + np.array([cx, cy]), perimeter


class PlanarTessellation:
    """Immutable half-edge complex of a convex planar tessellation.

    Parameters
    ----------
    points : array_like, shape (n_vertices, 2)
        Vertex coordinates.
    edges : array_like, shape (n_edges, 2)
        Vertex index pairs.  Must form a connected plane graph whose
        bounded faces are the cells.
    window : Window
        Extended window the complex was generated on.
    eps : float, optional
        Snap tolerance in length units, default ``1e-9 * L``.
    eps_angle : float, optional
        Collinearity tolerance in radians used for pi-vertex detection.

    Raises
    ------
    NonConvexFace, AmbiguousAngle, DanglingEdge
        When the input does not describe a tessellation with convex cells.
    """

    def __init__(self, points, edges, window, eps=None, eps_angle=DEFAULT_EPS_ANGLE):
        self.window = window
        self.eps = 1e-9 * window.length if eps is None else float(eps)
        self.eps_angle = float(eps_angle)
        self.points = np.array(points, dtype=float).reshape(-1, 2)
        self.edges = np.array(edges, dtype=np.int64).reshape(-1, 2)
        self._assemble()
        for name, value in vars(self).items():
            if isinstance(value, np.ndarray):
                value.setflags(write=False)

    # ------------------------------------------------------------------
    # construction

    def _assemble(self):
        pts, edges = self.points, self.edges
        n_v, n_e = len(pts), len(edges)
        if n_e == 0:
            raise TessellationError("a tessellation needs at least one edge")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise TessellationError("edge with identical endpoints")

        origin = edges.reshape(-1)  # origin of half-edge h is edges.flat[h]
        dest = edges[:, ::-1].reshape(-1)
        vec = pts[dest] - pts[origin]
        angle = np.arctan2(vec[:, 1], vec[:, 0])

        ring = np.lexsort((angle, origin))
        degree = np.bincount(origin, minlength=n_v)
        start = np.concatenate(([0], np.cumsum(degree)[:-1]))
        pos = np.empty(2 * n_e, dtype=np.int64)
        pos[ring] = np.arange(2 * n_e)

        inner = self._on_frame(pts)
        for v in np.flatnonzero(degree < 3):
            if degree[v] == 1:
                raise DanglingEdge(f"vertex {v} at {pts[v]} has degree 1")
            if degree[v] == 0:
                raise TessellationError(f"isolated vertex {v}")
            if not inner[v]:
                raise TessellationError(f"vertex {v} at {pts[v]} has degree 2")

        twin = np.arange(2 * n_e) ^ 1
        # next(h) is the outgoing half-edge at dest(h) just clockwise of twin(h)
        t = twin
        v = origin[t]
        k = pos[t] - start[v]
        nxt = ring[start[v] + (k - 1) % degree[v]]

        face = np.full(2 * n_e, -2, dtype=np.int64)
        cycles_he = []
        for h0 in range(2 * n_e):
            if face[h0] != -2:
                continue
            cyc = [h0]
            face[h0] = len(cycles_he)
            h = nxt[h0]
            while h != h0:
                if face[h] != -2:
                    raise TessellationError("inconsistent half-edge ring")
                face[h] = len(cycles_he)
                cyc.append(h)
                h = nxt[h]
            cycles_he.append(np.array(cyc, dtype=np.int64))

        signed = []
        for cyc in cycles_he:
            xy = pts[origin[cyc]]
            signed.append(_polygon_area_centroid(xy)[0] if len(cyc) > 2 else 0.0)
        signed = np.array(signed)
        outer = np.flatnonzero(signed <= 0)
        if len(outer) != 1:
            raise TessellationError(
                f"expected one unbounded face, found {len(outer)}; graph is not connected"
            )
        face_to_cell = np.full(len(cycles_he), -1, dtype=np.int64)
        bounded = np.flatnonzero(signed > 0)
        face_to_cell[bounded] = np.arange(len(bounded))

        self.he_origin = origin
        self.he_twin = twin
        self.he_next = nxt
        self.he_cell = face_to_cell[face]

        self.vertex_halfedges = [ring[start[i]:start[i] + degree[i]] for i in range(n_v)]
        self.vertex_edges = [h // 2 for h in self.vertex_halfedges]
        self.vertex_cells = [self.he_cell[h] for h in self.vertex_halfedges]
        self.degree = degree
        self.edge_cells = self.he_cell.reshape(-1, 2)
        self.edge_lengths = np.hypot(*(pts[edges[:, 1]] - pts[edges[:, 0]]).T)
        self.edge_midpoints = 0.5 * (pts[edges[:, 0]] + pts[edges[:, 1]])
        self.boundary_vertex = inner

        n_c = len(bounded)
        self.cells = []
        self.cell_edges = []
        self.cell_halfedges = []
        area = np.empty(n_c)
        perim = np.empty(n_c)
        centroid = np.empty((n_c, 2))
        self.cell_turns = []
        for c, f in enumerate(bounded):
            cyc = cycles_he[f]
            verts = origin[cyc]
            self.cell_halfedges.append(cyc)
            self.cells.append(verts)
            self.cell_edges.append(cyc // 2)
            a, g, p = _polygon_area_centroid(pts[verts])
            area[c], centroid[c], perim[c] = a, g, p
            d1 = pts[verts] - pts[np.roll(verts, 1)]
            d2 = pts[np.roll(verts, -1)] - pts[verts]
            cross = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
            dot = (d1 * d2).sum(axis=1)
            turn = np.arctan2(cross, dot)
            if np.any(turn < -self.eps_angle):
                raise NonConvexFace(f"cell {c} has a reflex corner")
            self.cell_turns.append(turn)
        self.cell_area = area
        self.cell_perimeter = perim
        self.cell_centroid = centroid

        kind_pi = np.zeros(n_v, dtype=bool)
        owner = np.full(n_v, -1, dtype=np.int64)
        self.corners = []
        for c in range(n_c):
            straight = np.abs(self.cell_turns[c]) <= self.eps_angle
            verts = self.cells[c]
            for v in verts[straight]:
                if kind_pi[v]:
                    raise AmbiguousAngle(f"vertex {v} has angle pi in two cells")
                kind_pi[v] = True
                owner[v] = c
            self.corners.append(verts[~straight])
        self.kind_pi = kind_pi
        self.owner = owner

        self.synthetic = np.array([inner[cyc].any() for cyc in self.cells], dtype=bool)
        self.z0_vertex = np.concatenate(self.corners) if n_c else np.zeros(0, np.int64)
        self.z0_cell = np.repeat(np.arange(n_c), [len(c) for c in self.corners])

    def _on_frame(self, pts):
        lo, hi, eps = self.window.lo, self.window.hi, self.eps
        x, y = pts[:, 0], pts[:, 1]
        return (
            (np.abs(x - lo) <= eps)
            | (np.abs(x - hi) <= eps)
            | (np.abs(y - lo) <= eps)
            | (np.abs(y - hi) <= eps)
        )

    # ------------------------------------------------------------------
    # sizes and windows

    @property
    def n_vertices(self):
        return len(self.points)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_cells(self):
        return len(self.cells)

    def inner_vertices(self):
        return self.window.contains(self.points) & ~self.boundary_vertex

    def inner_edges(self):
        return self.window.contains(self.edge_midpoints)

    def inner_cells(self):
        return self.window.contains(self.cell_centroid) & ~self.synthetic

    def n_corners(self):
        return np.array([len(c) for c in self.corners], dtype=np.int64)

    def n_boundary_vertices(self):
        return np.array([len(c) for c in self.cells], dtype=np.int64)

    def is_collinear_on_side(self, v):
        """Geometric pi-test: does ``v`` sit inside a side of one of its cells?

        Independent of the angle classification: looks for a cell in which
        ``v`` lies within ``eps`` of the chord joining its two neighbours.
        """
        hits = []
        for c in self.vertex_cells[v]:
            if c < 0:
                continue
            cyc = self.cells[c]
            i = int(np.flatnonzero(cyc == v)[0])
            a, b = self.points[cyc[i - 1]], self.points[cyc[(i + 1) % len(cyc)]]
            p = self.points[v]
            d = b - a
            length = math.hypot(*d)
            dist = abs(d[0] * (p[1] - a[1]) - d[1] * (p[0] - a[0])) / length
            t = np.dot(p - a, d) / length**2
            if dist <= self.eps and 0.0 < t < 1.0:
                hits.append(int(c))
        return hits


# ----------------------------------------------------------------------
# arrangement of segments


def _clip_to_box(seg, lo, hi, eps):
    p0 = seg[:, 0]
    d = seg[:, 1] - seg[:, 0]
    t0 = np.zeros(len(seg))
    t1 = np.ones(len(seg))
    keep = np.ones(len(seg), dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        for ax in (0, 1):
            flat = d[:, ax] == 0
            keep &= ~(flat & ((p0[:, ax] < lo - eps) | (p0[:, ax] > hi + eps)))
            ta = (lo - p0[:, ax]) / d[:, ax]
            tb = (hi - p0[:, ax]) / d[:, ax]
            tmin = np.where(flat, -np.inf, np.minimum(ta, tb))
            tmax = np.where(flat, np.inf, np.maximum(ta, tb))
            t0 = np.maximum(t0, tmin)
            t1 = np.minimum(t1, tmax)
    keep &= t1 > t0
    a = p0 + t0[:, None] * d
    b = p0 + t1[:, None] * d
    out = np.stack([a, b], axis=1)[keep]
    out = np.clip(out, lo, hi)
    out[np.abs(out - lo) <= eps] = lo
    out[np.abs(out - hi) <= eps] = hi
    return out


def _frame_side(p, lo, hi):
    """Index of the frame side a snapped point lies on, -1 if none (or a corner)."""
    x, y = p[:, 0], p[:, 1]
    side = np.full(len(p), -1)
    bottom, right, top, left = y == lo, x == hi, y == hi, x == lo
    corner = (bottom | top) & (left | right)
    side[bottom] = 0
    side[right] = 1
    side[top] = 2
    side[left] = 3
    side[corner] = -1
    return side


def build_from_segments(segments, window, eps=None, eps_angle=DEFAULT_EPS_ANGLE):
    """Build the tessellation induced by line segments inside ``window``.

    Segments are clipped to the extended window and the window frame is
    added.  Crossings and T-junctions (an endpoint within ``eps`` of another
    segment) become vertices; points closer than ``eps`` are merged, keeping
    the coordinates of the input endpoint where one is involved.

    Parameters
    ----------
    segments : array_like, shape (n, 2, 2)
    window : Window
    eps : float, optional
        Snap tolerance, default ``1e-9 * window.length``.
    eps_angle : float, optional

    Returns
    -------
    PlanarTessellation

    Raises
    ------
    DegenerateSegment
        An input segment is shorter than ``eps``.
    DanglingEdge
        A segment end is not attached to anything.
    NonConvexFace
        A face of the arrangement is not convex.
    """
    eps = 1e-9 * window.length if eps is None else float(eps)
    seg = np.asarray(segments, dtype=float).reshape(-1, 2, 2)
    lengths = np.hypot(*(seg[:, 1] - seg[:, 0]).T)
    if np.any(lengths < eps):
        raise DegenerateSegment(f"segment {int(np.argmin(lengths))} shorter than eps")
    lo, hi = window.lo, window.hi
    seg = _clip_to_box(seg, lo, hi, eps)
    lengths = np.hypot(*(seg[:, 1] - seg[:, 0]).T)
    on_frame = np.zeros(len(seg), dtype=bool)
    for s in range(4):
        ax = 1 if s in (0, 2) else 0
        bound = lo if s in (0, 3) else hi
        on_frame |= (seg[:, 0, ax] == bound) & (seg[:, 1, ax] == bound)
    seg = seg[(lengths >= eps) & ~on_frame]
    n = len(seg)

    corners = np.array([[lo, lo], [hi, lo], [hi, hi], [lo, hi]])
    frame = np.stack([corners, np.roll(corners, -1, axis=0)], axis=1)
    all_seg = np.concatenate([seg, frame]) if n else frame
    points = [all_seg.reshape(-1, 2)]
    n_pts = 2 * len(all_seg)
    rec_seg, rec_t, rec_pid = [], [], []

    # T-junctions on the frame
    if n:
        ends = seg.reshape(-1, 2)
        side = _frame_side(ends, lo, hi)
        hit = np.flatnonzero(side >= 0)
        s = side[hit]
        coord = np.where(np.isin(s, (0, 2)), ends[hit, 0], ends[hit, 1])
        t = (coord - lo) / (hi - lo)
        t = np.where(np.isin(s, (2, 3)), 1.0 - t, t)
        rec_seg.append(n + s)
        rec_t.append(t)
        rec_pid.append(hit)

    if n > 1:
        mid = 0.5 * (seg[:, 0] + seg[:, 1])
        lengths = np.hypot(*(seg[:, 1] - seg[:, 0]).T)
        pairs = cKDTree(mid).query_pairs(lengths.max() + eps, output_type="ndarray")
        if len(pairs):
            i, j = pairs[:, 0], pairs[:, 1]
            a_i, a_j = seg[i, 0], seg[j, 0]
            d_i, d_j = seg[i, 1] - a_i, seg[j, 1] - a_j
            l_i, l_j = lengths[i], lengths[j]

            def touch(p, a, d, ln):
                rel = p - a
                t = (rel * d).sum(axis=1) / ln**2
                dist = np.abs(d[:, 0] * rel[:, 1] - d[:, 1] * rel[:, 0]) / ln
                ok = (dist <= eps) & (t * ln > eps) & ((1.0 - t) * ln > eps)
                return ok, t

            touched = np.zeros(len(i), dtype=bool)
            for p_of, end, tgt, a, d, ln in (
                (i, 0, j, a_j, d_j, l_j),
                (i, 1, j, a_j, d_j, l_j),
                (j, 0, i, a_i, d_i, l_i),
                (j, 1, i, a_i, d_i, l_i),
            ):
                ok, t = touch(seg[p_of, end], a, d, ln)
                touched |= ok
                rec_seg.append(tgt[ok])
                rec_t.append(t[ok])
                rec_pid.append(2 * p_of[ok] + end)

            denom = d_i[:, 0] * d_j[:, 1] - d_i[:, 1] * d_j[:, 0]
            nonpar = np.abs(denom) > 1e-12 * l_i * l_j
            r = a_j - a_i
            with np.errstate(divide="ignore", invalid="ignore"):
                t = (r[:, 0] * d_j[:, 1] - r[:, 1] * d_j[:, 0]) / denom
                u = (r[:, 0] * d_i[:, 1] - r[:, 1] * d_i[:, 0]) / denom
            cross = (
                nonpar & ~touched
                & (t * l_i > eps) & ((1 - t) * l_i > eps)
                & (u * l_j > eps) & ((1 - u) * l_j > eps)
            )
            k = np.flatnonzero(cross)
            if len(k):
                new = a_i[k] + t[k, None] * d_i[k]
                pid = n_pts + np.arange(len(k))
                n_pts += len(k)
                points.append(new)
                rec_seg += [i[k], j[k]]
                rec_t += [t[k], u[k]]
                rec_pid += [pid, pid]

    points = np.concatenate(points)
    # snap: merge points closer than eps, keep the lowest index
    close = cKDTree(points).query_pairs(eps, output_type="ndarray")
    if len(close):
        graph = coo_matrix(
            (np.ones(len(close)), (close[:, 0], close[:, 1])), shape=(n_pts, n_pts)
        )
        _, label = connected_components(graph, directed=False)
        rep = np.full(label.max() + 1, n_pts)
        np.minimum.at(rep, label, np.arange(n_pts))
        rep = rep[label]
    else:
        rep = np.arange(n_pts)

    n_all = len(all_seg)
    seg_ids = np.concatenate([np.repeat(np.arange(n_all), 2)] + rec_seg)
    ts = np.concatenate([np.tile([0.0, 1.0], n_all)] + rec_t)
    pids = np.concatenate([np.arange(2 * n_all)] + rec_pid)
    order = np.lexsort((ts, seg_ids))
    seg_ids, nodes = seg_ids[order], rep[pids[order]]
    same = seg_ids[1:] == seg_ids[:-1]
    a, b = nodes[:-1][same], nodes[1:][same]
    keep = a != b
    pairs = np.sort(np.stack([a[keep], b[keep]], axis=1), axis=1)
    pairs = np.unique(pairs, axis=0)

    used, inverse = np.unique(pairs, return_inverse=True)
    edges = inverse.reshape(-1, 2)
    pts = points[used]
    edges = _merge_collinear_chains(pts, edges, window, eps, eps_angle)
    used, inverse = np.unique(edges, return_inverse=True)
    return PlanarTessellation(pts[used], inverse.reshape(-1, 2), window, eps, eps_angle)


def _merge_collinear_chains(pts, edges, window, eps, eps_angle):
    """Remove interior degree-2 vertices joining two collinear edges."""
    degree = np.bincount(edges.reshape(-1), minlength=len(pts))
    lo, hi = window.lo, window.hi
    frame = (
        (np.abs(pts[:, 0] - lo) <= eps) | (np.abs(pts[:, 0] - hi) <= eps)
        | (np.abs(pts[:, 1] - lo) <= eps) | (np.abs(pts[:, 1] - hi) <= eps)
    )
    loose = np.flatnonzero((degree == 1) & ~frame)
    if len(loose):
        raise DanglingEdge(f"segment end at {pts[loose[0]]} is not attached")
    twos = np.flatnonzero((degree == 2) & ~frame)
    if not len(twos):
        return edges
    adj = {}
    for k, (a, b) in enumerate(edges):
        adj.setdefault(a, []).append(k)
        adj.setdefault(b, []).append(k)
    alive = np.ones(len(edges), dtype=bool)
    edges = edges.copy()
    for v in twos:
        k1, k2 = [k for k in adj[v] if alive[k]]
        u = edges[k1, 0] if edges[k1, 1] == v else edges[k1, 1]
        w = edges[k2, 0] if edges[k2, 1] == v else edges[k2, 1]
        d1, d2 = pts[v] - pts[u], pts[w] - pts[v]
        turn = math.atan2(d1[0] * d2[1] - d1[1] * d2[0], float(np.dot(d1, d2)))
        if abs(turn) > eps_angle:
            raise NonConvexFace(f"degree-2 bend at {pts[v]}")
        edges[k1] = (u, w)
        alive[k2] = False
        adj[w] = [k1 if k == k2 else k for k in adj[w]]
    return edges[alive]


# ----------------------------------------------------------------------
# classification and ownership


def classify_vertex(T, v):
    """Return ``("pi", owner)`` or ``("non_pi", None)`` for vertex ``v``."""
    if T.kind_pi[v]:
        return "pi", int(T.owner[v])
    return "non_pi", None


def zero_faces(T, z):
    """Corners (0-faces) of cell ``z`` in counter-clockwise order."""
    return T.corners[z]


def _check_marks(T, rho, cells):
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (T.n_cells,):
        raise MissingMark(f"expected {T.n_cells} marks, got shape {rho.shape}")
    cells = np.asarray(cells)
    bad = cells[~(rho[cells] > 0)]
    if len(bad):
        raise MissingMark(f"cell {int(bad[0])} has no positive mark")
    return rho


def vertex_alpha(T, rho):
    rho = _check_marks(T, rho, np.arange(T.n_cells))
    return np.array([rho[c[c >= 0]].sum() for c in T.vertex_cells])


def edge_alpha(T, rho):
    rho = _check_marks(T, rho, np.arange(T.n_cells))
    ec = T.edge_cells
    return np.where(ec >= 0, rho[np.maximum(ec, 0)], 0.0).sum(axis=1)


def pi_beta(T, rho):
    """Mark of the owner for every pi-vertex (NaN elsewhere)."""
    rho = _check_marks(T, rho, np.arange(T.n_cells))
    out = np.full(T.n_vertices, np.nan)
    out[T.kind_pi] = rho[T.owner[T.kind_pi]]
    return out


def z0_beta(T, rho):
    """Owner mark for each instance of the 0-face multiset (``T.z0_vertex``)."""
    rho = _check_marks(T, rho, np.arange(T.n_cells))
    return rho[T.z0_cell]


def vertex_gamma(T, rho):
    n_cells = np.array([np.count_nonzero(c >= 0) for c in T.vertex_cells])
    return n_cells * vertex_alpha(T, rho)


def edge_gamma(T, rho):
    return T.edge_lengths * edge_alpha(T, rho)


def cell_gamma(T, rho):
    rho = _check_marks(T, rho, np.arange(T.n_cells))
    return T.cell_area * rho


def mark_alpha(T, rho, kind, index):
    """Total mark of the cells adjacent to a vertex or an edge."""
    if kind == "vertex":
        cells = T.vertex_cells[index]
    elif kind == "edge":
        cells = T.edge_cells[index]
    else:
        raise ValueError(f"alpha is defined for vertices and edges, not {kind!r}")
    cells = cells[cells >= 0]
    rho = _check_marks(T, rho, cells)
    return float(rho[cells].sum())


def mark_beta(T, rho, kind, index):
    """Mark of the owner cell.

    ``kind="z0"`` addresses instance ``index`` of the 0-face multiset,
    ``kind="pi"`` a pi-vertex by vertex id.
    """
    if kind == "z0":
        cell = T.z0_cell[index]
    elif kind == "pi":
        if not T.kind_pi[index]:
            raise ValueError(f"vertex {index} is not a pi-vertex")
        cell = T.owner[index]
    else:
        raise ValueError(f"beta is defined for 0-faces and pi-vertices, not {kind!r}")
    rho = _check_marks(T, rho, [cell])
    return float(rho[cell])


def mark_gamma(T, rho, kind, index):
    """Count-, length- or area-weighted mark of a vertex, edge or cell."""
    if kind == "vertex":
        n = int(np.count_nonzero(T.vertex_cells[index] >= 0))
        return n * mark_alpha(T, rho, "vertex", index)
    if kind == "edge":
        return float(T.edge_lengths[index]) * mark_alpha(T, rho, "edge", index)
    if kind == "cell":
        rho = _check_marks(T, rho, [index])
        return float(T.cell_area[index] * rho[index])
    raise ValueError(f"gamma is defined for vertices, edges and cells, not {kind!r}")


def edges_intersecting_cell(T, z):
    """Number of edges whose closed segment meets the closed cell ``z``.

    In a tessellation an edge can only meet a cell along its boundary, so
    these are the edges incident to some boundary vertex of ``z``.
    """
    touching = set()
    for v in T.cells[z]:
        touching.update(T.vertex_edges[v].tolist())
    return len(touching)


# ----------------------------------------------------------------------
# serialization


def planar_to_dict(T, marks=None):
    verts = []
    for v, (x, y) in enumerate(T.points):
        entry = {"id": v, "x": float(x), "y": float(y),
                 "kind": "pi" if T.kind_pi[v] else "non_pi"}
        if T.kind_pi[v]:
            entry["owner"] = int(T.owner[v])
        verts.append(entry)
    return {
        "schema": "columntess.planar/1",
        "window": {"length": T.window.length, "margin": T.window.margin},
        "eps": T.eps,
        "eps_angle": T.eps_angle,
        "vertices": verts,
        "edges": T.edges.tolist(),
        "cells": [c.tolist() for c in T.cells],
        "marks": None if marks is None else [float(r) for r in marks],
    }


def planar_from_dict(doc):
    """Inverse of :func:`planar_to_dict`; returns ``(T, marks)``."""
    window = Window(doc["window"]["length"], doc["window"]["margin"])
    pts = [(v["x"], v["y"]) for v in doc["vertices"]]
    T = PlanarTessellation(pts, doc["edges"], window, doc["eps"], doc["eps_angle"])
    stored = [v["kind"] == "pi" for v in doc["vertices"]]
    if stored != T.kind_pi.tolist() or [c.tolist() for c in T.cells] != doc["cells"]:
        raise TessellationError("stored classification does not match the geometry")
    marks = None if doc.get("marks") is None else np.array(doc["marks"], dtype=float)
    return T, marks


def dump_planar(T, path, marks=None):
    with open(path, "w") as fh:
        json.dump(planar_to_dict(T, marks), fh)


def load_planar(path):
    with open(path) as fh:
        return planar_from_dict(json.load(fh))
