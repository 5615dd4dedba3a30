"""Geometric estimators for column tessellations.

All adjacency and interior relations are decided from element geometry
with tolerances; the builder's incidence bookkeeping is only used by
:func:`cross_check`.  Cell faces (corners, ridges, facets) and plate sides
are re-derived here from the footprint polygons by a collinearity test.

An object is typical when the planar reference point of its footprint
(point, segment midpoint or polygon centroid) lies in the inner window; the
whole height circle is always used, so intensities are counts divided by
``L^2 H``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._geometry import ShapeSet, contained_pairs, interior_mask
from ._summary import Summary
from .errors import EmptyRegion

__all__ = [
    "ColumnGeometry",
    "ColumnSummary",
    "estimate_intensities",
    "estimate_adjacency",
    "estimate_interior_params",
    "estimate_metric",
    "estimate_column",
    "cross_check",
]

EPS_TURN = 1e-9


def _per_owner(owner, values, n):
    return np.bincount(owner, weights=values, minlength=n)


def _padded_polygons(T):
    K = max(len(c) for c in T.cells)
    poly = np.empty((T.n_cells, K, 2))
    nv = np.empty(T.n_cells, np.int64)
    for c, cyc in enumerate(T.cells):
        xy = T.points[cyc]
        poly[c, : len(cyc)] = xy
        poly[c, len(cyc):] = xy[-1]
        nv[c] = len(cyc)
    return poly, nv


def polygon_corners(xy, eps_turn=EPS_TURN):
    """Boolean mask of the vertices of a convex polygon where it turns."""
    d1 = xy - np.roll(xy, 1, axis=0)
    d2 = np.roll(xy, -1, axis=0) - xy
    cross = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    norm = np.hypot(*d1.T) * np.hypot(*d2.T)
    return cross > eps_turn * norm


def _repeat_ranges(start, count):
    total = int(count.sum())
    return np.repeat(start, count) + (np.arange(total) - np.repeat(np.cumsum(count) - count, count))


class ColumnGeometry:
    """Product-shape view of a column tessellation plus derived face multisets.

    Attributes
    ----------
    V, E, P, Z : ShapeSet
        Vertices, edges, plates and cells in builder order.
    Z0, Z1, Z2, P1 : ShapeSet
        Prism corners, ridges, facets and plate sides, with owners in
        ``Z0_owner`` etc. (cell or plate index).
    """

    def __init__(self, CT):
        T, H = CT.planar, CT.height
        self.CT, self.height = CT, H
        self.window = T.window
        self.eps = T.eps
        self.eps_z = CT.eps_z
        pts = T.points
        self.V = ShapeSet.points(pts[CT.vertex_pv], CT.vertex_z, np.zeros(CT.n_vertices), H)

        ev = CT.edge_vertical
        e_a = np.where(ev[:, None], pts[np.where(ev, CT.edge_ref, 0)], pts[T.edges[np.where(ev, 0, CT.edge_ref), 0]])
        e_b = np.where(ev[:, None], e_a, pts[T.edges[np.where(ev, 0, CT.edge_ref), 1]])
        E = ShapeSet.segments(e_a, e_b, CT.edge_z, CT.edge_dz, H)
        E.nv = np.where(ev, 1, 2)
        self.E = E

        poly, pnv = _padded_polygons(T)
        self._poly, self._pnv = poly, pnv
        hp = CT.plate_horizontal
        K = poly.shape[1]
        pv = np.empty((CT.n_plates, K, 2))
        ref = CT.plate_ref
        pv[hp] = poly[ref[hp]]
        seg_a = pts[T.edges[ref[~hp], 0]]
        seg_b = pts[T.edges[ref[~hp], 1]]
        pv[~hp, 0] = seg_a
        pv[~hp, 1:] = seg_b[:, None]
        pnv_plate = np.where(hp, pnv[np.where(hp, ref, 0)], 2)
        # columns without cuts hold one cell taller than the period, a ring
        self.ring_cols = np.flatnonzero(CT.n_cuts == 0)
        ec = T.edge_cells
        cut = (ec >= 0) & (CT.n_cuts[np.maximum(ec, 0)] > 0)
        self.ring_edges = np.flatnonzero(~cut.any(axis=1))
        nr, ne = len(self.ring_cols), len(self.ring_edges)
        ra, rb = pts[T.edges[self.ring_edges, 0]], pts[T.edges[self.ring_edges, 1]]
        self.P = ShapeSet.concat(
            ShapeSet(pv, pnv_plate, CT.plate_z, CT.plate_dz, H),
            ShapeSet.segments(ra, rb, np.zeros(ne), np.full(ne, H), H, ring=True),
        )
        rc = self.ring_cols
        self.Z = ShapeSet.concat(
            ShapeSet(poly[CT.cell_col], pnv[CT.cell_col], CT.cell_z, CT.cell_dz, H),
            ShapeSet(poly[rc], pnv[rc], np.zeros(nr), np.full(nr, H), H, ring=np.ones(nr, bool)),
        )
        self._derive_faces()

    # ------------------------------------------------------------------

    def _derive_faces(self):
        H = self.height
        poly, pnv = self._poly, self._pnv
        n_planar = len(pnv)
        corner_xy = []
        for c in range(n_planar):
            xy = poly[c, : pnv[c]]
            corner_xy.append(xy[polygon_corners(xy)])
        n_corner = np.array([len(x) for x in corner_xy], dtype=np.int64)
        c_start = np.concatenate(([0], np.cumsum(n_corner)[:-1]))
        flat = np.concatenate(corner_xy)
        succ = np.concatenate([np.roll(x, -1, axis=0) for x in corner_xy])
        self.corner_polygons = ShapeSet.polygons(corner_xy, np.zeros(n_planar), np.zeros(n_planar), H)
        self.n_corner_planar = n_corner

        CT = self.CT
        col = CT.cell_col
        n_z = len(col)
        Z = self.Z.take(np.arange(n_z))
        cnt = n_corner[col]
        own = np.repeat(np.arange(n_z), cnt)
        k = _repeat_ranges(c_start[col], cnt)
        a, b = flat[k], succ[k]
        zlo = Z.z[own]
        top = np.mod(Z.z + Z.dz, H)
        zhi = top[own]
        dz = Z.dz[own]
        zero = np.zeros(len(own))

        rc = self.ring_cols
        r_cnt = n_corner[rc]
        r_own = n_z + np.repeat(np.arange(len(rc)), r_cnt)
        rk = _repeat_ranges(c_start[rc], r_cnt)
        r_zero, r_full = np.zeros(len(r_own)), np.full(len(r_own), H)

        self.Z0 = ShapeSet.points(np.concatenate([a, a]), np.concatenate([zlo, zhi]),
                                  np.concatenate([zero, zero]), H)
        self.Z0_owner = np.concatenate([own, own])
        vert_ridge = ShapeSet.points(a, zlo, dz, H)
        hor_ridge = ShapeSet.segments(np.concatenate([a, a]), np.concatenate([b, b]),
                                      np.concatenate([zlo, zhi]), np.concatenate([zero, zero]), H)
        ring_ridge = ShapeSet.points(flat[rk], r_zero, r_full, H, ring=True)
        self.Z1 = ShapeSet.concat(vert_ridge, hor_ridge, ring_ridge)
        self.Z1_owner = np.concatenate([own, own, own, r_own])

        cp = self.corner_polygons
        caps = ShapeSet(
            np.concatenate([cp.verts[col], cp.verts[col]]),
            np.concatenate([cp.nv[col], cp.nv[col]]),
            np.concatenate([Z.z, top]),
            np.zeros(2 * n_z),
            H,
        )
        sides = ShapeSet.segments(a, b, zlo, dz, H)
        ring_sides = ShapeSet.segments(flat[rk], succ[rk], r_zero, r_full, H, ring=True)
        self.Z2 = ShapeSet.concat(caps, sides, ring_sides)
        self.Z2_owner = np.concatenate([np.arange(n_z), np.arange(n_z), own, r_own])
        self.Z2_horizontal = np.concatenate([np.ones(2 * n_z, bool),
                                             np.zeros(len(own) + len(r_own), bool)])

        # plate sides
        P = self.P
        hp = np.flatnonzero(CT.plate_horizontal)
        hc = CT.plate_ref[hp]
        cnt = n_corner[hc]
        h_own = np.repeat(hp, cnt)
        k = _repeat_ranges(c_start[hc], cnt)
        hs = ShapeSet.segments(flat[k], succ[k], P.z[h_own], np.zeros(len(h_own)), H)
        vp = np.flatnonzero(~CT.plate_horizontal)
        va, vb = P.verts[vp, 0], P.verts[vp, 1]
        vz, vdz = P.z[vp], P.dz[vp]
        vtop = np.mod(vz + vdz, H)
        zer = np.zeros(len(vp))
        rp = CT.n_plates + np.arange(len(self.ring_edges))
        rpa, rpb = P.verts[rp, 0], P.verts[rp, 1]
        self.P1 = ShapeSet.concat(
            hs,
            ShapeSet.segments(np.concatenate([va, va]), np.concatenate([vb, vb]),
                              np.concatenate([vz, vtop]), np.concatenate([zer, zer]), H),
            ShapeSet.points(np.concatenate([va, vb]), np.concatenate([vz, vz]),
                            np.concatenate([vdz, vdz]), H),
            ShapeSet.points(np.concatenate([rpa, rpb]), np.zeros(2 * len(rp)),
                            np.full(2 * len(rp), H), H, ring=True),
        )
        self.P1_owner = np.concatenate([h_own, vp, vp, vp, vp, rp, rp])

    # ------------------------------------------------------------------

    def typical(self, S):
        """Indices of objects with reference point in the inner window; rings never count."""
        return np.flatnonzero(self.window.contains(S.ref_xy()) & ~S.ring_mask())

    def pairs(self, A, B, a_idx=None, b_idx=None):
        return contained_pairs(A, B, self.eps, self.eps_z, a_idx, b_idx)

    @staticmethod
    def length(S):
        """Length of one-dimensional objects (vertical arcs or horizontal segments)."""
        return np.where(S.nv == 1, S.dz, S.measure_xy())

    @staticmethod
    def area(S):
        """Area of two-dimensional objects (horizontal polygons or vertical rectangles)."""
        return np.where(S.nv >= 3, S.measure_xy(), S.measure_xy() * S.dz)

    @staticmethod
    def perimeter(S):
        return np.where(S.nv >= 3, S.perimeter_xy(), 2.0 * (S.measure_xy() + S.dz))

    def midpoints(self, S, idx):
        return S.ref_xy()[idx], np.mod(S.z[idx] + 0.5 * S.dz[idx], self.height)


@dataclass
class ColumnSummary(Summary):
    """Intensities, adjacency means, interior parameters and metric means."""

    lam_v: float = math.nan
    lam_e: float = math.nan
    lam_e_hor: float = math.nan
    lam_e_vert: float = math.nan
    lam_p: float = math.nan
    lam_p_hor: float = math.nan
    lam_p_vert: float = math.nan
    lam_z: float = math.nan
    lam_p1: float = math.nan
    lam_z1: float = math.nan
    lam_z2: float = math.nan
    mu_ve: float = math.nan
    mu_pv: float = math.nan
    mu_ep: float = math.nan
    mu_zv: float = math.nan
    mu_ze: float = math.nan
    nu0_z: float = math.nan
    nu1_z: float = math.nan
    xi: float = math.nan
    kappa: float = math.nan
    psi: float = math.nan
    tau: float = math.nan
    ell_e: float = math.nan
    ell_e_pi: float = math.nan
    ell_p: float = math.nan
    ell_z: float = math.nan
    ell_z1: float = math.nan
    ell_p1: float = math.nan
    ell_z2: float = math.nan
    ell_ze: float = math.nan
    ell_z2e: float = math.nan
    area_p: float = math.nan
    area_z: float = math.nan
    area_z2: float = math.nan
    area_zz2: float = math.nan
    vol_z: float = math.nan
    stderr: dict = field(default_factory=dict)
    weights: dict = field(default_factory=dict)


def _geometry(CT_or_G):
    return CT_or_G if isinstance(CT_or_G, ColumnGeometry) else ColumnGeometry(CT_or_G)


def estimate_intensities(CT, summary=None):
    """Counts of typical objects per unit volume, multisets with multiplicity.

    Raises
    ------
    EmptyRegion
        When no cell is typical.
    """
    G = _geometry(CT)
    vol = G.window.area * G.height
    S = ColumnSummary() if summary is None else summary
    counts = {}
    E, P = G.E, G.P
    te, tp = G.typical(E), G.typical(P)
    counts["lam_v"] = len(G.typical(G.V))
    counts["lam_e"] = len(te)
    counts["lam_e_hor"] = int(np.count_nonzero(E.nv[te] == 2))
    counts["lam_e_vert"] = int(np.count_nonzero(E.nv[te] == 1))
    counts["lam_p"] = len(tp)
    counts["lam_p_hor"] = int(np.count_nonzero(P.nv[tp] >= 3))
    counts["lam_p_vert"] = int(np.count_nonzero(P.nv[tp] == 2))
    counts["lam_z"] = len(G.typical(G.Z))
    counts["lam_p1"] = len(G.typical(G.P1))
    counts["lam_z1"] = len(G.typical(G.Z1))
    counts["lam_z2"] = len(G.typical(G.Z2))
    if counts["lam_z"] == 0:
        raise EmptyRegion("no cell has its reference point in the observation region")
    for k, n in counts.items():
        S.put_intensity(k, n, vol)
    return S


class _Adjacency:
    """Cached containment pairs shared by the estimators."""

    def __init__(self, G):
        self.G = G
        self._cache = {}

    def get(self, name, a_name, b_name, typical_side):
        if name not in self._cache:
            G = self.G
            A, B = getattr(G, a_name), getattr(G, b_name)
            if typical_side == "a":
                ia, jb = G.pairs(A, B, a_idx=G.typical(A))
            else:
                ia, jb = G.pairs(A, B, b_idx=G.typical(B))
            self._cache[name] = (ia, jb)
        return self._cache[name]


def _count_per(idx, keys, n):
    return np.bincount(idx, minlength=n)[keys]


def _wants(wanted):
    return (lambda name: True) if wanted is None else (lambda name: name in wanted)


def estimate_adjacency(CT, summary=None, adj=None, wanted=None):
    """Mean numbers of adjacent objects, adjacency being containment.

    ``wanted`` optionally restricts the slots computed.
    """
    G = _geometry(CT)
    adj = _Adjacency(G) if adj is None else adj
    S = ColumnSummary() if summary is None else summary
    want = _wants(wanted)
    tv, te, tp, tz = G.typical(G.V), G.typical(G.E), G.typical(G.P), G.typical(G.Z)
    nz = len(G.Z)
    if want("mu_ve"):
        _, v_in = adj.get("EV", "E", "V", "b")
        S.put("mu_ve", _count_per(v_in, tv, len(G.V)))
    if want("mu_pv"):
        p_of, _ = adj.get("PV", "P", "V", "a")
        S.put("mu_pv", _count_per(p_of, tp, len(G.P)))
    if want("mu_ep"):
        _, e_in = adj.get("PE", "P", "E", "b")
        S.put("mu_ep", _count_per(e_in, te, len(G.E)))
    if want("mu_zv"):
        z_of, _ = adj.get("ZV", "Z", "V", "a")
        S.put("mu_zv", _count_per(z_of, tz, nz))
    if want("mu_ze"):
        z_of_e, _ = adj.get("ZE", "Z", "E", "a")
        S.put("mu_ze", _count_per(z_of_e, tz, nz))
    if want("nu0_z"):
        S.put("nu0_z", _count_per(G.Z0_owner, tz, nz))
    if want("nu1_z"):
        S.put("nu1_z", _count_per(G.Z1_owner, tz, nz))
    return S


def _interior_hits(G, adj, name, A_name, B, items, points):
    A = getattr(G, A_name)
    ia, jb = adj.get(name, A_name, B, "b")
    p, q = points
    shape = getattr(G, B)
    # position of each item among the queried points
    pos = np.full(len(shape), -1)
    pos[items] = np.arange(len(items))
    k = pos[jb]
    keep = k >= 0
    ia, jb, k = ia[keep], jb[keep], k[keep]
    inside = interior_mask(A, ia, p[k], q[k], G.eps, G.eps_z)
    return ia[inside], jb[inside]


def pi_edge_mask(G, adj=None):
    """Geometric pi-edges among typical edges (closed in a facet, midpoint interior)."""
    adj = _Adjacency(G) if adj is None else adj
    te = G.typical(G.E)
    _, jb = _interior_hits(G, adj, "Z2E", "Z2", "E", te, G.midpoints(G.E, te))
    hit = np.zeros(len(G.E), bool)
    hit[jb] = True
    return te, hit[te]


def hemi_mask(G, adj=None):
    adj = _Adjacency(G) if adj is None else adj
    tv = G.typical(G.V)
    _, jb = _interior_hits(G, adj, "Z2V", "Z2", "V", tv, G.midpoints(G.V, tv))
    hit = np.zeros(len(G.V), bool)
    hit[jb] = True
    return tv, hit[tv]


def interior_counts(G, which, adj=None):
    """Per typical vertex, number of ridge (``Z1``) or plate-side (``P1``) interiors."""
    adj = _Adjacency(G) if adj is None else adj
    tv = G.typical(G.V)
    _, jb = _interior_hits(G, adj, which + "V", which, "V", tv, G.midpoints(G.V, tv))
    return tv, np.bincount(jb, minlength=len(G.V))[tv]


def estimate_interior_params(CT, summary=None, adj=None, wanted=None):
    """Interior parameters: pi-edge and hemi-vertex fractions, ridge and side counts."""
    G = _geometry(CT)
    adj = _Adjacency(G) if adj is None else adj
    S = ColumnSummary() if summary is None else summary
    want = _wants(wanted)
    if want("xi"):
        _, pe = pi_edge_mask(G, adj)
        S.put("xi", pe)
    if want("kappa"):
        _, hv = hemi_mask(G, adj)
        S.put("kappa", hv)
    if want("psi"):
        _, psi = interior_counts(G, "Z1", adj)
        S.put("psi", psi)
    if want("tau"):
        _, tau = interior_counts(G, "P1", adj)
        S.put("tau", tau)
    return S


def estimate_metric(CT, summary=None, adj=None, wanted=None):
    """Mean lengths, areas and volumes of typical objects.

    ``ell_ze`` sums the lengths of all edges in the closed cell,
    ``ell_z2e`` does the same per facet instance.  ``area_zz2`` adds to a
    cell's own facets the horizontal facets of other cells contained in its
    boundary.
    """
    G = _geometry(CT)
    adj = _Adjacency(G) if adj is None else adj
    S = ColumnSummary() if summary is None else summary
    want = _wants(wanted)

    te, tp, tz = G.typical(G.E), G.typical(G.P), G.typical(G.Z)
    nz = len(G.Z)
    e_len = G.length(G.E)
    if want("ell_e"):
        S.put("ell_e", e_len[te])
    if want("ell_e_pi"):
        _, pe = pi_edge_mask(G, adj)
        S.put("ell_e_pi", e_len[te][pe])
    if want("ell_p"):
        S.put("ell_p", G.perimeter(G.P)[tp])
    if want("area_p"):
        S.put("area_p", G.area(G.P)[tp])
    if want("ell_z"):
        S.put("ell_z", _per_owner(G.Z1_owner, G.length(G.Z1), nz)[tz])
    if want("ell_z1"):
        S.put("ell_z1", G.length(G.Z1)[G.typical(G.Z1)])
    if want("ell_p1"):
        S.put("ell_p1", G.length(G.P1)[G.typical(G.P1)])
    t2 = G.typical(G.Z2)
    z2_area = G.area(G.Z2)
    if want("ell_z2"):
        S.put("ell_z2", G.perimeter(G.Z2)[t2])
    if want("area_z2"):
        S.put("area_z2", z2_area[t2])
    if want("ell_ze"):
        z_of_e, e_in = adj.get("ZE", "Z", "E", "a")
        S.put("ell_ze", _per_owner(z_of_e, e_len[e_in], nz)[tz])
    if want("ell_z2e"):
        f_of_e, e_in_f = G.pairs(G.Z2, G.E, a_idx=t2)
        S.put("ell_z2e", _per_owner(f_of_e, e_len[e_in_f], len(G.Z2))[t2])
    own = _per_owner(G.Z2_owner, z2_area, nz)
    if want("area_z"):
        S.put("area_z", own[tz])
    if want("area_zz2"):
        z_of_f, f_in = G.pairs(G.Z, G.Z2, a_idx=tz, b_idx=np.flatnonzero(G.Z2_horizontal))
        foreign = G.Z2_owner[f_in] != z_of_f
        extra = _per_owner(z_of_f[foreign], z2_area[f_in[foreign]], nz)
        S.put("area_zz2", (own + extra)[tz])
    if want("vol_z"):
        S.put("vol_z", (G.Z.measure_xy() * G.Z.dz)[tz])
    return S


BLOCKS = ("intensities", "adjacency", "interior", "metric")


def estimate_column(CT, blocks=BLOCKS, wanted=None):
    """Run the requested estimator blocks on one realization.

    ``wanted`` (a collection of slot names) skips every other slot, which
    saves the containment searches they would need.  Intensities are cheap
    and always computed in full.
    """
    G = _geometry(CT)
    adj = _Adjacency(G)
    S = ColumnSummary()
    if "intensities" in blocks:
        estimate_intensities(G, S)
    if "adjacency" in blocks:
        estimate_adjacency(G, S, adj, wanted)
    if "interior" in blocks:
        estimate_interior_params(G, S, adj, wanted)
    if "metric" in blocks:
        estimate_metric(G, S, adj, wanted)
    return S


def regular_vertices(CT):
    """Planar vertices all of whose adjacent columns carry at least two cuts.

    On the height circle a column with a single cut yields a cell touching
    itself, which makes local case analysis degenerate.
    """
    T = CT.planar
    ok = np.ones(T.n_vertices, bool)
    for v, cells in enumerate(T.vertex_cells):
        cells = cells[cells >= 0]
        ok[v] = len(cells) > 0 and bool(np.all(CT.n_cuts[cells] >= 2))
    return ok & ~T.boundary_vertex


def cross_check(CT):
    """Compare geometric findings with the builder's structural flags.

    Returns fractions of agreeing typical instances (1.0 is full agreement)
    together with the number of instances examined.  Vertices over planar
    vertices that are not :func:`regular_vertices` are excluded.
    """
    G = _geometry(CT)
    adj = _Adjacency(G)
    T = CT.planar
    reg = regular_vertices(CT)
    out = {}

    def frac(mask):
        return float(np.mean(mask)) if len(mask) else 1.0

    te, pe = pi_edge_mask(G, adj)
    ev = CT.edge_vertical[te]
    ref = CT.edge_ref[te]
    e_reg = np.where(ev, reg[np.where(ev, ref, 0)],
                     reg[T.edges[np.where(ev, 0, ref), 0]] & reg[T.edges[np.where(ev, 0, ref), 1]])
    out["pi_edges"] = frac((pe == CT.edge_pi[te])[e_reg])
    out["pi_edges_n"] = int(e_reg.sum())

    tv, hv = hemi_mask(G, adj)
    pv = CT.vertex_pv[tv]
    v_reg = reg[pv]
    out["hemi_vertices"] = frac((hv == CT.vertex_hemi[tv])[v_reg])
    out["hemi_vertices_n"] = int(v_reg.sum())

    m = T.degree[pv]
    pi = T.kind_pi[pv]
    hemi = CT.vertex_hemi[tv]
    _, psi = interior_counts(G, "Z1", adj)
    want_psi = np.where(~pi, m - 1, np.where(hemi, m - 2, m + 1))
    out["psi_table"] = frac((psi == want_psi)[v_reg])
    _, tau = interior_counts(G, "P1", adj)
    want_tau = np.where(~pi, m - 2, np.where(hemi, m - 2, m - 1))
    out["tau_table"] = frac((tau == want_tau)[v_reg])

    z_of, v_in = G.pairs(G.Z, G.V, b_idx=tv)
    n_cells = np.bincount(v_in, minlength=len(G.V))[tv]
    p_of, v_in_p = G.pairs(G.P, G.V, b_idx=tv)
    n_plates = np.bincount(v_in_p, minlength=len(G.V))[tv]
    out["vertex_cells_plates"] = frac(((n_cells == m + 1) & (n_plates == m + 3))[v_reg])
    _, v_in_e = adj.get("EV", "E", "V", "b")
    out["vertex_edges"] = frac((np.bincount(v_in_e, minlength=len(G.V))[tv] == 4)[v_reg])

    p_of_e, e_in = adj.get("PE", "P", "E", "b")
    n_p = np.bincount(e_in, minlength=len(G.E))[te]
    n_hp = np.bincount(e_in[G.P.nv[p_of_e] >= 3], minlength=len(G.E))[te]
    want = np.where(ev, T.degree[np.where(ev, ref, 0)], 3)
    ok = (n_p == want) & np.where(ev, n_hp == 0, n_hp == 1)
    out["edge_plates"] = frac(ok[e_reg])

    from .column import enumerate_faces

    faces = enumerate_faces(CT)
    nz = CT.n_cells
    agree = True
    for name, owner in (("Z0", G.Z0_owner), ("Z1", G.Z1_owner), ("Z2", G.Z2_owner)):
        owner = owner[owner < nz]
        agree &= np.array_equal(np.bincount(owner, minlength=nz),
                                np.bincount(faces[name]["owner"], minlength=nz))
    p1 = G.P1_owner[G.P1_owner < CT.n_plates]
    agree &= np.array_equal(np.bincount(p1, minlength=CT.n_plates),
                            np.bincount(faces["P1"]["owner"], minlength=CT.n_plates))
    out["face_counts"] = 1.0 if agree else 0.0
    return out
