"""Column tessellations: prisms stacked over the cells of a planar tessellation.

Every planar cell ``z`` carries a vertical column which is cut by horizontal
plates at the points of a stationary point process of intensity ``rho_z``.
Heights live on a circle of length ``H`` so the complex has no top or bottom
boundary.

Element ids follow the cuts.  Cuts are numbered column by column in
increasing height; the cell starting at cut ``g`` and the horizontal plate at
cut ``g`` both get id ``g``.  Columns without cuts contribute no element;
the estimators treat such a column as one cell taller than the window.
"""

import json
import logging
from dataclasses import asdict, dataclass

import numpy as np

from .errors import CoincidentCuts, ConfigError, NonpositiveScale, TessellationError
from .planar import planar_from_dict, planar_to_dict

log = logging.getLogger(__name__)

__all__ = [
    "ZProcessSpec",
    "ColumnTessellation",
    "assign_marks",
    "build",
    "enumerate_faces",
]

MARK_RULES = ("constant", "area_proportional", "perimeter_proportional")


@dataclass(frozen=True)
class ZProcessSpec:
    """Cut process along every column.

    Attributes
    ----------
    kind : {"poisson", "unit_lattice"}
        ``poisson`` draws ``Poisson(rho * H)`` uniform heights per column;
        ``unit_lattice`` places cuts at ``zeta_0 + k`` with one uniform phase
        per column and needs ``rho = 1`` and an integer ``H``.
    height : float
        Period ``H`` of the height circle.
    """

    kind: str = "poisson"
    height: float = 1.0

    def __post_init__(self):
        if self.kind not in ("poisson", "unit_lattice"):
            raise ConfigError(f"unknown z-process kind {self.kind!r}")
        if not self.height > 0:
            raise ConfigError("height must be positive")
        if self.kind == "unit_lattice" and self.height != round(self.height):
            raise ConfigError("unit_lattice needs an integer height")


def assign_marks(T, rule="constant", scale=1.0):
    """Cell marks ``rho`` from a deterministic rule.

    ``constant`` gives ``rho_z = c``, ``area_proportional`` gives
    ``c * area(z)`` and ``perimeter_proportional`` gives ``c * perimeter(z)``.
    """
    if not scale > 0:
        raise NonpositiveScale(f"mark scale must be positive, got {scale}")
    if rule == "constant":
        return np.full(T.n_cells, float(scale))
    if rule == "area_proportional":
        return scale * np.asarray(T.cell_area, dtype=float)
    if rule == "perimeter_proportional":
        return scale * np.asarray(T.cell_perimeter, dtype=float)
    raise ConfigError(f"unknown mark rule {rule!r}; expected one of {MARK_RULES}")


def _draw_cuts(rng, rho, zspec):
    H = zspec.height
    if zspec.kind == "unit_lattice":
        return rng.uniform(0.0, 1.0) + np.arange(int(round(H)), dtype=float)
    return np.sort(rng.uniform(0.0, H, rng.poisson(rho * H)))


def _sample_cuts(T, rho, zspec, seed, max_retries=10):
    rho = np.asarray(rho, dtype=float)
    if zspec.kind == "unit_lattice" and not np.all(rho == 1.0):
        raise ConfigError("unit_lattice cuts need rho = 1 in every cell")
    if np.any(~(rho > 0)):
        raise NonpositiveScale("every cell mark must be positive")
    if zspec.kind == "poisson":
        longest = 1.0 / rho.min()
        if zspec.height < 5 * longest:
            log.warning(
                "height %g is below 5x the longest expected cell height %g",
                zspec.height, longest,
            )
    cuts = [
        _draw_cuts(np.random.default_rng([seed, c]), rho[c], zspec) for c in range(T.n_cells)
    ]
    for attempt in range(1, max_retries + 1):
        bad = _coincident_columns(T, cuts, zspec.height)
        if not len(bad):
            return cuts
        log.warning("coincident cuts in columns %s; resampling (attempt %d)", bad.tolist(), attempt)
        for c in bad:
            cuts[c] = _draw_cuts(np.random.default_rng([seed, c, attempt]), rho[c], zspec)
    raise CoincidentCuts(f"cut heights still coincide after {max_retries} resamplings")


def _line_entries(T, n_cuts):
    """(planar vertex, column, k-th cut) for every cut of every column at a vertex."""
    pv = np.concatenate([np.full(len(c), v) for v, c in enumerate(T.vertex_cells)])
    col = np.concatenate(T.vertex_cells)
    keep = col >= 0
    pv, col = pv[keep], col[keep]
    reps = n_cuts[col]
    pv = np.repeat(pv, reps)
    col_r = np.repeat(col, reps)
    offsets = np.repeat(np.cumsum(reps) - reps, reps)
    k = np.arange(reps.sum()) - offsets
    return pv, col_r, k


def _coincident_columns(T, cuts, H):
    eps_z = 1e-12 * H
    n_cuts = np.array([len(c) for c in cuts])
    start = np.concatenate(([0], np.cumsum(n_cuts)[:-1]))
    flat = np.concatenate(cuts) if n_cuts.sum() else np.zeros(0)
    pv, col, k = _line_entries(T, n_cuts)
    if not len(pv):
        return np.zeros(0, dtype=np.int64)
    z = flat[start[col] + k]
    order = np.lexsort((z, pv))
    pv, col, z = pv[order], col[order], z[order]
    same = pv[1:] == pv[:-1]
    gap = np.diff(z)
    hit = same & (gap < eps_z)
    # wrap-around between the last and first cut on each line
    first = np.flatnonzero(np.concatenate(([True], ~same)))
    last = np.concatenate((first[1:] - 1, [len(pv) - 1]))
    wrap = (last > first) & (z[first] + H - z[last] < eps_z)
    bad = np.concatenate((np.maximum(col[:-1][hit], col[1:][hit]),
                          np.maximum(col[first][wrap], col[last][wrap])))
    return np.unique(bad)


class ColumnTessellation:
    """Vertices, edges, plates and cells of a column tessellation.

    Built by :func:`build`; the arrays are read-only.

    Attributes
    ----------
    vertex_pv, vertex_z, vertex_col : ndarray
        Planar vertex, height and the column whose cut created the vertex.
    vertex_hemi : ndarray of bool
        Structural hemi flag: the planar vertex is a pi-vertex and the cut
        belongs to a column other than its owner.
    edge_vertical, edge_ref, edge_z, edge_dz, edge_pi : ndarray
        ``edge_ref`` is a planar vertex for vertical edges and a planar edge
        for horizontal ones.  ``edge_pi`` is the structural pi-edge flag.
    plate_horizontal, plate_ref, plate_z, plate_dz, plate_cells : ndarray
        ``plate_ref`` is a planar cell (horizontal) or planar edge (vertical).
    cell_col, cell_z, cell_dz : ndarray
    """

    def __init__(self, planar, rho, zspec, seed, cuts):
        self.planar = planar
        self.rho = np.array(rho, dtype=float)
        self.zspec = zspec
        self.seed = int(seed)
        self.height = float(zspec.height)
        self.eps_z = 1e-12 * self.height
        self.cuts = [np.sort(np.asarray(c, dtype=float)) for c in cuts]
        self._assemble()
        for value in vars(self).values():
            if isinstance(value, np.ndarray):
                value.setflags(write=False)

    def _assemble(self):
        T, H = self.planar, self.height
        n_cuts = np.array([len(c) for c in self.cuts], dtype=np.int64)
        cut_start = np.concatenate(([0], np.cumsum(n_cuts)[:-1]))
        cut_z = np.concatenate(self.cuts) if n_cuts.sum() else np.zeros(0)
        cut_col = np.repeat(np.arange(T.n_cells), n_cuts)
        n_total = len(cut_z)
        self.n_cuts, self.cut_start, self.cut_z, self.cut_col = n_cuts, cut_start, cut_z, cut_col

        # cells and horizontal plates, one of each per cut
        nxt = np.arange(n_total) + 1
        wrap = nxt == cut_start[cut_col] + n_cuts[cut_col]
        nxt[wrap] = cut_start[cut_col[wrap]]
        dz = np.mod(cut_z[nxt] - cut_z, H)
        dz[nxt == np.arange(n_total)] = H
        self.cell_col = cut_col
        self.cell_z = cut_z
        self.cell_dz = dz
        prev = np.empty(n_total, dtype=np.int64)
        prev[nxt] = np.arange(n_total)

        # vertices on the vertical lines over planar vertices
        pv, col, k = _line_entries(T, n_cuts)
        gid = cut_start[col] + k
        z = cut_z[gid]
        order = np.lexsort((z, pv))
        pv, col, gid, z = pv[order], col[order], gid[order], z[order]
        self.vertex_pv, self.vertex_z, self.vertex_col, self.vertex_cut = pv, z, col, gid
        self.vertex_hemi = T.kind_pi[pv] & (T.owner[pv] != col)
        n_v = len(pv)

        lookup_key = pv * max(n_total, 1) + gid
        key_order = np.argsort(lookup_key)
        sorted_keys = lookup_key[key_order]

        def vertex_at(v, g):
            key = v * max(n_total, 1) + g
            i = np.searchsorted(sorted_keys, key)
            if np.any(i >= len(sorted_keys)) or np.any(sorted_keys[np.minimum(i, len(sorted_keys) - 1)] != key):
                raise TessellationError("missing column vertex")
            return key_order[i]

        # vertical edges between consecutive vertices on a line
        same = np.concatenate((pv[1:] == pv[:-1], [False]))
        first = np.flatnonzero(np.concatenate(([True], pv[1:] != pv[:-1])))
        group_first = np.repeat(first, np.diff(np.concatenate((first, [n_v]))))
        up = np.where(same, np.arange(n_v) + 1, group_first)
        vdz = np.mod(z[up] - z, H)
        vdz[up == np.arange(n_v)] = H

        # horizontal edges: every cut of a column, over every edge of its cell
        he_cells = np.asarray(T.edge_cells)
        e_side = []
        for side in (0, 1):
            c = he_cells[:, side]
            ok = c >= 0
            e = np.flatnonzero(ok)
            reps = n_cuts[c[ok]]
            e_rep = np.repeat(e, reps)
            g = np.repeat(cut_start[c[ok]], reps) + (
                np.arange(reps.sum()) - np.repeat(np.cumsum(reps) - reps, reps)
            )
            e_side.append((e_rep, g))
        h_e = np.concatenate([a for a, _ in e_side])
        h_g = np.concatenate([b for _, b in e_side])
        order = np.lexsort((cut_z[h_g], h_e))
        h_e, h_g = h_e[order], h_g[order]
        edges = np.asarray(T.edges)
        h_v0 = vertex_at(edges[h_e, 0], h_g)
        h_v1 = vertex_at(edges[h_e, 1], h_g)

        self.edge_vertical = np.concatenate((np.ones(n_v, bool), np.zeros(len(h_e), bool)))
        self.edge_v0 = np.concatenate((np.arange(n_v), h_v0))
        self.edge_v1 = np.concatenate((up, h_v1))
        self.edge_ref = np.concatenate((pv, h_e))
        self.edge_z = np.concatenate((z, cut_z[h_g]))
        self.edge_dz = np.concatenate((vdz, np.zeros(len(h_e))))
        self.edge_pi = np.concatenate((T.kind_pi[pv], np.ones(len(h_e), bool)))

        # vertical plates between consecutive merged cuts over each planar edge
        p_e, p_g = h_e, h_g
        n_p = len(p_e)
        same = np.concatenate((p_e[1:] == p_e[:-1], [False]))
        first = np.flatnonzero(np.concatenate(([True], p_e[1:] != p_e[:-1]))) if n_p else np.zeros(0, int)
        group_first = np.repeat(first, np.diff(np.concatenate((first, [n_p]))))
        nxt_p = np.where(same, np.arange(n_p) + 1, group_first)
        pz = cut_z[p_g]
        pdz = np.mod(pz[nxt_p] - pz, H)
        pdz[nxt_p == np.arange(n_p)] = H

        def cell_containing(c, q):
            """Cell of column ``c`` holding height ``q`` just above ``q``."""
            out = np.full(len(c), -1, dtype=np.int64)
            ok = (c >= 0) & (n_cuts[np.maximum(c, 0)] > 0)
            cc, qq = c[ok], q[ok]
            keys = cut_col * 4 * H + cut_z
            i = np.searchsorted(keys, cc * 4 * H + qq + self.eps_z, side="right") - 1
            below = (i < cut_start[cc]) | (cut_col[np.maximum(i, 0)] != cc)
            i = np.where(below, cut_start[cc] + n_cuts[cc] - 1, i)
            out[ok] = i
            return out

        v_cells = np.stack(
            [cell_containing(he_cells[p_e, s], pz) for s in (0, 1)], axis=1
        ) if n_p else np.zeros((0, 2), dtype=np.int64)
        h_cells = np.stack([prev, np.arange(n_total)], axis=1)
        self.plate_horizontal = np.concatenate((np.ones(n_total, bool), np.zeros(n_p, bool)))
        self.plate_ref = np.concatenate((cut_col, p_e))
        self.plate_z = np.concatenate((cut_z, pz))
        self.plate_dz = np.concatenate((np.zeros(n_total), pdz))
        self.plate_cells = np.concatenate((h_cells, v_cells)).astype(np.int64)

    # ------------------------------------------------------------------

    @property
    def n_vertices(self):
        return len(self.vertex_pv)

    @property
    def n_edges(self):
        return len(self.edge_ref)

    @property
    def n_plates(self):
        return len(self.plate_ref)

    @property
    def n_cells(self):
        return len(self.cell_col)

    @property
    def volume(self):
        return self.planar.window.area * self.height

    def degenerate_lines(self):
        """Planar vertices whose vertical line carries fewer than two vertices."""
        counts = np.bincount(self.vertex_pv, minlength=self.planar.n_vertices)
        return np.flatnonzero(counts < 2)

    def to_dict(self):
        faces = enumerate_faces(self)
        return {
            "schema": "columntess.column/1",
            "planar": planar_to_dict(self.planar, self.rho),
            "zprocess": asdict(self.zspec),
            "seed": self.seed,
            "cuts": [c.tolist() for c in self.cuts],
            "vertices": {"planar_vertex": self.vertex_pv.tolist(), "z": self.vertex_z.tolist(),
                         "column": self.vertex_col.tolist(), "hemi": self.vertex_hemi.tolist()},
            "edges": {"vertical": self.edge_vertical.tolist(), "v0": self.edge_v0.tolist(),
                      "v1": self.edge_v1.tolist(), "ref": self.edge_ref.tolist(),
                      "z": self.edge_z.tolist(), "dz": self.edge_dz.tolist(),
                      "pi": self.edge_pi.tolist()},
            "plates": {"horizontal": self.plate_horizontal.tolist(), "ref": self.plate_ref.tolist(),
                       "z": self.plate_z.tolist(), "dz": self.plate_dz.tolist(),
                       "cells": self.plate_cells.tolist()},
            "cells": {"column": self.cell_col.tolist(), "z": self.cell_z.tolist(),
                      "dz": self.cell_dz.tolist()},
            "faces": {k: {f: v.tolist() for f, v in d.items()} for k, d in faces.items()},
        }

    @classmethod
    def from_dict(cls, doc):
        """Rebuild from a stored document and check it against the stored elements."""
        T, rho = planar_from_dict(doc["planar"])
        CT = cls(T, rho, ZProcessSpec(**doc["zprocess"]), doc["seed"], doc["cuts"])
        if (CT.vertex_z.tolist() != doc["vertices"]["z"]
                or CT.edge_ref.tolist() != doc["edges"]["ref"]
                or CT.plate_cells.tolist() != doc["plates"]["cells"]):
            raise TessellationError("stored column elements do not match the rebuilt complex")
        return CT

    def dump(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def write_obj(self, path):
        """Wavefront OBJ of the cell boundaries (heights unwrapped)."""
        T = self.planar
        lines, n = [], 0
        for g in range(self.n_cells):
            cyc = T.cells[self.cell_col[g]]
            xy = T.points[cyc]
            z0, z1 = self.cell_z[g], self.cell_z[g] + self.cell_dz[g]
            for zz in (z0, z1):
                lines += [f"v {x!r} {y!r} {zz!r}" for x, y in xy]
            m = len(cyc)
            bottom = [n + i + 1 for i in range(m)]
            top = [n + m + i + 1 for i in range(m)]
            lines.append("f " + " ".join(map(str, bottom[::-1])))
            lines.append("f " + " ".join(map(str, top)))
            for i in range(m):
                j = (i + 1) % m
                lines.append(f"f {bottom[i]} {bottom[j]} {top[j]} {top[i]}")
            n += 2 * m
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


def build(T, rho, zspec, seed):
    """Build the column tessellation over ``T`` with cell marks ``rho``.

    Each column draws its cuts from its own stream seeded by
    ``(seed, cell id)``.  Columns whose cuts coincide with a neighbour's
    within ``1e-12 * H`` are resampled and the event is logged.

    Raises
    ------
    CoincidentCuts
        When resampling does not remove a coincidence.
    NonpositiveScale, ConfigError
        For invalid marks or a mismatched z-process.
    """
    cuts = _sample_cuts(T, rho, zspec, seed)
    return ColumnTessellation(T, rho, zspec, seed, cuts)


def enumerate_faces(CT):
    """Face multisets of cells and plates, one row per instance.

    Returns a dict with entries ``Z0`` (prism corners), ``Z1`` (ridges),
    ``Z2`` (cell facets) and ``P1`` (plate sides).  Each entry maps field
    names to arrays: ``owner`` (cell or plate id), ``vertical`` (bool),
    ``a`` and ``b`` (planar vertices spanning the footprint; equal for a
    point footprint, ``-1`` for a polygon footprint), ``z`` and ``dz``.
    """
    T, H = CT.planar, CT.height
    corners = T.corners
    n_corner = np.array([len(c) for c in corners], dtype=np.int64)
    col = CT.cell_col
    nc = n_corner[col]
    own = np.repeat(np.arange(CT.n_cells), nc)
    corner = np.concatenate([corners[c] for c in col]) if len(col) else np.zeros(0, np.int64)
    succ = np.concatenate([np.roll(corners[c], -1) for c in col]) if len(col) else corner
    zlo = CT.cell_z[own]
    zhi = np.mod(CT.cell_z + CT.cell_dz, H)[own]
    dz = CT.cell_dz[own]
    zeros = np.zeros(len(own))

    def block(owner, vertical, a, b, z, d):
        return {"owner": owner, "vertical": vertical, "a": a, "b": b, "z": z, "dz": d}

    def cat(*blocks):
        return {k: np.concatenate([b[k] for b in blocks]) for k in blocks[0]}

    t, f = np.ones(len(own), bool), np.zeros(len(own), bool)
    z0 = cat(block(own, f, corner, corner, zlo, zeros), block(own, f, corner, corner, zhi, zeros))
    z1 = cat(
        block(own, t, corner, corner, zlo, dz),
        block(own, f, corner, succ, zlo, zeros),
        block(own, f, corner, succ, zhi, zeros),
    )
    cells = np.arange(CT.n_cells)
    none = np.full(CT.n_cells, -1)
    z2 = cat(
        block(cells, np.zeros(CT.n_cells, bool), none, none, CT.cell_z, np.zeros(CT.n_cells)),
        block(cells, np.zeros(CT.n_cells, bool), none, none,
              np.mod(CT.cell_z + CT.cell_dz, H), np.zeros(CT.n_cells)),
        block(own, t, corner, succ, zlo, dz),
    )
    # plate sides: polygon sides of horizontal plates, four sides of vertical ones
    hp = np.flatnonzero(CT.plate_horizontal)
    hn = n_corner[CT.plate_ref[hp]]
    h_own = np.repeat(hp, hn)
    h_a = np.concatenate([corners[CT.plate_ref[p]] for p in hp]) if len(hp) else np.zeros(0, np.int64)
    h_b = np.concatenate([np.roll(corners[CT.plate_ref[p]], -1) for p in hp]) if len(hp) else h_a
    vp = np.flatnonzero(~CT.plate_horizontal)
    e = CT.plate_ref[vp]
    ea, eb = T.edges[e, 0], T.edges[e, 1]
    pz, pdz = CT.plate_z[vp], CT.plate_dz[vp]
    ptop = np.mod(pz + pdz, H)
    nv, tv, fv = np.zeros(len(vp)), np.ones(len(vp), bool), np.zeros(len(vp), bool)
    p1 = cat(
        block(h_own, np.zeros(len(h_own), bool), h_a, h_b, CT.plate_z[h_own], np.zeros(len(h_own))),
        block(vp, fv, ea, eb, pz, nv),
        block(vp, fv, ea, eb, ptop, nv),
        block(vp, tv, ea, ea, pz, pdz),
        block(vp, tv, eb, eb, pz, pdz),
    )
    return {"Z0": z0, "Z1": z1, "Z2": z2, "P1": p1}
