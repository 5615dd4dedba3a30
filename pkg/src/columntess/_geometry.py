"""Containment predicates for products of planar convex sets and height arcs.

Every object of a column tessellation is ``F x I`` where ``F`` is a planar
point, segment or convex polygon (its footprint) and ``I = [z, z + dz]`` an
arc of the height circle of length ``H``.  Containment of products splits
into footprint containment and arc containment, which is what makes the
candidate search cheap: footprints are few and arcs over one footprint can
be binary-searched.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

CHUNK = 1 << 18


@dataclass
class ShapeSet:
    """A batch of product objects.

    Attributes
    ----------
    verts : ndarray, shape (n, K, 2)
        Footprint vertices, counter-clockwise for polygons, padded by
        repeating the last vertex.
    nv : ndarray, shape (n,)
        Number of valid footprint vertices (1 point, 2 segment, >= 3 polygon).
    z, dz : ndarray, shape (n,)
        Arc start in ``[0, H)`` and arc length in ``[0, H]``.
    height : float
    fp : ndarray, optional
        Cached footprint ids, filled on first use.
    ring : ndarray of bool, optional
        Objects whose arc is the whole circle without end points; they
        stand in for cells and faces much taller than ``H``.
    """

    verts: np.ndarray
    nv: np.ndarray
    z: np.ndarray
    dz: np.ndarray
    height: float
    fp: np.ndarray | None = None
    ring: np.ndarray | None = None

    def __len__(self):
        return len(self.nv)

    def ring_mask(self):
        return np.zeros(len(self), bool) if self.ring is None else self.ring

    @staticmethod
    def _ring(n, ring):
        return np.ones(n, bool) if ring else None

    @classmethod
    def points(cls, xy, z, dz, height, ring=False):
        xy = np.asarray(xy, dtype=float).reshape(-1, 1, 2)
        return cls(xy, np.ones(len(xy), np.int64), np.asarray(z, float), np.asarray(dz, float),
                   height, ring=cls._ring(len(xy), ring))

    @classmethod
    def segments(cls, a, b, z, dz, height, ring=False):
        v = np.stack([np.asarray(a, float), np.asarray(b, float)], axis=1)
        return cls(v, np.full(len(v), 2, np.int64), np.asarray(z, float), np.asarray(dz, float),
                   height, ring=cls._ring(len(v), ring))

    @classmethod
    def polygons(cls, polys, z, dz, height):
        """``polys`` is a list of ``(m_i, 2)`` arrays."""
        K = max((len(p) for p in polys), default=3)
        v = np.empty((len(polys), K, 2))
        nv = np.empty(len(polys), np.int64)
        for i, p in enumerate(polys):
            m = len(p)
            v[i, :m] = p
            v[i, m:] = p[-1]
            nv[i] = m
        return cls(v, nv, np.asarray(z, float), np.asarray(dz, float), height)

    @classmethod
    def concat(cls, *sets):
        K = max(s.verts.shape[1] for s in sets)
        parts = []
        for s in sets:
            v = s.verts
            if v.shape[1] < K:
                pad = np.repeat(v[:, -1:], K - v.shape[1], axis=1)
                v = np.concatenate([v, pad], axis=1)
            parts.append(v)
        return cls(
            np.concatenate(parts),
            np.concatenate([s.nv for s in sets]),
            np.concatenate([s.z for s in sets]),
            np.concatenate([s.dz for s in sets]),
            sets[0].height,
            ring=None if all(s.ring is None for s in sets) else np.concatenate(
                [s.ring_mask() for s in sets]),
        )

    def take(self, idx):
        self.footprint_ids()
        return ShapeSet(self.verts[idx], self.nv[idx], self.z[idx], self.dz[idx], self.height,
                        self.fp[idx], None if self.ring is None else self.ring[idx])

    def ref_xy(self):
        """Reference point of each footprint: point, midpoint or area centroid."""
        out = self.verts[:, 0].copy()
        seg = self.nv == 2
        if seg.any():
            out[seg] = 0.5 * (self.verts[seg, 0] + self.verts[seg, 1])
        poly = self.nv >= 3
        if poly.any():
            p = self.verts[poly] - self.verts[poly, :1]
            q = np.roll(p, -1, axis=1)
            # padded vertices repeat, the closing side is the roll wrap-around
            cross = p[..., 0] * q[..., 1] - q[..., 0] * p[..., 1]
            area = 0.5 * cross.sum(axis=1)
            cx = ((p[..., 0] + q[..., 0]) * cross).sum(axis=1) / (6 * area)
            cy = ((p[..., 1] + q[..., 1]) * cross).sum(axis=1) / (6 * area)
            out[poly] = self.verts[poly, 0] + np.stack([cx, cy], axis=1)
        return out

    def measure_xy(self):
        """Footprint length (segments) or area (polygons); 0 for points."""
        out = np.zeros(len(self))
        seg = self.nv == 2
        if seg.any():
            d = self.verts[seg, 1] - self.verts[seg, 0]
            out[seg] = np.hypot(d[:, 0], d[:, 1])
        poly = self.nv >= 3
        if poly.any():
            p = self.verts[poly]
            q = np.roll(p, -1, axis=1)
            out[poly] = 0.5 * (p[..., 0] * q[..., 1] - q[..., 0] * p[..., 1]).sum(axis=1)
        return out

    def perimeter_xy(self):
        p = self.verts
        q = np.roll(p, -1, axis=1)
        sides = np.hypot(*(q - p).transpose(2, 0, 1))
        out = sides.sum(axis=1)
        out[self.nv == 1] = 0.0
        out[self.nv == 2] *= 0.5
        return out

    def footprint_ids(self):
        """Integer id shared by objects with identical footprints."""
        if self.fp is None:
            key = np.concatenate(
                [self.nv[:, None].astype(float), self.verts.reshape(len(self), -1)], axis=1
            )
            rows = np.ascontiguousarray(key).view(np.dtype((np.void, key.dtype.itemsize * key.shape[1])))
            _, inverse = np.unique(rows.ravel(), return_inverse=True)
            self.fp = inverse.reshape(-1)
        return self.fp

    def footprints(self):
        """Distinct footprints: index of a representative and the id of every object."""
        _, first, inverse = np.unique(self.footprint_ids(), return_index=True, return_inverse=True)
        return first, inverse.reshape(-1)


def _points_in(verts, nv, p, eps, interior):
    """Vectorized point-in-footprint test, one footprint per point."""
    out = np.zeros(len(p), dtype=bool)
    one = nv == 1
    if one.any():
        d = p[one] - verts[one, 0]
        out[one] = np.hypot(d[:, 0], d[:, 1]) <= eps
    two = nv == 2
    if two.any():
        a, b, q = verts[two, 0], verts[two, 1], p[two]
        d = b - a
        ln = np.hypot(d[:, 0], d[:, 1])
        r = q - a
        t = (r * d).sum(axis=1) / ln
        dist = np.abs(d[:, 0] * r[:, 1] - d[:, 1] * r[:, 0]) / ln
        if interior:
            out[two] = (dist <= eps) & (t > eps) & (t < ln - eps)
        else:
            out[two] = (dist <= eps) & (t >= -eps) & (t <= ln + eps)
    many = nv >= 3
    if many.any():
        v, q, m = verts[many], p[many], nv[many]
        K = v.shape[1]
        ok = np.ones(len(q), dtype=bool)
        for k in range(K):
            valid = k < m
            j = np.where(k + 1 < m, k + 1, 0)
            a = v[:, k]
            b = v[np.arange(len(v)), j]
            d = b - a
            ln = np.hypot(d[:, 0], d[:, 1])
            ln = np.where(valid, ln, 1.0)
            sd = (d[:, 0] * (q[:, 1] - a[:, 1]) - d[:, 1] * (q[:, 0] - a[:, 0])) / ln
            side_ok = sd > eps if interior else sd >= -eps
            ok &= side_ok | ~valid
        out[many] = ok
    return out


def points_in_xy(S, idx, p, eps, interior=False):
    """Is ``p[k]`` in (the relative interior of) footprint ``S[idx[k]]``?"""
    out = np.empty(len(idx), dtype=bool)
    for s in range(0, len(idx), CHUNK):
        sl = slice(s, s + CHUNK)
        i = idx[sl]
        out[sl] = _points_in(S.verts[i], S.nv[i], p[sl], eps, interior)
    return out


def arcs_contain(z, dz, s, d, H, eps_z):
    """Is arc ``[s, s + d]`` inside the closed arc ``[z, z + dz]``?"""
    off = np.mod(s - z, H)
    off = np.where(off > H - eps_z, off - H, off)
    ok = (off >= -eps_z) & (off + d <= dz + eps_z)
    full = dz >= H - eps_z
    return np.where(full, d <= dz + eps_z, ok)


def heights_interior(z, dz, q, H, eps_z, ring=None):
    """Is height ``q`` in the relative interior of arc ``[z, z + dz]``?

    Ring arcs contain every height in their interior.
    """
    off = np.mod(q - z, H)
    flat = dz <= eps_z
    near = np.minimum(off, H - off) <= eps_z
    out = np.where(flat, near, (off > eps_z) & (off < dz - eps_z))
    return out if ring is None else out | ring


def _footprint_pairs(A, fa, B, fb, eps):
    """Pairs (i in fa, j in fb) of footprints with footprint B_j inside A_i."""
    ca = A.verts[fa].mean(axis=1) if len(fa) else np.zeros((0, 2))
    cb = B.verts[fb].mean(axis=1) if len(fb) else np.zeros((0, 2))
    # a polygon's vertex mean lies inside it, so the distance to its
    # farthest vertex bounds every point it contains
    ra = np.hypot(*(A.verts[fa] - ca[:, None]).transpose(2, 0, 1)).max(axis=1) + 2 * eps
    if not len(fa) or not len(fb):
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    hits = cKDTree(cb).query_ball_point(ca, ra)
    counts = np.array([len(h) for h in hits], dtype=np.int64)
    ia = np.repeat(np.arange(len(fa)), counts)
    jb = np.concatenate([np.asarray(h, dtype=np.int64) for h in hits]) if counts.sum() else np.zeros(0, np.int64)
    ok = np.ones(len(ia), dtype=bool)
    K = B.verts.shape[1]
    Af = A.take(fa)
    for k in range(K):
        pk = B.verts[fb[jb], k]
        ok &= points_in_xy(Af, ia, pk, eps)
    return fa[ia[ok]], fb[jb[ok]]


def contained_pairs(A, B, eps, eps_z, a_idx=None, b_idx=None):
    """All pairs ``(i, j)`` with ``B[j]`` inside the closed object ``A[i]``.

    ``a_idx`` and ``b_idx`` restrict the candidate containers and items.
    Returned indices refer to ``A`` and ``B``; pairs are sorted by ``j``
    then ``i``.
    """
    H = A.height
    a_idx = np.arange(len(A)) if a_idx is None else np.asarray(a_idx)
    b_idx = np.arange(len(B)) if b_idx is None else np.asarray(b_idx)
    if not len(a_idx) or not len(b_idx):
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    As, Bs = A.take(a_idx), B.take(b_idx)
    a_first, a_fp = As.footprints()
    b_first, b_fp = Bs.footprints()
    pa, pb = _footprint_pairs(As, a_first, Bs, b_first, eps)
    # map representative object index back to footprint index
    a_rep = np.empty(len(As), np.int64)
    a_rep[a_first] = np.arange(len(a_first))
    b_rep = np.empty(len(Bs), np.int64)
    b_rep[b_first] = np.arange(len(b_first))
    pa, pb = a_rep[pa], b_rep[pb]
    n_fa = len(a_first)

    # containers sorted by (footprint, start), with copies shifted by -H and +H
    order = np.lexsort((As.z, a_fp))
    fa_sorted = a_fp[order]
    z_sorted = As.z[order]
    rep_fp = np.concatenate([fa_sorted] * 3)
    rep_z = np.concatenate([z_sorted - H, z_sorted, z_sorted + H])
    rep_obj = np.concatenate([order] * 3)
    o2 = np.lexsort((rep_z, rep_fp))
    rep_fp, rep_z, rep_obj = rep_fp[o2], rep_z[o2], rep_obj[o2]
    slot = 4.0 * H
    keys = rep_fp * slot + (rep_z + H)
    dmax = np.zeros(n_fa)
    np.maximum.at(dmax, a_fp, As.dz)

    # items grouped by footprint
    b_order = np.argsort(b_fp, kind="stable")
    b_count = np.bincount(b_fp, minlength=len(b_first))
    b_start = np.concatenate(([0], np.cumsum(b_count)[:-1]))
    reps = b_count[pb]
    q_pair = np.repeat(np.arange(len(pa)), reps)
    q_item = b_order[np.repeat(b_start[pb], reps) + (np.arange(reps.sum()) - np.repeat(np.cumsum(reps) - reps, reps))]
    q_fa = pa[q_pair]
    s = Bs.z[q_item]
    slack = 1e-7 * H + 2 * eps_z
    lo = np.searchsorted(keys, q_fa * slot + (s - dmax[q_fa] - slack + H), side="left")
    hi = np.searchsorted(keys, q_fa * slot + (s + slack + H), side="right")
    n = hi - lo
    ci = np.repeat(np.arange(len(q_item)), n)
    cand = rep_obj[np.repeat(lo, n) + (np.arange(n.sum()) - np.repeat(np.cumsum(n) - n, n))]
    item = q_item[ci]
    ok = arcs_contain(As.z[cand], As.dz[cand], Bs.z[item], Bs.dz[item], H, eps_z)
    cand, item = cand[ok], item[ok]
    key = np.unique(item.astype(np.int64) * len(As) + cand)
    item, cand = key // len(As), key % len(As)
    return a_idx[cand], b_idx[item]


def interior_mask(A, ia, p, q, eps, eps_z):
    """Does point ``(p[k], q[k])`` lie in the relative interior of ``A[ia[k]]``?"""
    xy = points_in_xy(A, ia, p, eps, interior=True)
    ring = None if A.ring is None else A.ring[ia]
    zz = heights_interior(A.z[ia], A.dz[ia], q, A.height, eps_z, ring)
    return xy & zz
