import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from columntess import GeneratorSpec, generate
from columntess.errors import (
    AmbiguousAngle,
    DanglingEdge,
    DegenerateSegment,
    MissingMark,
    NonConvexFace,
)
from columntess.planar import (
    PlanarTessellation,
    Window,
    build_from_segments,
    classify_vertex,
    edges_intersecting_cell,
    load_planar,
    dump_planar,
    mark_alpha,
    mark_beta,
    mark_gamma,
    planar_from_dict,
    planar_to_dict,
    zero_faces,
)

W4 = Window(4.0, 1.0)


def cross():
    return build_from_segments([[(-1, 2), (5, 2)], [(2, -1), (2, 5)]], W4)


def tee():
    """Horizontal bar across the window with a stem hanging down from its middle."""
    return build_from_segments([[(-1, 2), (5, 2)], [(2, 2), (2, -1)]], W4)


def grid3():
    """3x3 unit squares inside the frame of a 3x3 window without margin."""
    W = Window(3.0, 0.0)
    segs = [[(i, 0), (i, 3)] for i in (1, 2)] + [[(0, j), (3, j)] for j in (1, 2)]
    return build_from_segments(segs, W)


def inner_vertex(T):
    return int(np.flatnonzero(~T.boundary_vertex)[0])


class TestBuild:
    def test_crossing_lines(self):
        T = cross()
        v = inner_vertex(T)
        assert T.n_cells == 4
        assert T.degree[v] == 4
        assert (~T.boundary_vertex).sum() == 1
        assert classify_vertex(T, v) == ("non_pi", None)

    def test_t_junction_owner_is_cell_across_bar(self):
        T = tee()
        v = inner_vertex(T)
        kind, owner = classify_vertex(T, v)
        assert kind == "pi"
        assert T.cell_centroid[owner][1] > 2.0  # the cell above the bar
        assert T.degree[v] == 3
        assert owner in set(T.vertex_cells[v].tolist())

    def test_brick_interior_vertices_are_t_vertices(self, brick4):
        inner = ~brick4.boundary_vertex
        assert set(brick4.degree[inner].tolist()) == {3}
        assert brick4.kind_pi[inner].all()

    def test_dangling_edge(self):
        with pytest.raises(DanglingEdge):
            build_from_segments([[(-1, 2), (5, 2)], [(2, 2), (2, 1)]], W4)

    def test_degenerate_segment(self):
        with pytest.raises(DegenerateSegment):
            build_from_segments([[(-1, 2), (5, 2)], [(1, 1), (1, 1 + 1e-12)]], W4)

    def test_non_convex_face(self):
        # a bent polyline from the bottom to the right frame makes a reflex corner
        with pytest.raises(NonConvexFace):
            build_from_segments([[(1, -1), (1, 1)], [(1, 1), (5, 1)]], W4)

    def test_ambiguous_angle(self):
        # two lines crossing at a shallow angle; with a coarse angle tolerance
        # both obtuse wedges look straight at the crossing
        segs = [[(-1, 1.8), (5, 2.2)], [(-1, 2.2), (5, 1.8)]]
        with pytest.raises(AmbiguousAngle):
            build_from_segments(segs, W4, eps_angle=0.5)

    def test_snapping_merges_nearby_endpoints(self):
        T = build_from_segments([[(-1, 2), (5, 2)], [(2, 2 + 1e-12), (2, -1)]], W4)
        assert T.n_cells == 3
        assert T.kind_pi.sum() == 1

    def test_arrays_are_read_only(self):
        T = cross()
        with pytest.raises(ValueError):
            T.points[0, 0] = 1.0


class TestFaces:
    def test_brick_corners(self, brick4):
        z = int(np.flatnonzero(brick4.inner_cells())[0])
        assert len(brick4.cells[z]) == 6
        assert len(zero_faces(brick4, z)) == 4

    def test_voronoi_corners_are_all_boundary_vertices(self, pvt):
        for z in np.flatnonzero(pvt.inner_cells()):
            assert len(zero_faces(pvt, z)) == len(pvt.cells[z])

    def test_pi_vertex_is_not_a_corner_of_its_owner(self):
        T = tee()
        v = inner_vertex(T)
        _, owner = classify_vertex(T, v)
        assert v in T.cells[owner]
        assert v not in zero_faces(T, owner)
        others = [c for c in T.vertex_cells[v] if c >= 0 and c != owner]
        assert all(v in zero_faces(T, c) for c in others)


def brute_force_k_e(T, z):
    """Edges whose closed segment meets closed cell ``z``, by segment tests."""
    poly = T.points[T.cells[z]]
    sides = np.stack([poly, np.roll(poly, -1, axis=0)], axis=1)
    tol = 1e-9

    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    def on_seg(a, b, p):
        return (abs(orient(a, b, p)) <= tol
                and min(a[0], b[0]) - tol <= p[0] <= max(a[0], b[0]) + tol
                and min(a[1], b[1]) - tol <= p[1] <= max(a[1], b[1]) + tol)

    def meets(p, q, a, b):
        d1, d2 = orient(a, b, p), orient(a, b, q)
        d3, d4 = orient(p, q, a), orient(p, q, b)
        if ((d1 > tol and d2 < -tol) or (d1 < -tol and d2 > tol)) and \
           ((d3 > tol and d4 < -tol) or (d3 < -tol and d4 > tol)):
            return True
        return on_seg(a, b, p) or on_seg(a, b, q) or on_seg(p, q, a) or on_seg(p, q, b)

    def inside(p):
        return all(orient(a, b, p) >= -tol for a, b in sides)

    n = 0
    for a_id, b_id in T.edges:
        p, q = T.points[a_id], T.points[b_id]
        if inside(p) or inside(q) or any(meets(p, q, a, b) for a, b in sides):
            n += 1
    return n


class TestEdgesIntersectingCell:
    def test_square_grid_centre(self):
        T = grid3()
        centre = int(np.argmin(np.hypot(*(T.cell_centroid - 1.5).T)))
        assert edges_intersecting_cell(T, centre) == 12

    def test_brick_matches_brute_force(self, brick4):
        for z in np.flatnonzero(brick4.inner_cells()):
            assert edges_intersecting_cell(brick4, z) == brute_force_k_e(brick4, z) == 12

    def test_voronoi_matches_brute_force(self, pvt):
        for z in np.flatnonzero(pvt.inner_cells())[:30]:
            k = edges_intersecting_cell(pvt, z)
            assert k == brute_force_k_e(pvt, z)
            assert k >= len(pvt.cell_edges[z])


class TestMarks:
    def test_alpha_of_vertex_sums_adjacent_cells(self):
        T = tee()
        v = inner_vertex(T)
        rho = np.array([1.5, 2.0, 4.0])
        assert mark_alpha(T, rho, "vertex", v) == pytest.approx(7.5)

    def test_alpha_unit_marks(self, pvt):
        rho = np.ones(pvt.n_cells)
        v = int(np.flatnonzero(pvt.inner_vertices())[0])
        e = int(np.flatnonzero(pvt.inner_edges())[0])
        assert mark_alpha(pvt, rho, "vertex", v) == 3
        assert mark_alpha(pvt, rho, "edge", e) == 2

    def test_beta_of_zero_faces_at_a_vertex(self):
        T = cross()
        rho = np.array([1.0, 2.0, 3.0, 4.0])
        v = inner_vertex(T)
        inst = np.flatnonzero(T.z0_vertex == v)
        assert len(inst) == 4
        got = sorted(mark_beta(T, rho, "z0", i) for i in inst)
        assert got == sorted(rho[T.vertex_cells[v]].tolist())

    def test_beta_of_pi_vertex_is_owner_mark(self, brick4):
        rho = np.ones(brick4.n_cells)
        v = inner_vertex(brick4)
        rho[brick4.owner[v]] = 2.5
        assert mark_beta(brick4, rho, "pi", v) == 2.5
        non_pi = int(np.flatnonzero(~cross().kind_pi)[0])
        with pytest.raises(ValueError):
            mark_beta(cross(), np.ones(4), "pi", non_pi)

    def test_gamma(self, brick4):
        T = cross()
        v = inner_vertex(T)
        assert mark_gamma(T, np.ones(4), "vertex", v) == 16
        rho = np.ones(brick4.n_cells)
        e = int(np.flatnonzero(brick4.inner_edges())[0])
        assert mark_gamma(brick4, rho, "edge", e) == pytest.approx(2 * brick4.edge_lengths[e])
        rho = np.full(brick4.n_cells, 3.0)
        z = int(np.flatnonzero(brick4.inner_cells())[0])
        assert mark_gamma(brick4, rho, "cell", z) == pytest.approx(3.0)

    def test_missing_mark(self):
        T = cross()
        with pytest.raises(MissingMark):
            mark_alpha(T, np.array([1.0, 0.0, 1.0, 1.0]), "vertex", inner_vertex(T))
        with pytest.raises(MissingMark):
            mark_alpha(T, np.ones(3), "vertex", inner_vertex(T))


def check_invariants(T):
    inner = ~T.boundary_vertex
    cells_per_vertex = np.array([np.count_nonzero(c >= 0) for c in T.vertex_cells])
    assert np.array_equal(cells_per_vertex[inner], T.degree[inner])
    assert (T.n_boundary_vertices() - T.n_corners()).sum() == T.kind_pi.sum()
    counts = np.bincount(T.z0_vertex, minlength=T.n_vertices)
    assert len(T.z0_vertex) == T.n_corners().sum()
    want = np.where(T.kind_pi, T.degree - 1, T.degree)
    assert np.array_equal(counts[inner], want[inner])
    for v in np.flatnonzero(inner):
        hits = T.is_collinear_on_side(v)
        assert (len(hits) == 1) == bool(T.kind_pi[v])
        if T.kind_pi[v]:
            assert hits[0] == T.owner[v]
    assert np.isclose(T.cell_area.sum(), (T.window.hi - T.window.lo) ** 2)


class TestInvariants:
    @pytest.mark.parametrize("family", ["brick_wall", "poisson_voronoi", "poisson_line"])
    def test_reference_families(self, generators_small, family):
        check_invariants(generators_small[family])

    @given(st.integers(0, 2**32 - 1), st.sampled_from(["poisson_voronoi", "poisson_line"]))
    def test_random_realizations(self, seed, family):
        check_invariants(generate(GeneratorSpec(family, length=5.0, seed=seed)))


class TestSerialization:
    def test_round_trip(self, pvt, tmp_path):
        rho = np.linspace(1, 2, pvt.n_cells)
        path = tmp_path / "planar.json"
        dump_planar(pvt, path, rho)
        T, marks = load_planar(path)
        assert np.array_equal(T.points, pvt.points)
        assert np.array_equal(T.edges, pvt.edges)
        assert np.array_equal(T.kind_pi, pvt.kind_pi)
        assert np.array_equal(marks, rho)
        assert json.dumps(planar_to_dict(T, marks)) == json.dumps(planar_to_dict(pvt, rho))

    def test_tampered_classification_rejected(self, brick4):
        doc = planar_to_dict(brick4)
        v = inner_vertex(brick4)
        doc["vertices"][v]["kind"] = "non_pi"
        with pytest.raises(Exception):
            planar_from_dict(doc)

    def test_direct_construction(self):
        pts = [(-1, -1), (5, -1), (5, 5), (-1, 5)]
        T = PlanarTessellation(pts, [(0, 1), (1, 2), (2, 3), (3, 0)], W4)
        assert T.n_cells == 1 and T.cell_area[0] == pytest.approx(36.0)
