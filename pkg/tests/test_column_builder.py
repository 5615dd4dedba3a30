from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from columntess import (
    ColumnTessellation,
    GeneratorSpec,
    Window,
    ZProcessSpec,
    assign_marks,
    build,
    generate,
)
from columntess import column as column_mod
from columntess.column import _coincident_columns, enumerate_faces
from columntess.column_stats import estimate_intensities
from columntess.errors import CoincidentCuts, ConfigError, NonpositiveScale
from columntess.planar import PlanarTessellation


def single_cell():
    pts = [(-1, -1), (5, -1), (5, 5), (-1, 5)]
    return PlanarTessellation(pts, [(0, 1), (1, 2), (2, 3), (3, 0)], Window(4.0, 1.0))


def euler(CT):
    return CT.n_vertices - CT.n_edges + CT.n_plates - CT.n_cells


class TestZProcessSpec:
    def test_defaults(self):
        z = ZProcessSpec()
        assert (z.kind, z.height) == ("poisson", 1.0)

    @pytest.mark.parametrize("kw", [{"kind": "cox"}, {"height": 0.0},
                                    {"kind": "unit_lattice", "height": 2.5}])
    def test_invalid(self, kw):
        with pytest.raises(ConfigError):
            ZProcessSpec(**kw)


class TestAssignMarks:
    def test_constant(self, pvt):
        assert np.all(assign_marks(pvt, "constant", 1.0) == 1.0)

    def test_area_on_brick(self, brick4):
        assert np.allclose(assign_marks(brick4, "area_proportional", 1.0)[brick4.inner_cells()], 1.0)

    def test_area_definition(self):
        T = SimpleNamespace(n_cells=1, cell_area=np.array([0.35]), cell_perimeter=np.array([2.0]))
        assert assign_marks(T, "area_proportional", 2.0)[0] == pytest.approx(0.7)
        assert assign_marks(T, "perimeter_proportional", 0.5)[0] == pytest.approx(1.0)

    def test_errors(self, brick4):
        with pytest.raises(NonpositiveScale):
            assign_marks(brick4, "constant", 0.0)
        with pytest.raises(ConfigError):
            assign_marks(brick4, "volume_proportional", 1.0)


class TestBuild:
    def test_single_cell(self):
        T = single_cell()
        CT = build(T, np.ones(1), ZProcessSpec("unit_lattice", 5), seed=0)
        assert CT.n_cells == 5
        assert np.all(CT.cell_dz == 1.0)
        # the only planar vertices are the frame corners
        assert T.boundary_vertex[CT.vertex_pv].all()

    def test_brick_intensities(self, brick4):
        CT = build(brick4, np.ones(brick4.n_cells), ZProcessSpec("unit_lattice", 8), seed=3)
        S = estimate_intensities(CT)
        assert (S.lam_v, S.lam_e, S.lam_p, S.lam_z) == pytest.approx((6, 12, 7, 1), rel=1e-12)

    def test_four_edges_per_vertex(self, pvt):
        CT = build(pvt, np.ones(pvt.n_cells), ZProcessSpec("poisson", 6.0), seed=2)
        deg = np.bincount(np.concatenate([CT.edge_v0, CT.edge_v1]), minlength=CT.n_vertices)
        assert np.all(deg == 4)

    def test_unit_lattice_heights(self, pvt):
        CT = build(pvt, np.ones(pvt.n_cells), ZProcessSpec("unit_lattice", 4), seed=5)
        assert np.allclose(CT.cell_dz, 1.0, rtol=0, atol=1e-12)
        assert np.all(CT.n_cuts == 4)

    def test_unit_lattice_needs_unit_marks(self, brick4):
        with pytest.raises(ConfigError):
            build(brick4, np.full(brick4.n_cells, 2.0), ZProcessSpec("unit_lattice", 4), seed=0)

    def test_nonpositive_marks(self, brick4):
        rho = np.ones(brick4.n_cells)
        rho[3] = 0.0
        with pytest.raises(NonpositiveScale):
            build(brick4, rho, ZProcessSpec("poisson", 8.0), seed=0)

    @pytest.mark.parametrize("family", ["brick_wall", "poisson_voronoi", "poisson_line"])
    def test_space_filling_and_euler(self, generators_small, family):
        T = generators_small[family]
        CT = build(T, np.ones(T.n_cells), ZProcessSpec("poisson", 10.0), seed=4)
        filled = np.isin(np.arange(T.n_cells), CT.cell_col)
        vol = (T.cell_area[CT.cell_col] * CT.cell_dz).sum()
        assert vol == pytest.approx(T.cell_area[filled].sum() * CT.height, rel=1e-12)
        assert euler(CT) == 0

    @given(st.integers(0, 2**32 - 1))
    def test_euler_with_uncut_columns(self, seed):
        # annuli and solid tori over uncut columns add nothing to the count
        T = generate(GeneratorSpec("poisson_line", length=6.0, line_intensity=1.8, seed=seed))
        CT = build(T, assign_marks(T, "area_proportional", 0.3), ZProcessSpec("poisson", 2.0), seed=seed)
        assert euler(CT) == 0

    @given(st.integers(0, 2**32 - 1))
    def test_euler_unit_lattice(self, seed):
        T = generate(GeneratorSpec("poisson_voronoi", length=4.0, seed=seed))
        CT = build(T, np.ones(T.n_cells), ZProcessSpec("unit_lattice", 3), seed=seed)
        assert euler(CT) == 0

    def test_same_seed_same_complex(self, pvt):
        rho = np.ones(pvt.n_cells)
        a = build(pvt, rho, ZProcessSpec("poisson", 5.0), seed=11)
        b = build(pvt, rho, ZProcessSpec("poisson", 5.0), seed=11)
        assert all(np.array_equal(x, y) for x, y in zip(a.cuts, b.cuts))

    def test_columns_are_seeded_independently(self, pvt):
        rho = np.ones(pvt.n_cells)
        a = build(pvt, rho, ZProcessSpec("poisson", 5.0), seed=11)
        rho[0] = 3.0  # the builder keeps its own copy of the marks
        b = build(pvt, rho, ZProcessSpec("poisson", 5.0), seed=11)
        assert all(np.array_equal(a.cuts[c], b.cuts[c]) for c in range(1, pvt.n_cells))

    def test_coincidence_detection(self, brick4):
        cuts = [np.array([0.5]) for _ in range(brick4.n_cells)]
        bad = _coincident_columns(brick4, cuts, 1.0)
        assert len(bad) > 0

    def test_coincident_cuts_raise_after_resampling(self, brick4, monkeypatch):
        monkeypatch.setattr(column_mod, "_draw_cuts", lambda rng, rho, z: np.array([0.25]))
        with pytest.raises(CoincidentCuts):
            build(brick4, np.ones(brick4.n_cells), ZProcessSpec("poisson", 5.0), seed=0)


class TestFaces:
    def test_cube_cell(self, brick_column):
        CT = brick_column
        faces = enumerate_faces(CT)
        T = CT.planar
        g = int(np.flatnonzero(T.inner_cells()[CT.cell_col])[0])
        counts = [np.count_nonzero(faces[k]["owner"] == g) for k in ("Z0", "Z1", "Z2")]
        assert counts == [8, 12, 6]

    def test_horizontal_plate_over_brick(self, brick_column):
        CT = brick_column
        faces = enumerate_faces(CT)
        T = CT.planar
        hp = next(p for p in np.flatnonzero(CT.plate_horizontal) if T.inner_cells()[CT.plate_ref[p]])
        assert np.count_nonzero(faces["P1"]["owner"] == hp) == 4

    def test_plate_side_intensity(self, brick_column):
        S = estimate_intensities(brick_column)
        assert (S.lam_p1, S.lam_z1, S.lam_z2) == pytest.approx((28, 12, 6), rel=1e-12)

    def test_prism_counts(self, pvt):
        CT = build(pvt, np.ones(pvt.n_cells), ZProcessSpec("poisson", 5.0), seed=1)
        faces = enumerate_faces(CT)
        corners = pvt.n_corners()[CT.cell_col]
        edges = np.array([len(c) for c in pvt.cell_edges])[CT.cell_col]
        for name, want in (("Z0", 2 * corners), ("Z1", 3 * corners), ("Z2", edges + 2)):
            got = np.bincount(faces[name]["owner"], minlength=CT.n_cells)
            assert np.array_equal(got, want), name


class TestSerialization:
    def test_json_round_trip(self, pvt, tmp_path):
        CT = build(pvt, assign_marks(pvt, "area_proportional"), ZProcessSpec("poisson", 20.0), seed=8)
        path = tmp_path / "column.json"
        CT.dump(path)
        back = ColumnTessellation.load(path)
        assert np.array_equal(back.vertex_z, CT.vertex_z)
        assert np.array_equal(back.plate_cells, CT.plate_cells)
        assert np.array_equal(back.rho, CT.rho)

    def test_obj_export(self, brick_column, tmp_path):
        path = tmp_path / "column.obj"
        brick_column.write_obj(path)
        lines = path.read_text().splitlines()
        n_v = sum(line.startswith("v ") for line in lines)
        n_f = sum(line.startswith("f ") for line in lines)
        T = brick_column.planar
        per_cell = np.array([len(c) for c in T.cells])[brick_column.cell_col]
        assert n_v == 2 * per_cell.sum()
        assert n_f == (per_cell + 2).sum()
