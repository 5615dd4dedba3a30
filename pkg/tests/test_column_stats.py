import math

import numpy as np
import pytest

from columntess import (
    ColumnSummary,
    Window,
    ZProcessSpec,
    assign_marks,
    build,
    cross_check,
    estimate_column,
    estimate_planar,
    predict_all_height1,
)
from columntess.column_stats import (
    ColumnGeometry,
    estimate_intensities,
    hemi_mask,
    pi_edge_mask,
    polygon_corners,
)
from columntess.errors import EmptyRegion
from columntess.planar import PlanarTessellation

BRICK_EXACT = {
    "lam_v": 6, "lam_e": 12, "lam_p": 7, "lam_z": 1, "lam_p1": 28, "lam_z1": 12, "lam_z2": 6,
    "mu_ve": 4, "mu_zv": 24, "nu0_z": 8, "nu1_z": 12, "vol_z": 1, "area_z": 6, "area_zz2": 8,
    "xi": 1, "kappa": 2 / 3, "psi": 2, "tau": 4 / 3,
    "ell_e": 1 / 2, "ell_p": 18 / 7, "ell_z": 12, "area_p": 3 / 7, "ell_ze": 18, "area_z2": 1,
    "mu_pv": 36 / 7, "mu_ep": 3,
}


@pytest.fixture(scope="module")
def brick_summary(brick_column):
    return estimate_column(brick_column)


@pytest.fixture(scope="module")
def columns(generators_small):
    out = {}
    for family, T in generators_small.items():
        out[family, "poisson"] = build(T, np.ones(T.n_cells), ZProcessSpec("poisson", 6.0), seed=3)
        out[family, "unit_lattice"] = build(T, np.ones(T.n_cells),
                                            ZProcessSpec("unit_lattice", 4), seed=3)
    return out


@pytest.fixture(scope="module")
def summaries(columns):
    return {k: estimate_column(CT) for k, CT in columns.items()}


class TestBrickExact:
    @pytest.mark.parametrize("slot", sorted(BRICK_EXACT))
    def test_hand_values(self, brick_summary, slot):
        assert getattr(brick_summary, slot) == pytest.approx(BRICK_EXACT[slot], rel=1e-9)

    def test_every_slot_matches_height1_formulas(self, brick_summary, brick8):
        pred = predict_all_height1(estimate_planar(brick8))
        for slot, value in pred.values.items():
            assert getattr(brick_summary, slot) == pytest.approx(value, rel=1e-9), slot


class TestGeneral:
    def test_identities(self, summaries):
        for key, S in summaries.items():
            assert S.lam_p_hor == S.lam_z, key
            assert S.lam_e_hor + S.lam_e_vert == pytest.approx(S.lam_e, rel=1e-15), key
            assert S.mu_ve == 4, key
            assert S.area_zz2 >= S.area_z, key

    def test_ranges(self, summaries):
        for key, S in summaries.items():
            assert 0 <= S.xi <= 1 and 0 <= S.kappa <= 1, key
            assert S.psi >= 0 and S.tau >= 0, key

    @pytest.mark.parametrize("family", ["poisson_voronoi", "poisson_line"])
    @pytest.mark.parametrize("kind", ["poisson", "unit_lattice"])
    def test_side_to_side(self, summaries, family, kind):
        S = summaries[family, kind]
        assert S.kappa == 0
        assert S.xi == pytest.approx(0.5, abs=0.03)

    def test_cross_check(self, columns):
        for key, CT in columns.items():
            res = cross_check(CT)
            for name, value in res.items():
                if not name.endswith("_n"):
                    assert value == 1.0, (key, name)
            assert res["pi_edges_n"] > 0

    def test_structural_pi_edges(self, columns):
        CT = columns["brick_wall", "poisson"]
        G = ColumnGeometry(CT)
        te, geometric = pi_edge_mask(G)
        assert geometric[~CT.edge_vertical[te]].all()
        tv, hemi = hemi_mask(G)
        assert np.array_equal(hemi, CT.vertex_hemi[tv])

    def test_wanted_subset(self, columns, summaries):
        CT = columns["poisson_voronoi", "poisson"]
        S = estimate_column(CT, wanted={"mu_pv", "xi"})
        full = summaries["poisson_voronoi", "poisson"]
        assert S.mu_pv == full.mu_pv and S.xi == full.xi
        assert math.isnan(S.mu_ep) and math.isnan(S.psi) and math.isnan(S.ell_z)
        assert S.lam_v == full.lam_v

    def test_round_trip(self, summaries):
        S = summaries["poisson_line", "poisson"]
        assert ColumnSummary.from_dict(S.to_dict()).values() == S.values()

    def test_empty_region(self):
        # a single column with a negligible intensity carries no cut
        pts = [(-1, -1), (5, -1), (5, 5), (-1, 5)]
        T = PlanarTessellation(pts, [(0, 1), (1, 2), (2, 3), (3, 0)], Window(4.0, 1.0))
        CT = build(T, np.full(1, 1e-9), ZProcessSpec("poisson", 1.0), seed=0)
        with pytest.raises(EmptyRegion):
            estimate_intensities(CT)


class TestRingColumns:
    def test_uncut_columns_still_count_as_containers(self, plt_):
        # large cells get marks near zero and usually no cut at all
        rho = assign_marks(plt_, "area_proportional", 0.2)
        CT = build(plt_, rho, ZProcessSpec("poisson", 3.0), seed=1)
        assert (CT.n_cuts == 0).any()
        G = ColumnGeometry(CT)
        assert G.Z.ring_mask().sum() == (CT.n_cuts == 0).sum()
        S = estimate_column(CT)
        assert 0.4 < S.xi < 0.6
        assert S.kappa == 0


class TestPolygonCorners:
    def test_collinear_points_dropped(self):
        sq = np.array([[0, 0], [1, 0], [2, 0], [2, 2], [0, 2]], dtype=float)
        assert np.flatnonzero(polygon_corners(sq)).tolist() == [0, 2, 3, 4]
