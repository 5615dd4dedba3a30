import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from columntess import (
    GeneratorSpec,
    MarkSummary,
    PlanarSummary,
    Window,
    assign_marks,
    estimate_marks,
    estimate_planar,
    generate,
    pool,
)
from columntess.errors import EmptyWindow, MissingMark
from columntess.planar import PlanarTessellation
from columntess.planar_stats import check_second_order_identities


class TestEstimatePlanar:
    def test_voronoi(self, pvt):
        P = estimate_planar(pvt)
        assert (P.mu_ve, P.mu2_ve, P.phi) == (3, 9, 0)

    def test_poisson_line(self, plt_):
        P = estimate_planar(plt_)
        assert (P.mu_ve, P.mu2_ve, P.phi, P.mu_e_vpi) == (4, 16, 0, 0)

    def test_brick_pi_relations_exact(self, brick8):
        P = estimate_planar(brick8)
        assert P.mu_e_vpi == pytest.approx(2 * P.phi * P.mu_vpi_e / P.mu_ve, rel=1e-12)
        assert P.lam_z0 == pytest.approx(P.lam_v * (P.mu_ve - P.phi), rel=1e-12)
        assert P.lam_vpi == pytest.approx(2.0)
        assert P.mean_k_e == 12

    @pytest.mark.parametrize("family", ["poisson_voronoi", "poisson_line", "brick_wall"])
    def test_bounds(self, generators_small, family):
        P = estimate_planar(generators_small[family])
        assert 0 <= P.phi <= 1
        assert 3 <= P.mu_ve <= 6 - 2 * P.phi

    def test_zero_face_intensity_statistically(self, generators_small):
        for T in generators_small.values():
            P = estimate_planar(T)
            assert P.lam_z0 == pytest.approx(P.lam_v * (P.mu_ve - P.phi), rel=0.1)

    def test_empty_window(self):
        pts = [(-1, -1), (5, -1), (5, 5), (-1, 5)]
        T = PlanarTessellation(pts, [(0, 1), (1, 2), (2, 3), (3, 0)], Window(4.0, 1.0))
        with pytest.raises(EmptyWindow):
            estimate_planar(T)

    def test_standard_errors_present(self, pvt):
        P = estimate_planar(pvt)
        for k in ("lam_v", "ell_e", "area_z"):
            assert P.stderr[k] > 0
            assert P.weights[k] > 0


class TestEstimateMarks:
    @pytest.mark.parametrize("family", ["poisson_voronoi", "poisson_line", "brick_wall"])
    def test_unit_marks(self, generators_small, family):
        T = generators_small[family]
        P = estimate_planar(T)
        M = estimate_marks(T, np.ones(T.n_cells))
        assert (M.rho_z, M.alpha_e, M.beta_z0) == (1, 2, 1)
        if P.phi > 0:
            assert M.beta_vpi == 1
        assert M.alpha_v == pytest.approx(P.mu_ve, rel=1e-12)
        assert M.gamma_v == pytest.approx(P.mu2_ve, rel=1e-12)
        assert M.gamma_e == pytest.approx(2 * P.ell_e, rel=1e-12)
        assert M.gamma_z == pytest.approx(P.area_z, rel=1e-12)

    @given(st.floats(0.1, 10.0))
    def test_homogeneity(self, c):
        T = generate(GeneratorSpec("poisson_voronoi", length=6.0, seed=1))
        m1 = estimate_marks(T, np.ones(T.n_cells)).values()
        mc = estimate_marks(T, np.full(T.n_cells, c)).values()
        for k, v in m1.items():
            if math.isfinite(v):
                assert mc[k] == pytest.approx(c * v, rel=1e-12), k

    def test_area_marks_on_brick(self, brick8):
        M = estimate_marks(brick8, assign_marks(brick8, "area_proportional", 1.0))
        assert (M.rho_z, M.alpha_e, M.gamma_z) == pytest.approx((1, 2, 1), rel=1e-12)

    def test_missing_mark(self, brick4):
        rho = np.ones(brick4.n_cells)
        rho[0] = -1
        with pytest.raises(MissingMark):
            estimate_marks(brick4, rho)


class TestIdentities:
    def test_brick_exact(self, brick8):
        res = check_second_order_identities(brick8, np.ones(brick8.n_cells))
        assert len(res) == 7
        assert max(res.values()) < 1e-10

    def test_voronoi_small_residuals(self):
        T = generate(GeneratorSpec("poisson_voronoi", length=20.0, seed=12))
        res = check_second_order_identities(T, np.ones(T.n_cells))
        assert max(res.values()) < 0.05

    def test_scale_invariance(self, pvt):
        r1 = check_second_order_identities(pvt, np.ones(pvt.n_cells))
        r3 = check_second_order_identities(pvt, np.full(pvt.n_cells, 3.0))
        for k in r1:
            assert r3[k] == pytest.approx(r1[k], rel=1e-9, abs=1e-12)


def planar_stub(**values):
    base = {k: 1.0 for k in PlanarSummary.slot_names()}
    base.update(values)
    return PlanarSummary(**base)


class TestPool:
    def test_intensity_is_total_count_over_total_area(self):
        a = planar_stub().put_intensity("lam_v", 10, 4.0)
        b = planar_stub().put_intensity("lam_v", 30, 12.0)
        p = pool([a, b])
        assert p.lam_v == pytest.approx(40 / 16)
        assert p.weights["lam_v"] == 16.0

    def test_mean_is_weighted_by_sample_size(self):
        a = planar_stub().put("mu_ve", [3, 3, 3])
        b = planar_stub().put("mu_ve", [4])
        assert pool([a, b]).mu_ve == pytest.approx(13 / 4)

    def test_equal_weights_reduce_to_replication_error(self):
        xs = [1.0, 2.0, 4.0, 7.0]
        p = pool([planar_stub().put("ell_e", [x, x]) for x in xs])
        assert p.ell_e == pytest.approx(np.mean(xs))
        assert p.stderr["ell_e"] == pytest.approx(np.std(xs, ddof=1) / 2)

    def test_nan_slots_are_skipped(self):
        a = planar_stub().put("mu_vpi_e", [])
        b = planar_stub().put("mu_vpi_e", [3.0, 3.0])
        p = pool([a, b])
        assert p.mu_vpi_e == 3.0
        assert p.stderr["mu_vpi_e"] == 0.0

    def test_round_trip(self, pvt):
        P = estimate_planar(pvt)
        Q = PlanarSummary.from_dict(P.to_dict())
        assert Q.to_dict() == P.to_dict()
        M = estimate_marks(pvt, np.ones(pvt.n_cells))
        assert MarkSummary.from_dict(M.to_dict()).to_dict() == M.to_dict()
