import json
import math

import numpy as np
import pytest

from columntess import GeneratorSpec, estimate_planar, generate, pool, replication_seeds
from columntess.errors import ConfigError, IncommensurateWindow
from columntess.planar import planar_to_dict


def inner(T):
    return ~T.boundary_vertex


class TestSpec:
    def test_unknown_family(self):
        with pytest.raises(ConfigError):
            GeneratorSpec("stit", length=4)

    @pytest.mark.parametrize("field", ["length", "line_intensity", "point_intensity",
                                       "brick_width", "brick_height"])
    def test_non_positive(self, field):
        kw = {"length": 4.0, field: 0.0}
        with pytest.raises(ConfigError):
            GeneratorSpec("brick_wall", **kw)

    def test_row_offset_range(self):
        with pytest.raises(ConfigError):
            GeneratorSpec("brick_wall", length=4, row_offset=1.0)

    def test_from_dict_rejects_unknown_fields(self):
        with pytest.raises(ConfigError):
            GeneratorSpec.from_dict({"family": "brick_wall", "length": 4, "colour": "red"})

    def test_default_margin(self):
        assert GeneratorSpec("brick_wall", length=8).window.margin == 2.0


class TestSeeds:
    def test_replication_seeds_are_deterministic_and_distinct(self):
        a = replication_seeds(42, 50)
        assert a == replication_seeds(42, 50)
        assert len(set(a)) == 50
        assert a[:10] == replication_seeds(42, 10)
        assert set(a).isdisjoint(replication_seeds(43, 50))

    @pytest.mark.parametrize("family", ["poisson_line", "poisson_voronoi"])
    def test_same_seed_same_tessellation(self, family):
        spec = GeneratorSpec(family, length=6.0, seed=9)
        a = json.dumps(planar_to_dict(generate(spec)))
        b = json.dumps(planar_to_dict(generate(spec)))
        assert a == b
        c = json.dumps(planar_to_dict(generate(spec.with_seed(10))))
        assert a != c


class TestPoissonLine:
    @pytest.mark.parametrize("seed", range(5))
    def test_crossings_only(self, seed):
        T = generate(GeneratorSpec("poisson_line", length=8.0, seed=seed))
        P = estimate_planar(T)
        assert P.phi == 0 and P.mu_ve == 4 and P.mu2_ve == 16 and P.mu_e_vpi == 0
        assert set(T.degree[inner(T)].tolist()) == {4}

    def test_vertex_intensity(self):
        # length intensity sqrt(pi) gives one crossing per unit area
        seeds = replication_seeds(7, 100)
        P = pool(estimate_planar(generate(GeneratorSpec(
            "poisson_line", length=6.0, line_intensity=math.sqrt(math.pi), seed=s)))
            for s in seeds)
        assert abs(P.lam_v - 1.0) <= 3 * P.stderr["lam_v"]


class TestPoissonVoronoi:
    @pytest.mark.parametrize("seed", range(5))
    def test_generic_position(self, seed):
        T = generate(GeneratorSpec("poisson_voronoi", length=8.0, seed=seed))
        P = estimate_planar(T)
        assert (P.mu_ve, P.mu2_ve, P.phi) == (3, 9, 0)
        assert not T.kind_pi.any()
        assert all(np.all(t >= -1e-9) for t in T.cell_turns)

    def test_vertex_to_cell_ratio(self):
        seeds = replication_seeds(8, 30)
        P = pool(estimate_planar(generate(GeneratorSpec("poisson_voronoi", length=10.0, seed=s)))
                 for s in seeds)
        assert P.lam_v / P.lam_z == pytest.approx(2.0, rel=0.03)


class TestBrickWall:
    def test_exact_planar_values(self, brick8):
        P = estimate_planar(brick8)
        want = {"lam_v": 2, "lam_e": 3, "lam_z": 1, "phi": 1, "mu_ve": 3, "mu2_ve": 9,
                "mu_e_vpi": 2, "ell_e": 2 / 3, "area_z": 1}
        for k, v in want.items():
            assert getattr(P, k) == pytest.approx(v, rel=1e-12), k

    def test_every_edge_has_two_pi_endpoints(self, brick4):
        e = brick4.inner_edges()
        assert brick4.kind_pi[brick4.edges[e]].all()

    @pytest.mark.parametrize("seed", range(3))
    def test_random_phase_keeps_exact_values(self, seed):
        T = generate(GeneratorSpec("brick_wall", length=6.0, random_phase=True, seed=seed))
        P = estimate_planar(T)
        assert (P.lam_v, P.lam_z, P.phi, P.mu_ve) == pytest.approx((2, 1, 1, 3), rel=1e-12)

    def test_incommensurate(self):
        with pytest.raises(IncommensurateWindow):
            generate(GeneratorSpec("brick_wall", length=4.5))
        with pytest.raises(IncommensurateWindow):
            generate(GeneratorSpec("brick_wall", length=3.0, row_offset=0.5))

    def test_coordinates_exactly_representable(self, brick8):
        x = brick8.points[inner(brick8)]
        assert np.all(x * 2 == np.round(x * 2))
