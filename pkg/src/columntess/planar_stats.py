"""Window estimators of planar parameters and cell-mark means.

Typical objects are sampled by the reference-point rule: a vertex by its
position, an edge by its midpoint, a cell by its centroid and a 0-face
instance by its vertex.  An object is typical when its reference point lies
in the inner window ``[0, L)^2``.  Cells touching the window frame are never
typical.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._summary import Summary, pool
from .errors import EmptyWindow
from .planar import (
    cell_gamma,
    edge_alpha,
    edge_gamma,
    edges_intersecting_cell,
    pi_beta,
    vertex_alpha,
    vertex_gamma,
    z0_beta,
)

__all__ = [
    "PlanarSummary",
    "MarkSummary",
    "estimate_planar",
    "estimate_marks",
    "check_second_order_identities",
    "pool",
]


@dataclass
class PlanarSummary(Summary):
    """Planar intensities (per unit area) and typical-object means.

    ``mu_vpi_e`` is the mean degree of a pi-vertex and ``mu_e_vpi`` the mean
    number of pi-endpoints of an edge.  ``mean_k_e`` is the mean number of
    edges meeting the typical cell.
    """

    lam_v: float
    lam_e: float
    lam_z: float
    lam_z0: float
    lam_vpi: float
    mu_ve: float
    mu2_ve: float
    phi: float
    mu_vpi_e: float
    mu_e_vpi: float
    ell_e: float
    area_z: float
    mean_k_e: float = math.nan
    stderr: dict = field(default_factory=dict)
    weights: dict = field(default_factory=dict)


@dataclass
class MarkSummary(Summary):
    """Means of the cell-mark functionals over typical objects."""

    rho_z: float
    alpha_v: float
    alpha_e: float
    alpha_vpi: float
    beta_z0: float
    beta_vpi: float
    gamma_v: float
    gamma_e: float
    gamma_z: float
    stderr: dict = field(default_factory=dict)
    weights: dict = field(default_factory=dict)


def _typical(T):
    iv = T.inner_vertices()
    ie = T.inner_edges()
    iz = T.inner_cells()
    if not iv.any() or not ie.any() or not iz.any():
        raise EmptyWindow("the inner window contains no vertex, edge or cell")
    return iv, ie, iz


def estimate_planar(T):
    """Estimate the planar parameters of ``T`` on its inner window.

    Standard errors of intensities are Poisson (``sqrt(n) / area``); those of
    means are naive within-window errors.  Replication errors come from
    :func:`pool`.

    Raises
    ------
    EmptyWindow
    """
    iv, ie, iz = _typical(T)
    area = T.window.area
    deg = T.degree[iv].astype(float)
    pi = T.kind_pi[iv]
    ends_pi = T.kind_pi[T.edges[ie]].sum(axis=1)
    z0_in = T.window.contains(T.points[T.z0_vertex]) & ~T.boundary_vertex[T.z0_vertex]
    counts = {"lam_v": iv.sum(), "lam_e": ie.sum(), "lam_z": iz.sum(),
              "lam_z0": z0_in.sum(), "lam_vpi": (T.kind_pi & iv).sum()}
    means = {
        "mu_ve": deg,
        "mu2_ve": deg**2,
        "phi": pi.astype(float),
        "mu_vpi_e": deg[pi],
        "mu_e_vpi": ends_pi.astype(float),
        "ell_e": T.edge_lengths[ie],
        "area_z": T.cell_area[iz],
        "mean_k_e": [edges_intersecting_cell(T, z) for z in np.flatnonzero(iz)],
    }
    S = PlanarSummary(**{k: math.nan for k in PlanarSummary.slot_names()})
    for k, n in counts.items():
        S.put_intensity(k, int(n), area)
    for k, x in means.items():
        S.put(k, x)
    return S


def estimate_marks(T, rho):
    """Mean cell-mark functionals over typical objects of ``T``.

    Raises
    ------
    EmptyWindow, MissingMark
    """
    iv, ie, iz = _typical(T)
    rho = np.asarray(rho, dtype=float)
    alpha_v = vertex_alpha(T, rho)
    pis = iv & T.kind_pi
    z0_in = T.window.contains(T.points[T.z0_vertex]) & ~T.boundary_vertex[T.z0_vertex]
    samples = {
        "rho_z": rho[iz],
        "alpha_v": alpha_v[iv],
        "alpha_e": edge_alpha(T, rho)[ie],
        "alpha_vpi": alpha_v[pis],
        "beta_z0": z0_beta(T, rho)[z0_in],
        "beta_vpi": pi_beta(T, rho)[pis],
        "gamma_v": vertex_gamma(T, rho)[iv],
        "gamma_e": edge_gamma(T, rho)[ie],
        "gamma_z": cell_gamma(T, rho)[iz],
    }
    S = MarkSummary(**{k: math.nan for k in MarkSummary.slot_names()})
    for k, x in samples.items():
        S.put(k, x)
    return S


def _residual(lhs, rhs, scale=None):
    scale = abs(lhs) if scale is None else abs(scale)
    if lhs == rhs:
        return 0.0
    return float(abs(lhs - rhs) / scale)


def check_second_order_identities(T, rho):
    """Relative residuals of the cell-sum identities for mark means.

    Each identity equates an intensity-weighted mean over typical vertices
    or edges with an intensity-weighted mean over typical cells,
    ``lam_X * mean_X = lam_Z * E_Z(count_X(z) * rho_z)``.  Returns a dict
    ``name -> |lhs - rhs| / |lhs|``.  The difference form of the pi-vertex
    identity is scaled by ``lam_v * alpha_v`` since both of its sides vanish
    on side-to-side tessellations.
    """
    P = estimate_planar(T)
    M = estimate_marks(T, rho)
    iv, ie, iz = _typical(T)
    rho = np.asarray(rho, dtype=float)
    cells = np.flatnonzero(iz)
    n_bdry = T.n_boundary_vertices()[cells]
    n_corner = T.n_corners()[cells]
    r = rho[cells]
    k_e = np.array([edges_intersecting_cell(T, z) for z in cells])

    def cell_mean(x):
        return P.lam_z * float(np.mean(x * r))

    lam_vpi_beta = P.lam_vpi * M.beta_vpi if P.lam_vpi > 0 else 0.0
    return {
        "vertex_alpha": _residual(P.lam_v * M.alpha_v, cell_mean(n_bdry)),
        "edge_alpha": _residual(P.lam_e * M.alpha_e, cell_mean(n_bdry)),
        "zero_face_beta": _residual(P.lam_z0 * M.beta_z0, cell_mean(n_corner)),
        "pi_beta": _residual(lam_vpi_beta, cell_mean(n_bdry - n_corner)),
        "pi_beta_difference": _residual(
            P.lam_v * M.alpha_v - P.lam_z0 * M.beta_z0, lam_vpi_beta, P.lam_v * M.alpha_v
        ),
        "edge_gamma": _residual(P.lam_e * M.gamma_e, cell_mean(T.cell_perimeter[cells])),
        "vertex_gamma": _residual(
            P.lam_v * M.gamma_v, cell_mean(k_e) + P.lam_v * M.alpha_v
        ),
    }


def summary_from_dict(cls, d):
    return cls.from_dict(d)
