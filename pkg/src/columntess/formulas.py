"""Closed-form mean values of a column tessellation from planar statistics.

Two input families are accepted.  General-mark predictions take a planar
summary (``lam_v``, ``mu_ve``, ``mu2_ve``, ``phi``, ``mu_e_vpi``, ``ell_e``,
``area_z``) together with a mark summary (``rho_z``, ``alpha_v``, ``alpha_e``,
``alpha_vpi``, ``beta_z0``, ``gamma_v``, ``gamma_e``, ``gamma_z``).  Any
object exposing those attributes works, so measured summaries and exact
hand-made inputs are treated alike.

The height-1 forms need only five planar numbers; :func:`height1_marks`
turns them into the mark means of unit-height cuts so the two families can
be compared slot by slot.

Every slot carries a provenance string giving the expression evaluated.
"""

import math
from dataclasses import dataclass, field
from types import SimpleNamespace

from .errors import OutOfDomain

__all__ = [
    "SLOTS",
    "PredictionSet",
    "Constraint",
    "planar_domain",
    "height1_marks",
    "predict_intensities",
    "predict_topology",
    "predict_topology_height1",
    "predict_lengths",
    "predict_lengths_height1",
    "predict_areas_volume",
    "predict_areas_volume_height1",
    "predict_all",
    "predict_all_height1",
    "check_constraints",
]

TOL = 1e-9
# pi-endpoints per edge equal 2 phi mu'_V[pi]E / mu'_VE, so they vanish with phi
ZERO_PI = "μ'_EV[π] = 0 when φ = 0"

SLOTS = (
    "lam_v", "lam_e", "lam_e_hor", "lam_e_vert", "lam_p", "lam_p_hor", "lam_p_vert",
    "lam_z", "lam_p1", "lam_z1", "lam_z2",
    "mu_ve", "mu_pv", "mu_ep", "mu_zv", "mu_ze", "nu0_z", "nu1_z",
    "xi", "kappa", "psi", "tau",
    "ell_e", "ell_e_pi", "ell_p", "ell_z", "ell_z1", "ell_p1", "ell_z2", "ell_ze", "ell_z2e",
    "area_p", "area_z", "area_z2", "area_zz2", "vol_z",
)


@dataclass
class PredictionSet:
    """Analytic values keyed by the :class:`~columntess.column_stats.ColumnSummary` slot
    names, with the expression used for each slot.

    Slots are readable as attributes (``pred.mu_pv``).
    """

    values: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def __getattr__(self, name):
        values = self.__dict__.get("values", {})
        if name in values:
            return values[name]
        raise AttributeError(name)

    def merge(self, block):
        vals, prov = block
        self.values.update(vals)
        self.provenance.update(prov)
        return self

    def to_dict(self):
        order = [s for s in SLOTS if s in self.values]
        return {
            "values": {k: self.values[k] for k in order},
            "provenance": {k: self.provenance[k] for k in order},
        }


def _block(entries):
    """``entries`` maps slot -> (value, expression)."""
    return ({k: float(v) for k, (v, _) in entries.items()},
            {k: p for k, (_, p) in entries.items()})


# ----------------------------------------------------------------------
# domain


def planar_domain(mu_ve, phi, mu_e_vpi=None, tol=TOL):
    """Names of violated planar domain inequalities (empty when valid)."""
    bad = []
    if not (math.isfinite(mu_ve) and math.isfinite(phi)):
        return ["finite μ'_VE and φ"]
    if phi < -tol:
        bad.append("0 ≤ φ")
    if phi > 1 + tol:
        bad.append("φ ≤ 1")
    if mu_ve < 3 - tol:
        bad.append("3 ≤ μ'_VE")
    if mu_ve > 6 - 2 * phi + tol:
        bad.append("μ'_VE ≤ 6 − 2φ")
    if mu_e_vpi is not None and mu_ve > 0:
        if not math.isfinite(mu_e_vpi):
            bad.append("finite μ'_EV[π]")
        else:
            if mu_e_vpi < 6 * phi / mu_ve - tol:
                bad.append("6φ/μ'_VE ≤ μ'_EV[π]")
            if mu_e_vpi > 2 - 6 * (1 - phi) / mu_ve + tol:
                bad.append("μ'_EV[π] ≤ 2 − 6(1 − φ)/μ'_VE")
            # phi is a count ratio: zero means no pi-vertex at all
            if phi == 0 and abs(mu_e_vpi) > tol:
                bad.append(ZERO_PI)
    return bad


def _require(ps, ms=None, names=()):
    bad = planar_domain(ps.mu_ve, ps.phi)
    if bad:
        raise OutOfDomain("planar inputs outside the admissible domain: " + ", ".join(bad),
                          violated=tuple(bad))
    if ps.lam_v is not None and not ps.lam_v > 0:
        raise OutOfDomain("λ'_V must be positive", violated=("λ'_V > 0",))
    for n in names:
        v = getattr(ms, n)
        if not (math.isfinite(v) and v > 0):
            raise OutOfDomain(f"mark mean {n} = {v} must be finite and positive",
                              violated=(f"{n} > 0",))


def _phi_alpha_pi(ps, ms):
    # phi * alpha_V[pi]; the mean over pi-vertices is undefined when phi = 0
    return 0.0 if ps.phi == 0 else ps.phi * ms.alpha_vpi


# ----------------------------------------------------------------------
# height-1 reduction


def height1_marks(ps):
    """Mark means of the unit-height case expressed through planar statistics.

    ``rho = 1`` gives ``alpha_V = mu'_VE``, ``alpha_E = 2``, ``beta = 1``,
    ``gamma_V = mu'^(2)_VE``, ``gamma_E = 2 ell'_E``, ``gamma_Z = a'_Z`` and
    ``alpha_V[pi] = mu'_V[pi]E = mu'_VE mu'_EV[pi] / (2 phi)``.
    """
    alpha_vpi = ps.mu_ve * ps.mu_e_vpi / (2 * ps.phi) if ps.phi > 0 else math.nan
    return SimpleNamespace(
        rho_z=1.0,
        alpha_v=float(ps.mu_ve),
        alpha_e=2.0,
        alpha_vpi=alpha_vpi,
        beta_z0=1.0,
        beta_vpi=1.0,
        gamma_v=float(ps.mu2_ve),
        gamma_e=2.0 * getattr(ps, "ell_e", math.nan),
        gamma_z=float(getattr(ps, "area_z", math.nan)),
    )


def _lam_z_planar(ps):
    """Measured cell intensity when available, else ``lam_v (mu_ve - 2) / 2``."""
    lz = getattr(ps, "lam_z", None)
    if lz is not None and math.isfinite(lz) and lz > 0:
        return lz, "λ'_Z"
    return ps.lam_v * (ps.mu_ve - 2) / 2, "λ'_Z = λ'_V (μ'_VE − 2)/2"


def _with(expr, lz_src):
    # name the fallback for λ'_Z only when it was actually used
    return f"{expr} with {lz_src}" if "=" in lz_src else expr


# ----------------------------------------------------------------------
# general marks


def predict_intensities(ps, ms):
    """Intensities of primitive elements and of the face classes.

    Raises
    ------
    OutOfDomain
    """
    _require(ps, ms, ("rho_z", "alpha_v", "beta_z0"))
    lv, mu, phi = ps.lam_v, ps.mu_ve, ps.phi
    lz, lz_src = _lam_z_planar(ps)
    lz0 = lv * (mu - phi)
    a, r, b = ms.alpha_v, ms.rho_z, ms.beta_z0
    return _block({
        "lam_v": (lv * a, "λ'_V ᾱ_V"),
        "lam_e": (2 * lv * a, "2 λ'_V ᾱ_V"),
        "lam_e_hor": (lv * a, "λ'_V ᾱ_V"),
        "lam_e_vert": (lv * a, "λ'_V ᾱ_V"),
        "lam_p": (lv * a + lz * r, "λ'_V ᾱ_V + λ'_Z ρ̄_Z"),
        "lam_p_hor": (lz * r, "λ'_Z ρ̄_Z"),
        "lam_p_vert": (lv * a, "λ'_V ᾱ_V"),
        "lam_z": (lz * r, _with("λ'_Z ρ̄_Z", lz_src)),
        "lam_p1": (lz0 * b + 4 * lv * a, "λ'_Z0 β̄_Z0 + 4 λ'_V ᾱ_V, λ'_Z0 = λ'_V (μ'_VE − φ)"),
        "lam_z1": (3 * lz0 * b, "3 λ'_Z0 β̄_Z0"),
        "lam_z2": (2 * lz * r + lz0 * b, "2 λ'_Z ρ̄_Z + λ'_Z0 β̄_Z0"),
    })


def predict_topology(ps, ms):
    """Adjacency means and interior parameters for general marks.

    Raises
    ------
    OutOfDomain
    """
    _require(ps, ms, ("rho_z", "alpha_v", "beta_z0", "gamma_v"))
    mu, phi = ps.mu_ve, ps.phi
    a, r, b, g = ms.alpha_v, ms.rho_z, ms.beta_z0, ms.gamma_v
    pa = _phi_alpha_pi(ps, ms)
    nu0 = 4 * b * (mu - phi) / ((mu - 2) * r)
    return _block({
        "mu_ve": (4.0, "4"),
        "mu_pv": (2 * (3 * a + g) / (2 * a + (mu - 2) * r),
                  "2(3ᾱ_V + γ̄_V) / (2ᾱ_V + (μ'_VE − 2) ρ̄_Z)"),
        "mu_ep": (g / (2 * a) + 1.5, "γ̄_V/(2ᾱ_V) + 3/2"),
        "xi": (0.5 * pa / a + 0.5, "φ ᾱ_V[π] / (2ᾱ_V) + 1/2"),
        "kappa": (pa / a + (mu - phi) * b / a - 1, "φ ᾱ_V[π]/ᾱ_V + (μ'_VE − φ) β̄_Z0/ᾱ_V − 1"),
        "psi": (g / a - pa / a - 3 * (mu - phi) * b / a + 2,
                "γ̄_V/ᾱ_V − φ ᾱ_V[π]/ᾱ_V − 3(μ'_VE − φ) β̄_Z0/ᾱ_V + 2"),
        "tau": (g / a - (mu - phi) * b / a - 1, "γ̄_V/ᾱ_V − (μ'_VE − φ) β̄_Z0/ᾱ_V − 1"),
        "mu_zv": (2 * (g + a) / ((mu - 2) * r), "2(γ̄_V + ᾱ_V) / ((μ'_VE − 2) ρ̄_Z)"),
        "mu_ze": (2 * (g + 3 * a) / ((mu - 2) * r), "2(γ̄_V + 3ᾱ_V) / ((μ'_VE − 2) ρ̄_Z)"),
        "nu0_z": (nu0, "4 β̄_Z0 (μ'_VE − φ) / ((μ'_VE − 2) ρ̄_Z)"),
        "nu1_z": (1.5 * nu0, "(3/2) ν_0(Z)"),
    })


def predict_lengths(ps, ms):
    """Mean lengths for general marks.

    Raises
    ------
    OutOfDomain
    """
    _require(ps, ms, ("rho_z", "alpha_v", "alpha_e", "beta_z0", "gamma_e"))
    mu, phi = ps.mu_ve, ps.phi
    a, ae, r, b, ge = ms.alpha_v, ms.alpha_e, ms.rho_z, ms.beta_z0, ms.gamma_e
    pa = _phi_alpha_pi(ps, ms)
    return _block({
        "ell_e": (0.5 * (ge / ae + 1 / a), "(γ̄_E/ᾱ_E + 1/ᾱ_V)/2"),
        "ell_e_pi": ((mu * ge + 2 * phi) / (2 * (a + pa)),
                     "(μ'_VE γ̄_E + 2φ) / (2(ᾱ_V + φ ᾱ_V[π]))"),
        "ell_p": ((3 * ge + 2) * mu / ((mu - 2) * r + mu * ae),
                  "(3γ̄_E + 2) μ'_VE / ((μ'_VE − 2) ρ̄_Z + μ'_VE ᾱ_E)"),
        "ell_z": (2 * (mu * ge + mu - phi) / ((mu - 2) * r),
                  "2(μ'_VE γ̄_E + μ'_VE − φ) / ((μ'_VE − 2) ρ̄_Z)"),
        "ell_z1": ((mu * ge / (mu - phi) + 1) / (3 * b),
                   "(μ'_VE γ̄_E/(μ'_VE − φ) + 1) / (3 β̄_Z0)"),
        "ell_p1": (mu * (3 * ge + 2) / (2 * (mu - phi) * b + 4 * mu * ae),
                   "μ'_VE (3γ̄_E + 2) / (2(μ'_VE − φ) β̄_Z0 + 4 μ'_VE ᾱ_E)"),
        "ell_z2": ((2 * mu * ge + 2 * (mu - phi)) / ((mu - 2) * r + (mu - phi) * b),
                   "(2μ'_VE γ̄_E + 2(μ'_VE − φ)) / ((μ'_VE − 2) ρ̄_Z + (μ'_VE − φ) β̄_Z0)"),
        "ell_ze": (mu * (3 * ge + 2) / ((mu - 2) * r), "μ'_VE (3γ̄_E + 2) / ((μ'_VE − 2) ρ̄_Z)"),
        "ell_z2e": ((5 * mu * ge + 4 * mu - 2 * phi) / (2 * ((mu - 2) * r + (mu - phi) * b)),
                    "(5μ'_VE γ̄_E + 4μ'_VE − 2φ) / (2((μ'_VE − 2) ρ̄_Z + (μ'_VE − φ) β̄_Z0))"),
    })


def predict_areas_volume(ps, ms):
    """Mean areas and the mean cell volume for general marks.

    Raises
    ------
    OutOfDomain
    """
    _require(ps, ms, ("rho_z", "alpha_e", "beta_z0", "gamma_z"))
    if not (math.isfinite(ps.ell_e) and ps.ell_e > 0):
        raise OutOfDomain("ℓ̄'_E must be finite and positive", violated=("ℓ̄'_E > 0",))
    mu, phi, le = ps.mu_ve, ps.phi, ps.ell_e
    ae, r, b, gz = ms.alpha_e, ms.rho_z, ms.beta_z0, ms.gamma_z
    lz, lz_src = _lam_z_planar(ps)
    num = (mu - 2) * gz + mu * le
    return _block({
        "area_p": (num / ((mu - 2) * r + mu * ae),
                   "((μ'_VE − 2) γ̄_Z + μ'_VE ℓ̄'_E) / ((μ'_VE − 2) ρ̄_Z + μ'_VE ᾱ_E)"),
        "area_z": (2 / r * (gz + mu * le / (mu - 2)), "(2/ρ̄_Z)(γ̄_Z + μ'_VE ℓ̄'_E/(μ'_VE − 2))"),
        "area_z2": (num / ((mu - 2) * r + (mu - phi) * b),
                    "((μ'_VE − 2) γ̄_Z + μ'_VE ℓ̄'_E) / ((μ'_VE − 2) ρ̄_Z + (μ'_VE − φ) β̄_Z0)"),
        "area_zz2": (2 / r * (2 * gz + mu * le / (mu - 2)),
                     "(2/ρ̄_Z)(2γ̄_Z + μ'_VE ℓ̄'_E/(μ'_VE − 2))"),
        "vol_z": (1 / (lz * r), _with("1/(λ'_Z ρ̄_Z)", lz_src)),
    })


# ----------------------------------------------------------------------
# height 1


def _require_h1(ps):
    bad = planar_domain(ps.mu_ve, ps.phi, ps.mu_e_vpi)
    if bad:
        raise OutOfDomain("planar inputs outside the admissible domain: " + ", ".join(bad),
                          violated=tuple(bad))
    if not ps.lam_v > 0:
        raise OutOfDomain("λ'_V must be positive", violated=("λ'_V > 0",))


def predict_topology_height1(ps):
    """Topological means of unit-height columns from five planar numbers
    ``lam_v``, ``mu_ve``, ``phi``, ``mu_e_vpi`` and ``mu2_ve``.

    Raises
    ------
    OutOfDomain
    """
    _require_h1(ps)
    mu, m2, phi, e = ps.mu_ve, ps.mu2_ve, ps.phi, ps.mu_e_vpi
    nu0 = 4 * (mu - phi) / (mu - 2)
    return _block({
        "mu_ve": (4.0, "4"),
        "mu_pv": (2 * (3 * mu + m2) / (3 * mu - 2), "2(3μ'_VE + μ'^(2)_VE) / (3μ'_VE − 2)"),
        "mu_ep": ((3 * mu + m2) / (2 * mu), "(3μ'_VE + μ'^(2)_VE) / (2μ'_VE)"),
        "xi": (0.5 + 0.25 * e, "1/2 + μ'_EV[π]/4"),
        "kappa": (0.5 * e - phi / mu, "μ'_EV[π]/2 − φ/μ'_VE"),
        "psi": ((m2 + 3 * phi) / mu - 1 - 0.5 * e, "(μ'^(2)_VE + 3φ)/μ'_VE − 1 − μ'_EV[π]/2"),
        "tau": ((m2 + phi) / mu - 2, "(μ'^(2)_VE + φ)/μ'_VE − 2"),
        "mu_zv": (2 * (m2 + mu) / (mu - 2), "2(μ'^(2)_VE + μ'_VE) / (μ'_VE − 2)"),
        "mu_ze": (2 * (m2 + 3 * mu) / (mu - 2), "2(μ'^(2)_VE + 3μ'_VE) / (μ'_VE − 2)"),
        "nu0_z": (nu0, "4(μ'_VE − φ) / (μ'_VE − 2)"),
        "nu1_z": (1.5 * nu0, "6(μ'_VE − φ) / (μ'_VE − 2)"),
    })


def predict_intensities_height1(ps):
    """Intensities of unit-height columns.

    ``lam_z`` is used when supplied; otherwise ``lam_v (mu_ve - 2) / 2``
    turns the cell-based slots into the closed forms in ``lam_v`` and
    ``mu_ve`` alone.
    """
    _require_h1(ps)
    lv, mu, phi = ps.lam_v, ps.mu_ve, ps.phi
    lz, lz_src = _lam_z_planar(ps)
    return _block({
        "lam_v": (lv * mu, "λ'_V μ'_VE"),
        "lam_e": (2 * lv * mu, "2 λ'_V μ'_VE"),
        "lam_e_hor": (lv * mu, "λ'_V μ'_VE"),
        "lam_e_vert": (lv * mu, "λ'_V μ'_VE"),
        "lam_p": (lv * mu + lz, _with("λ'_V μ'_VE + λ'_Z", lz_src)),
        "lam_p_hor": (lz, lz_src),
        "lam_p_vert": (lv * mu, "λ'_V μ'_VE"),
        "lam_z": (lz, lz_src),
        "lam_p1": (lv * (5 * mu - phi), "λ'_V (5μ'_VE − φ)"),
        "lam_z1": (3 * lv * (mu - phi), "3 λ'_V (μ'_VE − φ)"),
        "lam_z2": (2 * lz + lv * (mu - phi), _with("2 λ'_Z + λ'_V (μ'_VE − φ)", lz_src)),
    })


def predict_lengths_height1(ps):
    """Mean lengths of unit-height columns; needs ``ell_e`` besides the five numbers."""
    _require_h1(ps)
    mu, phi, le, e = ps.mu_ve, ps.phi, ps.ell_e, ps.mu_e_vpi
    return _block({
        "ell_e": (0.5 * (le + 1 / mu), "(ℓ̄'_E + 1/μ'_VE)/2"),
        "ell_e_pi": (2 * (mu * le + phi) / (mu * (2 + e)),
                     "2(μ'_VE ℓ̄'_E + φ) / (μ'_VE (2 + μ'_EV[π]))"),
        "ell_p": (2 * mu * (3 * le + 1) / (3 * mu - 2), "2μ'_VE (3ℓ̄'_E + 1) / (3μ'_VE − 2)"),
        "ell_z": (2 * (2 * mu * le + mu - phi) / (mu - 2),
                  "2(2μ'_VE ℓ̄'_E + μ'_VE − φ) / (μ'_VE − 2)"),
        "ell_z1": (1 / 3 + 2 * mu * le / (3 * (mu - phi)), "1/3 + 2μ'_VE ℓ̄'_E / (3(μ'_VE − φ))"),
        "ell_p1": (mu * (3 * le + 1) / (5 * mu - phi), "μ'_VE (3ℓ̄'_E + 1) / (5μ'_VE − φ)"),
        "ell_z2": (2 * (2 * mu * le + mu - phi) / (2 * mu - phi - 2),
                   "2(2μ'_VE ℓ̄'_E + μ'_VE − φ) / (2μ'_VE − φ − 2)"),
        "ell_ze": (2 * mu * (3 * le + 1) / (mu - 2), "2μ'_VE (3ℓ̄'_E + 1) / (μ'_VE − 2)"),
        "ell_z2e": ((5 * mu * le + 2 * mu - phi) / (2 * mu - phi - 2),
                    "(5μ'_VE ℓ̄'_E + 2μ'_VE − φ) / (2μ'_VE − φ − 2)"),
    })


def predict_areas_volume_height1(ps):
    """Mean areas and volume of unit-height columns; needs ``ell_e`` and ``area_z``."""
    _require_h1(ps)
    mu, phi, le, az = ps.mu_ve, ps.phi, ps.ell_e, ps.area_z
    lz, lz_src = _lam_z_planar(ps)
    num = (mu - 2) * az + mu * le
    return _block({
        "area_p": (num / (3 * mu - 2), "((μ'_VE − 2) ā'_Z + μ'_VE ℓ̄'_E) / (3μ'_VE − 2)"),
        "area_z": (2 * (az + mu * le / (mu - 2)), "2(ā'_Z + μ'_VE ℓ̄'_E/(μ'_VE − 2))"),
        "area_z2": (num / (2 * mu - phi - 2),
                    "((μ'_VE − 2) ā'_Z + μ'_VE ℓ̄'_E) / (2μ'_VE − φ − 2)"),
        "area_zz2": (4 * az + 2 * mu * le / (mu - 2), "4ā'_Z + 2μ'_VE ℓ̄'_E/(μ'_VE − 2)"),
        "vol_z": (1 / lz, _with("1/λ'_Z", lz_src)),
    })


def predict_all(ps, ms):
    """Every general-mark block merged into one :class:`PredictionSet`.

    The area block is skipped when ``ps.ell_e`` is missing.
    """
    out = PredictionSet()
    for f in (predict_intensities, predict_topology, predict_lengths):
        out.merge(f(ps, ms))
    if math.isfinite(getattr(ps, "ell_e", math.nan)):
        out.merge(predict_areas_volume(ps, ms))
    return out


def predict_all_height1(ps):
    """Every height-1 block; metric slots are skipped when ``ell_e`` or ``area_z`` is missing."""
    out = PredictionSet()
    out.merge(predict_intensities_height1(ps))
    out.merge(predict_topology_height1(ps))
    if math.isfinite(getattr(ps, "ell_e", math.nan)):
        out.merge(predict_lengths_height1(ps))
        if math.isfinite(getattr(ps, "area_z", math.nan)):
            out.merge(predict_areas_volume_height1(ps))
    return out


# ----------------------------------------------------------------------
# constraints


@dataclass(frozen=True)
class Constraint:
    """One inequality ``lower ≤ value`` (``upper`` false) or ``value ≤ upper``."""

    name: str
    value: float
    bound: float
    upper: bool
    passed: bool

    def to_dict(self):
        return {"name": self.name, "value": self.value, "bound": self.bound,
                "upper": self.upper, "passed": self.passed}


def _leq(name, lhs, rhs, tol, upper, value, bound):
    ok = bool(lhs <= rhs + tol * max(1.0, abs(rhs)))
    return Constraint(name, float(value), float(bound), upper, ok)


def check_constraints(ps, tol=TOL):
    """Evaluate the height-1 domain bounds and the bounds on the topological means.

    Nothing is raised; each inequality becomes a :class:`Constraint`.  An
    inequality is considered to hold when it is violated by at most
    ``tol`` (relative, floored at 1), which lets attained bounds pass under
    rounding.
    """
    mu, phi, e = ps.mu_ve, ps.phi, ps.mu_e_vpi
    out = []

    def lower(name, bound, value):
        out.append(_leq(name, bound, value, tol, False, value, bound))

    def upper(name, value, bound):
        out.append(_leq(name, value, bound, tol, True, value, bound))

    lower("0 ≤ φ", 0.0, phi)
    upper("φ ≤ 1", phi, 1.0)
    lower("3 ≤ μ'_VE", 3.0, mu)
    upper("μ'_VE ≤ 6 − 2φ", mu, 6 - 2 * phi)
    if mu > 0:
        lower("6φ/μ'_VE ≤ μ'_EV[π]", 6 * phi / mu, e)
        upper("μ'_EV[π] ≤ 2 − 6(1 − φ)/μ'_VE", e, 2 - 6 * (1 - phi) / mu)
        if phi == 0:
            out.append(_leq(ZERO_PI, abs(e), 0.0, tol, True, e, 0.0))
    domain_ok = all(c.passed for c in out) and ps.lam_v > 0
    if not domain_ok:
        return out

    vals, _ = predict_topology_height1(ps)
    lower("36/7 ≤ 2μ'_VE(3 + μ'_VE)/(3μ'_VE − 2)", 36 / 7, 2 * mu * (3 + mu) / (3 * mu - 2))
    lower("2μ'_VE(3 + μ'_VE)/(3μ'_VE − 2) ≤ μ_PV", 2 * mu * (3 + mu) / (3 * mu - 2), vals["mu_pv"])
    lower("3 ≤ (3 + μ'_VE)/2", 3.0, 0.5 * (3 + mu))
    lower("(3 + μ'_VE)/2 ≤ μ_EP", 0.5 * (3 + mu), vals["mu_ep"])
    xi_lo, xi_hi = 0.5 + 3 * phi / (2 * mu), 1 - 3 * (1 - phi) / (2 * mu)
    lower("1/2 ≤ 1/2 + 3φ/(2μ'_VE)", 0.5, xi_lo)
    lower("1/2 + 3φ/(2μ'_VE) ≤ ξ", xi_lo, vals["xi"])
    upper("ξ ≤ 1 − 3(1 − φ)/(2μ'_VE)", vals["xi"], xi_hi)
    upper("1 − 3(1 − φ)/(2μ'_VE) ≤ 1", xi_hi, 1.0)
    k_lo, k_hi = 2 * phi / mu, 1 - (3 - 2 * phi) / mu
    lower("0 ≤ 2φ/μ'_VE", 0.0, k_lo)
    lower("2φ/μ'_VE ≤ κ", k_lo, vals["kappa"])
    upper("κ ≤ 1 − (3 − 2φ)/μ'_VE", vals["kappa"], k_hi)
    upper("1 − (3 − 2φ)/μ'_VE ≤ 3/4", k_hi, 0.75)
    psi_lo = mu + 3 / mu - 2
    lower("2 ≤ μ'_VE + 3/μ'_VE − 2", 2.0, psi_lo)
    lower("μ'_VE + 3/μ'_VE − 2 ≤ ψ", psi_lo, vals["psi"])
    tau_lo = mu + phi / mu - 2
    lower("1 ≤ μ'_VE + φ/μ'_VE − 2", 1.0, tau_lo)
    lower("μ'_VE + φ/μ'_VE − 2 ≤ τ", tau_lo, vals["tau"])
    return out
