"""Seedable stationary planar tessellations.

Three reference families are provided: the isotropic Poisson line
tessellation and the Poisson-Voronoi tessellation (both side-to-side,
``phi = 0``) and a running-bond brick wall (every vertex a T-vertex,
``phi = 1``).
"""

import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial import Voronoi

from .errors import ConfigError, DegenerateCocircularity, IncommensurateWindow
from .planar import Window, build_from_segments

log = logging.getLogger(__name__)

FAMILIES = ("poisson_line", "poisson_voronoi", "brick_wall")


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one planar generator run.

    Attributes
    ----------
    family : str
        One of ``poisson_line``, ``poisson_voronoi``, ``brick_wall``.
    length, margin : float
        Inner window side ``L`` and margin ``m`` (default ``L / 4``).
    line_intensity : float
        Mean line length per unit area for ``poisson_line``.
    point_intensity : float
        Site intensity for ``poisson_voronoi``.
    brick_width, brick_height, row_offset : float
        Brick dimensions and the row offset as a fraction of the width.
    random_phase : bool
        Shift the brick layout by a uniform random vector.
    seed : int
    """

    family: str
    length: float
    margin: float | None = None
    line_intensity: float = 1.0
    point_intensity: float = 1.0
    brick_width: float = 1.0
    brick_height: float = 1.0
    row_offset: float = 0.5
    random_phase: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        for name in ("length", "line_intensity", "point_intensity", "brick_width", "brick_height"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be strictly positive")
        if not 0 < self.row_offset < 1:
            raise ConfigError("row_offset must lie in (0, 1)")
        if self.margin is not None and self.margin < 0:
            raise ConfigError("margin must be non-negative")

    @property
    def window(self):
        return Window(self.length, self.margin)

    def with_seed(self, seed):
        return replace(self, seed=int(seed))

    @classmethod
    def from_dict(cls, d):
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown generator fields: {sorted(extra)}")
        return cls(**d)


def replication_seeds(master, n):
    """Independent 64-bit seeds for ``n`` replications of a master seed."""
    children = np.random.SeedSequence(int(master)).spawn(n)
    return [int(c.generate_state(1, np.uint64)[0]) for c in children]


def generate(spec):
    """Dispatch on ``spec.family``."""
    return {
        "poisson_line": gen_poisson_line,
        "poisson_voronoi": gen_poisson_voronoi,
        "brick_wall": gen_brick_wall,
    }[spec.family](spec)


def poisson_line_segments(spec, rng):
    w = spec.window
    centre = 0.5 * (w.lo + w.hi)
    radius = (w.hi - w.lo) / math.sqrt(2.0)
    # number of isotropic lines hitting a disc of radius R is Poisson(2 R L_A)
    n = rng.poisson(2.0 * radius * spec.line_intensity)
    theta = rng.uniform(0.0, math.pi, n)
    p = rng.uniform(-radius, radius, n)
    normal = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    tangent = np.stack([-np.sin(theta), np.cos(theta)], axis=1)
    foot = centre + p[:, None] * normal
    reach = 2.0 * radius
    return np.stack([foot - reach * tangent, foot + reach * tangent], axis=1)


def gen_poisson_line(spec):
    """Isotropic Poisson line tessellation restricted to the extended window."""
    rng = np.random.default_rng(spec.seed)
    return build_from_segments(poisson_line_segments(spec, rng), spec.window)


def _voronoi_segments(sites, lo, hi):
    n = len(sites)
    mirrored = [sites]
    for ax in (0, 1):
        for bound in (lo, hi):
            m = sites.copy()
            m[:, ax] = 2.0 * bound - m[:, ax]
            mirrored.append(m)
    vor = Voronoi(np.concatenate(mirrored))
    ridges = np.asarray(vor.ridge_points)
    rv = np.asarray(vor.ridge_vertices, dtype=np.int64)
    keep = (ridges[:, 0] < n) & (ridges[:, 1] < n) & np.all(rv >= 0, axis=1)
    return vor.vertices[rv[keep]]


def _vertex_degrees(segs, tol):
    ends = np.round(segs.reshape(-1, 2) / tol).astype(np.int64)
    _, counts = np.unique(ends, axis=0, return_counts=True)
    return counts


def gen_poisson_voronoi(spec, max_retries=5):
    """Voronoi diagram of a Poisson sample on the extended window.

    Sites are reflected across the four window sides so that the diagram
    of the original sites is clipped exactly to the frame.  Near-degenerate
    configurations (a Voronoi edge shorter than ``10 eps`` or a vertex of
    degree above 3) are resolved by jittering all sites by ``10 eps``; each
    occurrence is logged.
    """
    w = spec.window
    eps = 1e-9 * w.length
    rng = np.random.default_rng(spec.seed)
    n = rng.poisson(spec.point_intensity * (w.hi - w.lo) ** 2)
    sites = rng.uniform(w.lo, w.hi, size=(n, 2))
    if n < 2:
        raise DegenerateCocircularity("fewer than two Voronoi sites")
    for attempt in range(max_retries + 1):
        segs = _voronoi_segments(sites, w.lo, w.hi)
        lengths = np.hypot(*(segs[:, 1] - segs[:, 0]).T)
        inside = np.all((segs > w.lo + eps) & (segs < w.hi - eps), axis=(1, 2))
        degenerate = np.any(lengths < 10 * eps) or np.any(
            _vertex_degrees(segs[inside], 10 * eps) > 3
        )
        if not degenerate:
            return build_from_segments(segs[lengths >= eps], w)
        log.warning(
            "near-cocircular Voronoi sites (seed %d, attempt %d); jittering by %g",
            spec.seed, attempt, 10 * eps,
        )
        sites = np.clip(sites + rng.normal(scale=10 * eps, size=sites.shape), w.lo, w.hi)
    raise DegenerateCocircularity(f"degenerate Voronoi diagram after {max_retries} retries")


def _check_commensurate(spec):
    L, bw, bh, o = spec.length, spec.brick_width, spec.brick_height, spec.row_offset
    for ratio, what in ((L / bw, "L / w"), (L / bh, "L / h"), (L / bh * o, "(L / h) o")):
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, abs(ratio)):
            raise IncommensurateWindow(f"{what} = {ratio} is not an integer")


def brick_wall_segments(spec, rng=None):
    _check_commensurate(spec)
    w = spec.window
    bw, bh, o = spec.brick_width, spec.brick_height, spec.row_offset
    x0 = y0 = 0.0
    if spec.random_phase:
        rng = np.random.default_rng(spec.seed) if rng is None else rng
        x0 = rng.uniform(0.0, bw)
        y0 = rng.uniform(0.0, bh)
    k_lo = math.floor((w.lo - y0) / bh) - 1
    k_hi = math.ceil((w.hi - y0) / bh) + 1
    segs = []
    for k in range(k_lo, k_hi + 1):
        y = y0 + k * bh
        segs.append([[w.lo - bw, y], [w.hi + bw, y]])
        shift = x0 + (k * o % 1.0) * bw
        i_lo = math.floor((w.lo - shift) / bw) - 1
        i_hi = math.ceil((w.hi - shift) / bw) + 1
        for i in range(i_lo, i_hi + 1):
            x = shift + i * bw
            segs.append([[x, y], [x, y + bh]])
    return np.array(segs, dtype=float)


def gen_brick_wall(spec):
    """Running-bond brick layout with rows offset by ``row_offset * w``.

    Raises
    ------
    IncommensurateWindow
        Unless ``L / w``, ``L / h`` and ``(L / h) * row_offset`` are integers,
        which makes the window an exact union of layout periods.
    """
    return build_from_segments(brick_wall_segments(spec), spec.window)
