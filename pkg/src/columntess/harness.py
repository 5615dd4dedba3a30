"""Experiment driver: seeded replications, pooled estimates, analytic comparison.

A run generates ``reps`` planar tessellations from derived seeds, builds a
column tessellation over each, estimates planar, mark and column summaries,
pools them with ratio-of-sums weights and compares the pooled column
summary against predictions computed from the pooled planar inputs.  The
report is deterministic: a rerun with the same configuration and master
seed serializes to identical bytes.
"""

import csv
import hashlib
import io
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from importlib import metadata

import numpy as np

from . import formulas
from ._summary import pool
from .column import MARK_RULES, ZProcessSpec, assign_marks, build
from .column_stats import BLOCKS, ColumnSummary, cross_check, estimate_column
from .errors import ConfigError, NonReproducible, OutOfDomain
from .generators import GeneratorSpec, generate, replication_seeds
from .planar_stats import (
    MarkSummary,
    PlanarSummary,
    check_second_order_identities,
    estimate_marks,
    estimate_planar,
)

log = logging.getLogger(__name__)

__all__ = [
    "Tolerances",
    "ExperimentConfig",
    "QuantityRow",
    "MeanValueReport",
    "run_experiment",
    "predict_only",
    "quantity_class",
    "dumps",
]

REPORT_SCHEMA = "columntess.report/1"
PREDICTION_SCHEMA = "columntess.prediction/1"
ZERO_SE_FLOOR = 1e-12

_METRIC_PREFIXES = ("ell_", "area_", "vol_")


def quantity_class(slot):
    """``exact`` for the universal constant ``mu_ve``, ``metric`` for lengths,
    areas and volumes, ``topo`` for intensities and topological means."""
    if slot == "mu_ve":
        return "exact"
    if slot.startswith(_METRIC_PREFIXES):
        return "metric"
    return "topo"


def code_version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


# ----------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class Tolerances:
    """Relative tolerance per quantity class."""

    exact: float = 1e-9
    topo: float = 0.02
    metric: float = 0.03

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ConfigError(f"tolerance {f.name} must be positive")

    def for_slot(self, slot):
        return getattr(self, quantity_class(slot))


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a verification run.

    Attributes
    ----------
    generator : GeneratorSpec
        Planar base; its ``seed`` is ignored in favour of derived seeds.
    mark_rule, mark_scale : str, float
        Rule for the column intensities ``rho``.
    zprocess : ZProcessSpec
    reps : int
        Number of replications ``R``.
    seed : int
        Master seed.
    tolerances : Tolerances
    prediction : {"auto", "general", "height1"}
        Formula family; ``auto`` takes the height-1 forms for a unit lattice.
    quantities : tuple of str, optional
        Slots to compare; all slots by default.
    cross_check : bool
        Also compare geometric and structural classifications.
    check_reproducible : bool
        Re-run the first replication and require identical summaries.
    jobs : int
        Worker processes for replications.
    out : str, optional
        Directory receiving ``report.json`` and ``report.csv``.
    """

    generator: GeneratorSpec
    mark_rule: str = "constant"
    mark_scale: float = 1.0
    zprocess: ZProcessSpec = field(default_factory=ZProcessSpec)
    reps: int = 1
    seed: int = 0
    tolerances: Tolerances = field(default_factory=Tolerances)
    prediction: str = "auto"
    quantities: tuple | None = None
    cross_check: bool = False
    check_reproducible: bool = False
    jobs: int = 1
    out: str | None = None

    def __post_init__(self):
        if not (isinstance(self.reps, int) and self.reps >= 1):
            raise ConfigError("reps must be an integer >= 1")
        if self.mark_rule not in MARK_RULES:
            raise ConfigError(f"unknown mark rule {self.mark_rule!r}")
        if self.prediction not in ("auto", "general", "height1"):
            raise ConfigError(f"unknown prediction family {self.prediction!r}")
        if self.quantities is not None:
            unknown = set(self.quantities) - set(formulas.SLOTS)
            if unknown:
                raise ConfigError(f"unknown quantities {sorted(unknown)}")
        if not (isinstance(self.jobs, int) and self.jobs >= 1):
            raise ConfigError("jobs must be an integer >= 1")

    @property
    def family(self):
        if self.prediction != "auto":
            return self.prediction
        return "height1" if self.zprocess.kind == "unit_lattice" else "general"

    @property
    def slots(self):
        return tuple(self.quantities) if self.quantities is not None else formulas.SLOTS

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config fields: {sorted(extra)}")
        if "generator" not in d:
            raise ConfigError("config needs a 'generator' section")
        try:
            d["generator"] = GeneratorSpec.from_dict(d["generator"])
            d["zprocess"] = ZProcessSpec(**d.get("zprocess", {}))
            d["tolerances"] = Tolerances(**d.get("tolerances", {}))
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        if d.get("quantities") is not None:
            d["quantities"] = tuple(d["quantities"])
        return cls(**d)

    @classmethod
    def from_json(cls, path):
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        return cls.from_dict(doc)

    def to_dict(self):
        d = asdict(self)
        d["quantities"] = None if self.quantities is None else list(self.quantities)
        return d

    def canonical(self):
        """The fields that affect results (everything but ``jobs`` and ``out``)."""
        d = self.to_dict()
        for k in ("jobs", "out"):
            d.pop(k)
        return d

    def digest(self):
        """sha256 of the canonical JSON of :meth:`canonical`."""
        d = self.canonical()
        blob = json.dumps(d, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()


# ----------------------------------------------------------------------
# deterministic serialization


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps(obj, indent=0):
    """JSON text with every float written to 17 significant digits.

    Dict order is kept, NaN and infinities become ``null``.
    """
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, (bool, int, float, np.integer, np.floating, np.bool_)):
        return _fmt(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {dumps(v, indent + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if not len(obj):
            return "[]"
        items = [f"{pad}{dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# ----------------------------------------------------------------------
# replications


def _needed_blocks(slots):
    need = set()
    for s in slots:
        if s == "mu_ve" or s.startswith(("mu_", "nu")):
            need.add("adjacency")
        elif s in ("xi", "kappa", "psi", "tau"):
            need.add("interior")
        elif s.startswith(_METRIC_PREFIXES):
            need.add("metric")
    need.add("intensities")
    return tuple(b for b in BLOCKS if b in need)


def _run_replication(cfg_dict, index, seed):
    cfg = ExperimentConfig.from_dict(cfg_dict)
    T = generate(cfg.generator.with_seed(seed))
    rho = assign_marks(T, cfg.mark_rule, cfg.mark_scale)
    CT = build(T, rho, cfg.zprocess, seed)
    slots = cfg.slots
    S = estimate_column(CT, blocks=_needed_blocks(slots), wanted=set(slots))
    out = {
        "index": index,
        "seed": seed,
        "planar": estimate_planar(T).to_dict(),
        "marks": estimate_marks(T, rho).to_dict(),
        "column": S.to_dict(),
        "identities": check_second_order_identities(T, rho),
        "sizes": {"planar_cells": T.n_cells, "vertices": CT.n_vertices, "edges": CT.n_edges,
                  "plates": CT.n_plates, "cells": CT.n_cells},
    }
    if cfg.cross_check:
        out["cross_check"] = cross_check(CT)
    return out


def _replications(cfg, seeds):
    cfg_dict = cfg.to_dict()
    args = [(cfg_dict, i, s) for i, s in enumerate(seeds)]
    if cfg.jobs > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            results = list(ex.map(_run_replication, *zip(*args)))
    else:
        results = [_run_replication(*a) for a in args]
    return sorted(results, key=lambda r: r["index"])


def _predict(cfg, P, M):
    if cfg.family == "height1":
        return formulas.predict_all_height1(P)
    return formulas.predict_all(P, M)


# ----------------------------------------------------------------------
# report


@dataclass
class QuantityRow:
    """One compared slot.

    ``verdict`` is ``pass`` iff ``|empirical - analytic| <= max(tol |analytic|,
    3 stderr)``, ``skip`` when either side is undefined.  A relative floor of
    ``ZERO_SE_FLOOR`` keeps exact matches from failing on rounding alone.
    """

    name: str
    quantity_class: str
    analytic: float
    empirical: float
    stderr: float
    z_score: float
    tolerance: float
    verdict: str
    formula: str

    @classmethod
    def compare(cls, name, analytic, empirical, stderr, tol, formula):
        if not (math.isfinite(analytic) and math.isfinite(empirical)):
            return cls(name, quantity_class(name), analytic, empirical, stderr,
                       math.nan, tol, "skip", formula)
        se = stderr if math.isfinite(stderr) else 0.0
        diff = abs(empirical - analytic)
        bound = max(tol * abs(analytic), 3.0 * se, ZERO_SE_FLOOR * abs(analytic))
        z = (empirical - analytic) / se if se > 0 else (0.0 if diff == 0 else math.inf)
        return cls(name, quantity_class(name), analytic, empirical, stderr, z, tol,
                   "pass" if diff <= bound else "fail", formula)


@dataclass
class MeanValueReport:
    """Analytic versus empirical mean values of one experiment."""

    rows: list
    verdict: str
    provenance: dict
    constraints: list
    planar: dict
    marks: dict
    predictions: dict
    replications: list

    @property
    def passed(self):
        return self.verdict == "pass"

    def row(self, name):
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self):
        return {
            "schema": REPORT_SCHEMA,
            "verdict": self.verdict,
            "provenance": self.provenance,
            "quantities": [asdict(r) for r in self.rows],
            "constraints": self.constraints,
            "pooled_planar": self.planar,
            "pooled_marks": self.marks,
            "predictions": self.predictions,
            "replications": self.replications,
        }

    def to_json(self):
        return dumps(self.to_dict()) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        names = [f.name for f in fields(QuantityRow)]
        w.writerow(names)
        for r in self.rows:
            w.writerow([_fmt(v) if isinstance(v, float) else v for v in (getattr(r, n) for n in names)])
        return buf.getvalue()

    def write(self, directory):
        os.makedirs(directory, exist_ok=True)
        paths = (os.path.join(directory, "report.json"), os.path.join(directory, "report.csv"))
        with open(paths[0], "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
        with open(paths[1], "w", encoding="utf-8") as fh:
            fh.write(self.to_csv())
        return paths


def run_experiment(cfg):
    """Run all replications of ``cfg`` and compare against the analytic values.

    Raises
    ------
    ConfigError, OutOfDomain, NonReproducible
        besides any error of the generators, the builder or the estimators.
    """
    seeds = replication_seeds(cfg.seed, cfg.reps)
    reps = _replications(cfg, seeds)
    if cfg.check_reproducible:
        again = _run_replication(cfg.to_dict(), 0, seeds[0])
        if dumps(again) != dumps(reps[0]):
            raise NonReproducible(f"replication 0 (seed {seeds[0]}) differs on rerun")

    P = pool(PlanarSummary.from_dict(r["planar"]) for r in reps)
    M = pool(MarkSummary.from_dict(r["marks"]) for r in reps)
    S = pool(ColumnSummary.from_dict(r["column"]) for r in reps)
    pred = _predict(cfg, P, M)

    per_rep = []
    for r in reps:
        try:
            p = _predict(cfg, PlanarSummary.from_dict(r["planar"]), MarkSummary.from_dict(r["marks"]))
            per_rep.append({"index": r["index"], "values": p.to_dict()["values"]})
        except OutOfDomain as exc:
            per_rep.append({"index": r["index"], "error": str(exc)})

    rows = []
    for name in cfg.slots:
        a = pred.values.get(name, math.nan)
        rows.append(QuantityRow.compare(name, a, getattr(S, name), S.stderr.get(name, math.nan),
                                        cfg.tolerances.for_slot(name),
                                        pred.provenance.get(name, "")))
    constraints = [c.to_dict() for c in formulas.check_constraints(P)]
    ok = all(r.verdict != "fail" for r in rows) and all(c["passed"] for c in constraints)

    replications = []
    for r, p in zip(reps, per_rep):
        entry = {"index": r["index"], "seed": r["seed"], "sizes": r["sizes"],
                 "identity_residuals": r["identities"], "column": r["column"]["values"],
                 "prediction": p.get("values", p.get("error"))}
        if "cross_check" in r:
            entry["cross_check"] = r["cross_check"]
        replications.append(entry)

    report = MeanValueReport(
        rows=rows,
        verdict="pass" if ok else "fail",
        provenance={"config_sha256": cfg.digest(), "master_seed": cfg.seed,
                    "replication_seeds": seeds, "code_version": code_version(),
                    "formula_family": cfg.family, "config": cfg.canonical()},
        constraints=constraints,
        planar=P.to_dict(),
        marks=M.to_dict(),
        predictions=pred.to_dict(),
        replications=replications,
    )
    if cfg.out:
        report.write(cfg.out)
    return report


# ----------------------------------------------------------------------
# predictions from a parameter file


_HEIGHT1_KEYS = ("lam_v", "mu_ve", "phi", "mu_e_vpi", "mu2_ve")
_MARK_KEYS = ("rho_z", "alpha_v", "alpha_e", "beta_z0", "gamma_v", "gamma_e", "gamma_z")


def predict_only(params):
    """Prediction document from planar parameters.

    ``params`` supplies ``lam_v``, ``mu_ve``, ``phi``, ``mu_e_vpi`` and
    ``mu2_ve`` (optionally ``ell_e``, ``area_z``, ``lam_z``) for the
    height-1 forms, or additionally a ``marks`` mapping with the mark means
    for the general forms.

    Returns
    -------
    dict
        ``ok`` is false when an input inequality is violated; the violated
        inequalities are listed under ``violated``.
    """
    params = dict(params)
    marks = params.pop("marks", None)
    missing = [k for k in _HEIGHT1_KEYS if k not in params]
    if missing:
        raise ConfigError(f"missing planar parameters: {missing}")
    ps = PlanarSummary(**{k: float(params.get(k, math.nan)) for k in PlanarSummary.slot_names()})
    constraints = [c.to_dict() for c in formulas.check_constraints(ps)]
    doc = {"schema": PREDICTION_SCHEMA, "inputs": params, "family": "height1",
           "constraints": constraints}
    violated = [c["name"] for c in constraints if not c["passed"]]
    if not ps.lam_v > 0:
        violated.append("λ'_V > 0")
    if violated:
        doc.update(ok=False, violated=violated)
        return doc
    try:
        if marks is None:
            pred = formulas.predict_all_height1(ps)
        else:
            absent = [k for k in _MARK_KEYS if k not in marks]
            if absent:
                raise ConfigError(f"missing mark means: {absent}")
            ms = MarkSummary(**{k: float(marks.get(k, math.nan)) for k in MarkSummary.slot_names()})
            doc["family"] = "general"
            pred = formulas.predict_all(ps, ms)
    except OutOfDomain as exc:
        doc.update(ok=False, violated=list(exc.violated))
        return doc
    doc.update(ok=True, violated=[], prediction=pred.to_dict())
    return doc
