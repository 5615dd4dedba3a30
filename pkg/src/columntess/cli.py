"""Command line entry point: ``columntess <subcommand>``.

Subcommands
-----------
generate   planar tessellation to JSON
build      column tessellation to JSON and OBJ
estimate   summaries of stored planar and column complexes
predict    analytic values from a planar parameter file
verify     full experiment with a pass/fail exit status
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import replace

from .column import ColumnTessellation, assign_marks, build
from .column_stats import estimate_column
from .errors import TessellationError
from .generators import generate
from .harness import ExperimentConfig, dumps, predict_only, run_experiment
from .planar import dump_planar, load_planar
from .planar_stats import estimate_marks, estimate_planar

log = logging.getLogger("columntess")

EXIT_FAIL = 1
EXIT_ERROR = 2


def _common(p):
    p.add_argument("--config", metavar="PATH", help="experiment configuration (JSON)")
    p.add_argument("--seed", type=int, help="master seed (overrides the config)")
    p.add_argument("--reps", type=int, help="number of replications")
    p.add_argument("--out", metavar="DIR", default=".", help="output directory")
    p.add_argument("--tolerance-topo", type=float, metavar="X")
    p.add_argument("--tolerance-metric", type=float, metavar="X")
    p.add_argument("--jobs", type=int, help="worker processes")
    p.add_argument("-v", "--verbose", action="store_true")


def _parser():
    ap = argparse.ArgumentParser(prog="columntess", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    g = sub.add_parser("generate", help="planar tessellation to JSON")
    _common(g)
    b = sub.add_parser("build", help="column tessellation to JSON and OBJ")
    _common(b)
    b.add_argument("--planar", metavar="PATH", help="stored planar complex to build on")
    e = sub.add_parser("estimate", help="summaries of stored complexes")
    _common(e)
    e.add_argument("--planar", metavar="PATH")
    e.add_argument("--column", metavar="PATH")
    p = sub.add_parser("predict", help="analytic values from planar parameters")
    _common(p)
    p.add_argument("--input", metavar="PATH", required=True, help="planar parameter file (JSON)")
    v = sub.add_parser("verify", help="run an experiment and compare")
    _common(v)
    return ap


def _config(args):
    if not args.config:
        raise SystemExit("--config is required for this subcommand")
    cfg = ExperimentConfig.from_json(args.config)
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.reps is not None:
        changes["reps"] = args.reps
    if args.jobs is not None:
        changes["jobs"] = args.jobs
    tol = cfg.tolerances
    if args.tolerance_topo is not None:
        tol = replace(tol, topo=args.tolerance_topo)
    if args.tolerance_metric is not None:
        tol = replace(tol, metric=args.tolerance_metric)
    changes["tolerances"] = tol
    changes["out"] = args.out
    return replace(cfg, **changes)


def _write(path, text):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _planar_for(cfg):
    T = generate(cfg.generator.with_seed(cfg.seed))
    return T, assign_marks(T, cfg.mark_rule, cfg.mark_scale)


def cmd_generate(args):
    cfg = _config(args)
    T, rho = _planar_for(cfg)
    path = os.path.join(args.out, "planar.json")
    os.makedirs(args.out, exist_ok=True)
    dump_planar(T, path, rho)
    print(path)
    return 0


def cmd_build(args):
    cfg = _config(args)
    if args.planar:
        T, rho = load_planar(args.planar)
        if rho is None:
            rho = assign_marks(T, cfg.mark_rule, cfg.mark_scale)
    else:
        T, rho = _planar_for(cfg)
    CT = build(T, rho, cfg.zprocess, cfg.seed)
    os.makedirs(args.out, exist_ok=True)
    js, obj = os.path.join(args.out, "column.json"), os.path.join(args.out, "column.obj")
    CT.dump(js)
    CT.write_obj(obj)
    print(js)
    print(obj)
    return 0


def cmd_estimate(args):
    if not (args.planar or args.column):
        raise SystemExit("estimate needs --planar and/or --column")
    doc = {}
    if args.column:
        CT = ColumnTessellation.load(args.column)
        T, rho = CT.planar, CT.rho
        doc["column"] = estimate_column(CT).to_dict()
    else:
        T, rho = load_planar(args.planar)
    doc["planar"] = estimate_planar(T).to_dict()
    if rho is not None:
        doc["marks"] = estimate_marks(T, rho).to_dict()
    path = os.path.join(args.out, "summaries.json")
    _write(path, dumps(doc) + "\n")
    print(path)
    return 0


def cmd_predict(args):
    with open(args.input) as fh:
        params = json.load(fh)
    doc = predict_only(params)
    path = os.path.join(args.out, "prediction.json")
    _write(path, dumps(doc) + "\n")
    print(path)
    if not doc["ok"]:
        for name in doc["violated"]:
            print(f"violated: {name}", file=sys.stderr)
        return EXIT_FAIL
    return 0


def cmd_verify(args):
    cfg = _config(args)
    report = run_experiment(cfg)
    for r in report.rows:
        print(f"{r.verdict:4s} {r.name:10s} analytic={r.analytic:.6g} "
              f"empirical={r.empirical:.6g} se={r.stderr:.3g}")
    bad = [c["name"] for c in report.constraints if not c["passed"]]
    for name in bad:
        print(f"constraint violated: {name}")
    print(f"verdict: {report.verdict}")
    return 0 if report.passed else EXIT_FAIL


COMMANDS = {"generate": cmd_generate, "build": cmd_build, "estimate": cmd_estimate,
            "predict": cmd_predict, "verify": cmd_verify}


def main(argv=None):
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except TessellationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
