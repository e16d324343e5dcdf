"""Command-line interface: ``wglasso <subcommand> ...``.

Exit codes: 0 success, 1 usage/input error, 2 CSV parse error,
3 numerical failure, 4 estimate written but the iteration did not converge.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bench import (CONVERGENCE_FIELDS, METHODS, RESULT_FIELDS, BenchSpec, run_bench,
                    run_convergence, to_csv)
from .dataset import center, load_csv, write_csv
from .errors import NonSquareInput, NotPositiveDefinite, ParseError, WGLassoError
from .estimator import WglassoConfig, fit
from .glasso import GlassoConfig
from .graph import from_precision, hubs_csv, to_dot, to_edgelist
from .selection import default_grid, parse_grid, select_rho
from .simgen import ContaminationSpec, build_model, sample

log = logging.getLogger("wglasso")

EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_NOCONV = 4


def _floats(text):
    return [float(v) for v in text.split(",") if v]


def _ints(text):
    return [int(v) for v in text.split(",") if v]


def _strs(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def _onoff(text):
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def _rho_policy(text):
    return text if text == "cv" else float(text)


def _add_fit_flags(p):
    p.add_argument("--input", required=True, help="observations CSV (one row per observation)")
    p.add_argument("--header", action="store_true", help="first CSV line is a header")
    p.add_argument("--rho", type=float, default=0.1)
    p.add_argument("--grid", type=parse_grid, default=None, help="lo:hi:count or comma list")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--delta", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--penalize-diagonal", type=_onoff, default=True, metavar="{on,off}")
    p.add_argument("--init", choices=("sample", "spearman"), default="sample")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", type=Path, default=Path("."))


def _fit_config(args, rho):
    return WglassoConfig(
        glasso=GlassoConfig(rho=rho, penalize_diagonal=args.penalize_diagonal),
        delta=args.delta,
        max_outer_iters=args.max_iter,
        initializer=args.init,
    )


def _write_json(path, obj):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def cmd_estimate(args):
    d = center(load_csv(args.input, has_header=args.header))
    rho = args.rho
    summary = {}
    if args.cv:
        sel = select_rho(d, args.grid or default_grid(), _fit_config(args, rho), args.folds, args.seed)
        rho = sel.best_rho
        summary["cv"] = sel.table()
    res = fit(d, _fit_config(args, rho))
    args.out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(args.out_dir / "omega.csv", res.omega, header=d.labels)
    summary.update(
        rho=rho,
        iterations=res.outer_iters,
        converged=res.converged,
        objective=res.objective,
        weights=[float(w) for w in res.weights],
        trace=[{"iteration": i, "step": s, "objective": o} for i, s, o in res.trace],
    )
    _write_json(args.out_dir / "summary.json", summary)
    log.info("wrote %s and %s", args.out_dir / "omega.csv", args.out_dir / "summary.json")
    return 0 if res.converged else EXIT_NOCONV


def cmd_cv(args):
    d = center(load_csv(args.input, has_header=args.header))
    sel = select_rho(d, args.grid or default_grid(), _fit_config(args, args.rho), args.folds, args.seed)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    rows = [dict(rho=r, score=s) for r, s in zip(sel.grid, sel.scores)]
    (args.out_dir / "cv.csv").write_text(to_csv(rows, ["rho", "score"]), encoding="utf-8")
    _write_json(args.out_dir / "cv.json", {"best_rho": sel.best_rho, "table": sel.table()})
    print(sel.best_rho)
    return 0


def cmd_simulate(args):
    model = build_model(args.model, args.p, perm_seed=args.perm_seed)
    d, mask = sample(model, ContaminationSpec(args.n1, args.gamma, args.mu, args.seed))
    write_csv(args.output, d.rows)
    if args.mask:
        np.savetxt(args.mask, mask.astype(int), fmt="%d")
    if args.truth:
        write_csv(args.truth, model.omega)
    return 0


def _bench_spec(args):
    overrides = dict(
        models=args.model, p=args.p, gamma=args.gamma, mu=args.mu, n1=args.n1,
        replications=args.reps, methods=args.method, seed=args.seed, rho=args.rho,
        grid=args.grid, folds=args.folds, delta=args.delta, max_iter=args.max_iter,
        wglasso_penalize_diagonal=args.penalize_diagonal,
    )
    if args.config:
        return BenchSpec.from_json(args.config, **overrides)
    return BenchSpec(**{k: v for k, v in overrides.items() if v is not None})


def _emit(text_csv, path, fmt):
    if fmt == "gnuplot":
        lines = text_csv.splitlines()
        text_csv = "# " + lines[0].replace(",", " ") + "\n" + "".join(
            ln.replace(",", " ") + "\n" for ln in lines[1:])
    if path is None or str(path) == "-":
        sys.stdout.write(text_csv)
    else:
        Path(path).write_text(text_csv, encoding="utf-8")


def cmd_bench(args):
    spec = _bench_spec(args)
    details = [] if args.details else None
    rows = run_bench(spec, workers=args.workers, details=details)
    _emit(to_csv(rows, RESULT_FIELDS), args.output, args.format)
    if details is not None:
        keys = ["model", "p", "gamma", "mu", "rep", "method", "f1", "fnorm", "kl", "kl_printed",
                "rho", "inlier_weight", "outlier_weight", "error"]
        Path(args.details).write_text(to_csv(details, keys), encoding="utf-8")
    return 0


def cmd_convergence(args):
    if not args.config:
        for name, default in (("model", ["identity"]), ("p", [10]), ("gamma", [0.1]), ("mu", [5.0]),
                              ("method", ["wglasso", "glasso"])):
            if getattr(args, name) is None:
                setattr(args, name, default)
    spec = _bench_spec(args)
    rows = run_convergence(spec.models[0], spec.p[0], spec.gamma[0], spec.mu[0], args.n, spec,
                           workers=args.workers)
    _emit(to_csv(rows, CONVERGENCE_FIELDS), args.output, args.format)
    return 0


def cmd_export_graph(args):
    try:
        table = load_csv(args.input)
    except ParseError as exc:
        if exc.row != 1:
            raise
        table = load_csv(args.input, has_header=True)
    omega = table.rows
    if omega.shape[0] != omega.shape[1]:
        raise NonSquareInput(f"matrix in {args.input} is {omega.shape[0]}x{omega.shape[1]}")
    labels = table.labels
    if args.labels:
        labels = [ln.strip() for ln in Path(args.labels).read_text(encoding="utf-8").splitlines()
                  if ln.strip()]
    g = from_precision(omega, labels)
    text = to_dot(g) if args.format == "dot" else to_edgelist(g)
    _emit(text, args.output, "csv")
    if args.hubs:
        Path(args.hubs).write_text(hubs_csv(g), encoding="utf-8")
    return 0


def _add_bench_flags(p, single=False):
    conv = _strs if not single else (lambda t: [t])
    p.add_argument("--config", help="JSON file with BenchSpec fields; flags override it")
    p.add_argument("--model", type=conv, default=None, help="identity, ar1, perm-ar1")
    p.add_argument("--p", type=_ints if not single else (lambda t: [int(t)]), default=None)
    p.add_argument("--n1", type=int, default=None)
    p.add_argument("--gamma", type=_floats if not single else (lambda t: [float(t)]), default=None)
    p.add_argument("--mu", type=_floats if not single else (lambda t: [float(t)]), default=None)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--method", type=_strs, default=None, help=f"subset of {','.join(METHODS)}")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--rho", type=_rho_policy, default=None, help="'cv' or a fixed value")
    p.add_argument("--grid", type=parse_grid, default=None)
    p.add_argument("--folds", type=int, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--penalize-diagonal", type=_onoff, default=None, metavar="{on,off}")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "gnuplot"), default="csv")
    p.add_argument("--output", default=None, help="results file (default: stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="wglasso", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="fit the weighted graphical lasso to a CSV")
    _add_fit_flags(p)
    p.add_argument("--cv", action="store_true", help="choose rho by stratified CV over --grid")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("cv", help="cross-validation table for rho")
    _add_fit_flags(p)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("simulate", help="write a contaminated sample to CSV")
    p.add_argument("--model", default="ar1")
    p.add_argument("--p", type=int, default=20)
    p.add_argument("--n1", type=int, default=50)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--mu", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perm-seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.add_argument("--mask", help="also write the inlier mask (1 = inlier)")
    p.add_argument("--truth", help="also write the true precision matrix")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="Monte Carlo comparison over a scenario grid")
    _add_bench_flags(p)
    p.add_argument("--details", help="per-replication CSV")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("convergence", help="mean Fnorm to truth as n grows")
    _add_bench_flags(p, single=True)
    p.add_argument("--n", type=_ints, required=True, help="ascending comma list of sample sizes")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("export-graph", help="edge list or DOT from a precision CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--labels", help="file with one node label per line")
    p.add_argument("--format", choices=("edgelist", "dot"), default="edgelist")
    p.add_argument("--output", default=None)
    p.add_argument("--hubs", help="also write the degree ranking CSV")
    p.set_defaults(func=cmd_export_graph)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NotPositiveDefinite, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (WGLassoError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
