"""Monte Carlo comparison of precision estimators on simulated data.

Every (scenario, replication) pair is an independent task. Its data seed
depends only on the run seed and the replication index, so all scenarios
and methods share common random numbers and results do not depend on
execution order or worker count.
"""

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from itertools import product

import numpy as np

from .baselines import ledoit_wolf
from .dataset import Dataset, center, sample_cov
from .errors import WGLassoError
from .estimator import WglassoConfig, fit
from .glasso import GlassoConfig, glasso
from .metrics import evaluate, fnorm_loss
from .selection import default_grid, select_rho, select_rho_glasso
from .simgen import ContaminationSpec, build_model, canonical_kind, sample

METHODS = ("wglasso", "glasso", "lw", "spearman-init-wglasso")


@dataclass
class BenchSpec:
    models: list = field(default_factory=lambda: ["ar1"])
    p: list = field(default_factory=lambda: [20, 30])
    gamma: list = field(default_factory=lambda: [0.0, 0.06, 0.10])
    mu: list = field(default_factory=lambda: [2.0, 5.0])
    n1: int = 50
    replications: int = 20
    methods: list = field(default_factory=lambda: ["wglasso", "glasso", "lw"])
    seed: int = 0
    rho: object = "cv"  # "cv" or a number
    grid: list = field(default_factory=default_grid)
    folds: int = 5
    delta: float = 1e-6
    max_iter: int = 100
    wglasso_penalize_diagonal: bool = True
    glasso_penalize_diagonal: bool = False
    perm_seed: int = 0

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        self.models = [canonical_kind(m) for m in self.models]
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")
        if self.rho != "cv":
            self.rho = float(self.rho)

    @classmethod
    def from_json(cls, path, **overrides):
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f.name for f in fields(cls)}
        bad = set(data) - known
        if bad:
            raise ValueError(f"unknown config keys: {sorted(bad)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def scenarios(self):
        return list(product(self.models, self.p, self.gamma, self.mu))


def replication_seed(seed, rep) -> int:
    return int(np.random.SeedSequence([seed, rep]).generate_state(1)[0])


def _wglasso_cfg(spec, rho, initializer="sample"):
    return WglassoConfig(
        glasso=GlassoConfig(rho=rho, penalize_diagonal=spec.wglasso_penalize_diagonal),
        delta=spec.delta,
        max_outer_iters=spec.max_iter,
        initializer=initializer,
    )


def run_method(method, d: Dataset, spec: BenchSpec, seed: int):
    """Fit one method; returns ``(omega, info)``."""
    d = center(d)
    info = {}
    if method == "lw":
        est = ledoit_wolf(d)
        info["shrinkage"] = est.shrinkage
        return est.omega_hat, info

    if method == "glasso":
        gcfg = GlassoConfig(rho=0.0, penalize_diagonal=spec.glasso_penalize_diagonal)
        rho = spec.rho
        if rho == "cv":
            rho = select_rho_glasso(d, spec.grid, gcfg, spec.folds, seed).best_rho
        sol = glasso(sample_cov(d), replace(gcfg, rho=rho))
        info.update(rho=rho, converged=sol.converged)
        return sol.omega, info

    init = "spearman" if method == "spearman-init-wglasso" else "sample"
    rho = spec.rho
    if rho == "cv":
        rho = select_rho(d, spec.grid, _wglasso_cfg(spec, 0.1, init), spec.folds, seed).best_rho
    res = fit(d, _wglasso_cfg(spec, rho, init))
    info.update(rho=rho, converged=res.converged, outer_iters=res.outer_iters, weights=res.weights)
    return res.omega, info


def run_replication(spec: BenchSpec, scenario, rep: int):
    """Simulate one dataset for ``scenario`` and score every method on it."""
    kind, p, gamma, mu = scenario
    model = build_model(kind, p, perm_seed=spec.perm_seed)
    seed = replication_seed(spec.seed, rep)
    d, mask = sample(model, ContaminationSpec(spec.n1, gamma, mu, seed))
    out = {}
    for method in spec.methods:
        try:
            omega, info = run_method(method, d, spec, seed)
            report = evaluate(omega, model.omega)
        except (WGLassoError, FloatingPointError, np.linalg.LinAlgError) as exc:
            out[method] = {"error": f"{type(exc).__name__}: {exc}"}
            continue
        row = report.as_dict()
        row["rho"] = info.get("rho", math.nan)
        w = info.get("weights")
        if w is not None:
            row["inlier_weight"] = float(np.mean(w[mask]))
            row["outlier_weight"] = float(np.mean(w[~mask])) if (~mask).any() else math.nan
        out[method] = row
    return out


def _task(args):
    spec, scenario, rep = args
    return scenario, rep, run_replication(spec, scenario, rep)


def _map(tasks, workers):
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_task, tasks, chunksize=1))
    return [_task(t) for t in tasks]


def _mean_se(values):
    v = np.asarray([x for x in values if np.isfinite(x)], dtype=float)
    if v.size == 0:
        return math.nan, math.nan
    se = float(np.std(v, ddof=1) / np.sqrt(v.size)) if v.size > 1 else 0.0
    return float(np.mean(v)), se


RESULT_FIELDS = ["model", "p", "n1", "gamma", "mu", "method", "reps", "failures", "rho_mean",
                 "f1_mean", "f1_se", "fnorm_mean", "fnorm_se", "kl_mean", "kl_se",
                 "kl_printed_mean", "kl_printed_se"]


def run_bench(spec: BenchSpec, workers: int = 1, details=None):
    """Run the full grid. Returns one summary dict per (scenario, method).

    If ``details`` is a list, per-replication records are appended to it.
    """
    tasks = [(spec, sc, rep) for sc in spec.scenarios() for rep in range(spec.replications)]
    results = _map(tasks, workers)
    results.sort(key=lambda r: (spec.scenarios().index(r[0]), r[1]))

    rows = []
    for sc in spec.scenarios():
        per_rep = [r[2] for r in results if r[0] == sc]
        for method in spec.methods:
            recs = [rec[method] for rec in per_rep]
            ok = [r for r in recs if "error" not in r]
            row = dict(model=sc[0], p=sc[1], n1=spec.n1, gamma=sc[2], mu=sc[3], method=method,
                       reps=len(recs), failures=len(recs) - len(ok))
            row["rho_mean"] = _mean_se([r["rho"] for r in ok])[0]
            for metric in ("f1", "fnorm", "kl", "kl_printed"):
                row[f"{metric}_mean"], row[f"{metric}_se"] = _mean_se([r[metric] for r in ok])
            rows.append(row)
    if details is not None:
        for sc, rep, rec in results:
            for method, r in rec.items():
                details.append(dict(model=sc[0], p=sc[1], gamma=sc[2], mu=sc[3], rep=rep,
                                    method=method, **r))
    return rows


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def to_csv(rows, fieldnames) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([_fmt(row.get(k, "")) for k in fieldnames])
    return buf.getvalue()


# -- convergence in n ------------------------------------------------------

def _convergence_task(args):
    spec, kind, p, gamma, mu, n, rep = args
    n1 = max(2, int(round(n / (1.0 + gamma))))
    model = build_model(kind, p, perm_seed=spec.perm_seed)
    seed = replication_seed(spec.seed, rep * 1_000_003 + n)
    d, _ = sample(model, ContaminationSpec(n1, gamma, mu, seed))
    out = {}
    for method in spec.methods:
        try:
            omega, _ = run_method(method, d, spec, seed)
            out[method] = fnorm_loss(omega, model.omega)
        except (WGLassoError, FloatingPointError, np.linalg.LinAlgError):
            out[method] = math.nan
    return n, rep, out


def run_convergence(kind, p, gamma, mu, n_list, spec: BenchSpec, workers: int = 1):
    """Mean Fnorm-to-truth per total sample size and method."""
    if list(n_list) != sorted(n_list):
        raise ValueError("n list must be ascending")
    kind = canonical_kind(kind)
    tasks = [(spec, kind, p, gamma, mu, n, rep) for n in n_list for rep in range(spec.replications)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_convergence_task, tasks, chunksize=1))
    else:
        results = [_convergence_task(t) for t in tasks]
    rows = []
    for n in n_list:
        recs = [r[2] for r in results if r[0] == n]
        for method in spec.methods:
            mean, se = _mean_se([r[method] for r in recs])
            rows.append(dict(n=n, method=method, fnorm_mean=mean, fnorm_se=se, reps=len(recs)))
    return rows


CONVERGENCE_FIELDS = ["n", "method", "fnorm_mean", "fnorm_se", "reps"]


