"""Robust sparse precision matrix estimation with an adaptively weighted graphical lasso."""

__version__ = "0.1.0"

from .baselines import LwEstimate, ledoit_wolf
from .dataset import Dataset, center, load_csv, sample_cov, spearman_cov
from .errors import (DegenerateColumn, DimensionMismatch, InvalidK, NonSquareInput,
                     NotPositiveDefinite, ParseError, WGLassoError)
from .estimator import WglassoConfig, WglassoResult, compute_weights, fit, ise_score, weighted_cov
from .glasso import GlassoConfig, GlassoSolution, glasso, objective_value
from .metrics import EvalReport, evaluate, fnorm_loss, kl_loss, support_f1
from .selection import FoldPlan, select_rho, stratified_folds
from .simgen import ContaminationSpec, TrueModel, build_model, sample
