"""Embedded selectors: L1-regularized logistic regression and CART importances."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .classifiers import ClassifierSpec, train
from .dataset import Dataset
from .scores import FeatureScores, SelectionOutcome, rank_top_k


@dataclass(frozen=True)
class RegularizedFitConfig:
    lam: float = 0.01
    max_iters: int = 500
    step_size: float = 0.1
    tolerance: float = 1e-6

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lambda must be >= 0")
        if self.max_iters < 1 or not self.step_size > 0 or not self.tolerance > 0:
            raise ValueError("iterations, step size and tolerance must be positive")


@dataclass
class LogisticFit:
    weights: np.ndarray
    intercept: float
    iterations: int
    converged: bool
    objective: list[float] = field(default_factory=list)


def standardize(X):
    """Zero mean, unit population variance; constant columns are zeroed and flagged."""
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    active = np.ptp(X, axis=0) > 0
    Z = np.where(active, (X - mean) / np.where(active, std, 1.0), 0.0)
    return Z, active


def _objective(Z, t, w, b, lam):
    margin = t * (Z @ w + b)
    return float(np.mean(np.logaddexp(0.0, -margin)) + lam * np.abs(w).sum())


def _soft_threshold(v, thresh):
    return np.sign(v) * np.maximum(np.abs(v) - thresh, 0.0)


def lambda_max(Z, t) -> float:
    """Smallest lambda for which w = 0 is optimal (intercept free, columns centred)."""
    positive = (t > 0).astype(float)
    return float(np.max(np.abs(Z.T @ positive)) / len(t)) if Z.size else 0.0


def fit_l1_logistic(Z, t, cfg: RegularizedFitConfig, track_objective=False) -> LogisticFit:
    """ISTA on mean logistic loss + lam * ||w||_1; ``t`` holds +-1 targets.

    The intercept is not penalized. The step is capped at 1/L for the
    loss's Lipschitz bound so the objective never increases.
    """
    n, d = Z.shape
    A = np.hstack([Z, np.ones((n, 1))])
    lipschitz = 0.25 * np.linalg.norm(A, 2) ** 2 / n
    step = min(cfg.step_size, 1.0 / lipschitz)
    w = np.zeros(d)
    b = 0.0
    objective = [_objective(Z, t, w, b, cfg.lam)] if track_objective else []
    converged = False
    it = 0
    for it in range(1, cfg.max_iters + 1):
        margin = t * (Z @ w + b)
        g = -t / (1.0 + np.exp(margin)) / n
        w_new = _soft_threshold(w - step * (Z.T @ g), step * cfg.lam)
        b_new = b - step * g.sum()
        change = max(np.max(np.abs(w_new - w), initial=0.0), abs(b_new - b))
        w, b = w_new, b_new
        if track_objective:
            objective.append(_objective(Z, t, w, b, cfg.lam))
        if change < cfg.tolerance:
            converged = True
            break
    return LogisticFit(w, b, it, converged, objective)


def l1_logistic_weights(ds: Dataset, cfg: RegularizedFitConfig | None = None) -> FeatureScores:
    """|coefficient| of an L1-logistic fit on standardized features.

    Binary problems fit once with the second label as the positive class.
    Multi-class problems fit one-vs-rest and keep each feature's largest
    magnitude. Constant features always score 0.
    """
    cfg = cfg or RegularizedFitConfig()
    ds.require_supervised()
    Z, active = standardize(ds.values)
    codes = ds.class_codes
    present = [c for c in range(ds.n_classes) if np.any(codes == c)]
    targets = [present[1]] if len(present) == 2 else present

    scores = np.zeros(ds.n_features)
    converged = []
    for c in targets:
        t = np.where(codes == c, 1.0, -1.0)
        fit = fit_l1_logistic(Z[:, active], t, cfg)
        scores[active] = np.maximum(scores[active], np.abs(fit.weights))
        converged.append(fit.converged)
    return FeatureScores("l1-logistic", scores, info={"converged": all(converged)})


def tree_importance(ds: Dataset, tree_spec: ClassifierSpec | None = None) -> FeatureScores:
    """Normalized total Gini decrease per feature of a fitted CART tree."""
    tree_spec = tree_spec or ClassifierSpec(kind="decision-tree")
    if tree_spec.kind != "decision-tree":
        raise ValueError("tree importance needs a decision-tree spec")
    model = train(tree_spec, ds)
    raw = model.state.impurity_decrease()
    total = raw.sum()
    scores = raw / total if total > 0 else np.zeros_like(raw)
    return FeatureScores("tree-importance", scores)


EMBEDDED_METHODS = {
    "l1-logistic": l1_logistic_weights,
    "tree-importance": tree_importance,
}


def embedded_select(method: str, ds: Dataset, k: int, params=None) -> SelectionOutcome:
    """Top-``k`` features by the named embedded method's scores."""
    if method not in EMBEDDED_METHODS:
        raise ValueError(f"unknown embedded method {method!r}")
    start = time.perf_counter()
    weights = EMBEDDED_METHODS[method](ds, params) if params is not None else EMBEDDED_METHODS[method](ds)
    selected = rank_top_k(weights, k)
    return SelectionOutcome(method, k, selected, weights, time.perf_counter() - start)
