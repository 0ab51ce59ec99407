"""Registry of selection methods by CLI name, grouped by approach.

Ranking methods score the training set once and take prefixes of one
ranking for every requested subset size. Search methods run once per size.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from . import filters
from .classifiers import ClassifierSpec
from .dataset import DEFAULT_BINS, Dataset, discretize_equal_width
from .embedded import RegularizedFitConfig, l1_logistic_weights, tree_importance
from .scores import FeatureScores, SelectionOutcome, rank_top_k
from .wrappers import GAParams, SearchConfig, genetic_select, sequential_backward_select, sequential_forward_select


@dataclass(frozen=True)
class MethodParams:
    bins: int = DEFAULT_BINS
    relieff_k: int = 5
    relieff_m: Optional[int] = None
    laplacian_k: int = 5
    laplacian_bandwidth: float = 1.0
    folds: int = 5
    wrapper_classifier: Optional[ClassifierSpec] = None
    ga: GAParams = field(default_factory=GAParams)
    l1: RegularizedFitConfig = field(default_factory=RegularizedFitConfig)
    tree: ClassifierSpec = field(default_factory=lambda: ClassifierSpec(kind="decision-tree"))


@dataclass(frozen=True)
class MethodInfo:
    name: str
    approach: str
    kind: str  # "ranking" or "search"
    summary: str


_ROSTER = [
    MethodInfo("info-gain", "filter", "ranking", "information gain on discretized features [--bins]"),
    MethodInfo("gain-ratio", "filter", "ranking", "information gain / feature entropy [--bins]"),
    MethodInfo("su", "filter", "ranking", "symmetrical uncertainty [--bins]"),
    MethodInfo("gini", "filter", "ranking", "Gini impurity decrease [--bins]"),
    MethodInfo("fisher", "filter", "ranking", "Fisher score on raw values"),
    MethodInfo("variance", "filter", "ranking", "term variance (unsupervised)"),
    MethodInfo("laplacian", "filter", "ranking", "negated Laplacian score [--laplacian-k, --laplacian-bandwidth]"),
    MethodInfo("relieff", "filter", "ranking", "ReliefF [--relieff-k, --relieff-m]"),
    MethodInfo("mrmr", "filter", "ranking", "greedy mRMR, difference form [--bins]"),
    MethodInfo("sfs", "wrapper", "search", "sequential forward selection [--folds]"),
    MethodInfo("sbs", "wrapper", "search", "sequential backward selection [--folds]"),
    MethodInfo("ga", "wrapper", "search", "genetic algorithm over feature masks [--folds, --ga-*]"),
    MethodInfo("l1-logistic", "embedded", "ranking", "L1-regularized logistic regression [--l1-*]"),
    MethodInfo("tree-importance", "embedded", "ranking", "CART Gini importance [--tree-*]"),
]

METHODS = {m.name: m for m in _ROSTER}
APPROACHES = ("filter", "wrapper", "embedded")


def methods_by_approach(approach: str) -> list[MethodInfo]:
    return [m for m in _ROSTER if m.approach == approach]


def score_features(method: str, ds: Dataset, params: MethodParams, seed: int = 0) -> tuple[FeatureScores, list[int]]:
    """Weights and full best-first order for a ranking method."""
    simple = {
        "info-gain": filters.info_gain,
        "gain-ratio": filters.gain_ratio,
        "su": filters.symmetrical_uncertainty,
        "gini": filters.gini_index_score,
    }
    if method in simple:
        weights = simple[method](discretize_equal_width(ds, params.bins))
    elif method == "mrmr":
        order, weights = filters.mrmr_scores(discretize_equal_width(ds, params.bins))
        return weights, order
    elif method == "fisher":
        weights = filters.fisher_score(ds)
    elif method == "variance":
        weights = filters.term_variance(ds)
    elif method == "laplacian":
        weights = filters.laplacian_score(ds, params.laplacian_k, params.laplacian_bandwidth)
    elif method == "relieff":
        weights = filters.relieff(ds, params.relieff_m, params.relieff_k, seed)
    elif method == "l1-logistic":
        weights = l1_logistic_weights(ds, params.l1)
    elif method == "tree-importance":
        weights = tree_importance(ds, params.tree)
    else:
        raise ValueError(f"{method!r} is not a ranking method")
    return weights, rank_top_k(weights, ds.n_features)


def select_features(
    method: str,
    ds: Dataset,
    k_list,
    params: MethodParams,
    classifier: ClassifierSpec,
    seed: int = 0,
    run_index: int = 0,
) -> dict[int, SelectionOutcome]:
    """Run one method on a training set for every size in ``k_list``."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    info = METHODS[method]
    if info.kind == "ranking":
        start = time.perf_counter()
        weights, order = score_features(method, ds, params, seed)
        seconds = time.perf_counter() - start
        return {
            k: SelectionOutcome(method, k, order[:k], weights, seconds, run_index) for k in k_list
        }

    cfg = SearchConfig(params.wrapper_classifier or classifier, params.folds, seed, params.ga)
    search = {"sfs": sequential_forward_select, "sbs": sequential_backward_select, "ga": genetic_select}[method]
    out = {}
    for k in k_list:
        outcome = search(ds, cfg, k)
        out[k] = SelectionOutcome(method, k, outcome.selected, outcome.weights, outcome.seconds, run_index, outcome.trace)
    return out
