"""Filter scorers: each maps a dataset to one weight per feature.

The entropy-, mutual-information- and Gini-based scorers expect an
integer-coded dataset (see ``discretize_equal_width``); entropies are in
bits. Fisher, variance, Laplacian and ReliefF work on raw values.
"""

from __future__ import annotations

import warnings

import numpy as np

from .dataset import Dataset, is_discretized
from .errors import FeatselWarning
from .scores import FeatureScores, rank_top_k

FISHER_EPS = 1e-12
# greedy mRMR treats scores this close as equal so the lower index wins
MRMR_TIE_TOL = 1e-12


def _require_discrete(ds: Dataset):
    if not is_discretized(ds):
        raise ValueError("expected integer-coded (discretized) feature values")
    ds.require_supervised()


def _entropy(counts) -> float:
    counts = np.asarray(counts, dtype=float)
    counts = counts[counts > 0]
    if counts.size == 0:
        return 0.0
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum())


def _gini_impurity(counts) -> float:
    counts = np.asarray(counts, dtype=float)
    p = counts / counts.sum()
    return float(1.0 - (p * p).sum())


def _contingency(x_codes, y_codes) -> np.ndarray:
    """Joint count table, rows = values of x, columns = values of y."""
    _, xi = np.unique(x_codes, return_inverse=True)
    _, yi = np.unique(y_codes, return_inverse=True)
    table = np.zeros((xi.max() + 1, yi.max() + 1))
    np.add.at(table, (xi, yi), 1.0)
    return table


def _conditional_entropy(table) -> float:
    """H(Y | X) for a table with X on rows."""
    n = table.sum()
    return sum(row.sum() / n * _entropy(row) for row in table)


def mutual_information(x_codes, y_codes) -> float:
    table = _contingency(x_codes, y_codes)
    mi = _entropy(table.sum(axis=0)) - _conditional_entropy(table)
    return max(mi, 0.0)


def _columns(ds):
    return [ds.values[:, j] for j in range(ds.n_features)]


def info_gain(ds: Dataset) -> FeatureScores:
    """H(C) - H(C | X_j) for every feature."""
    _require_discrete(ds)
    y = ds.class_codes
    return FeatureScores("info-gain", [mutual_information(x, y) for x in _columns(ds)])


def gain_ratio(ds: Dataset) -> FeatureScores:
    _require_discrete(ds)
    y = ds.class_codes
    scores = []
    for x in _columns(ds):
        h_x = _entropy(np.unique(x, return_counts=True)[1])
        scores.append(mutual_information(x, y) / h_x if h_x > 0 else 0.0)
    return FeatureScores("gain-ratio", scores)


def symmetrical_uncertainty(ds: Dataset) -> FeatureScores:
    _require_discrete(ds)
    y = ds.class_codes
    h_c = _entropy(np.bincount(y))
    scores = []
    for x in _columns(ds):
        denom = _entropy(np.unique(x, return_counts=True)[1]) + h_c
        scores.append(min(2.0 * mutual_information(x, y) / denom, 1.0) if denom > 0 else 0.0)
    return FeatureScores("su", scores)


def gini_index_score(ds: Dataset) -> FeatureScores:
    """Decrease of class Gini impurity from conditioning on each feature."""
    _require_discrete(ds)
    y = ds.class_codes
    g_c = _gini_impurity(np.bincount(y))
    n = len(y)
    scores = []
    for x in _columns(ds):
        table = _contingency(x, y)
        conditional = sum(row.sum() / n * _gini_impurity(row) for row in table)
        scores.append(max(g_c - conditional, 0.0))
    return FeatureScores("gini", scores)


def fisher_score(ds: Dataset) -> FeatureScores:
    ds.require_supervised()
    y = ds.class_codes
    classes = np.unique(y)
    scores = []
    for x in _columns(ds):
        if np.ptp(x) == 0:
            scores.append(0.0)
            continue
        mu = x.mean()
        between = within = 0.0
        for c in classes:
            xc = x[y == c]
            between += len(xc) * (xc.mean() - mu) ** 2
            within += len(xc) * xc.var()
        scores.append(between / (within + FISHER_EPS))
    return FeatureScores("fisher", scores)


def term_variance(ds: Dataset) -> FeatureScores:
    """Population variance of each column (unsupervised)."""
    scores = [0.0 if np.ptp(x) == 0 else float(x.var()) for x in _columns(ds)]
    return FeatureScores("variance", scores)


def _minmax(values):
    lo = values.min(axis=0)
    span = values.max(axis=0) - lo
    safe = np.where(span > 0, span, 1.0)
    return np.where(span > 0, (values - lo) / safe, 0.0), span


def laplacian_score(ds: Dataset, k_neighbors: int = 5, bandwidth: float = 1.0) -> FeatureScores:
    """Negated Laplacian score, so that locality-preserving features rank first.

    The similarity graph links each row to its ``k_neighbors`` nearest rows
    (min-max normalized, Euclidean, union-symmetrized) with heat-kernel
    weights ``exp(-dist**2 / bandwidth)``. Constant features score 0.
    """
    n = ds.n_samples
    if not 1 <= k_neighbors < n:
        raise ValueError(f"k_neighbors must lie in [1, {n - 1}], got {k_neighbors}")
    if not bandwidth > 0:
        raise ValueError("bandwidth must be positive")
    Z, span = _minmax(ds.values)
    if not np.any(span > 0):
        warnings.warn("all rows identical; Laplacian scores are all zero", FeatselWarning, stacklevel=2)
        return FeatureScores("laplacian", np.zeros(ds.n_features))

    sq = ((Z[:, None, :] - Z[None, :, :]) ** 2).sum(axis=2)
    masked = sq.copy()
    np.fill_diagonal(masked, np.inf)
    nearest = np.argsort(masked, axis=1, kind="stable")[:, :k_neighbors]
    adjacency = np.zeros((n, n), dtype=bool)
    adjacency[np.repeat(np.arange(n), k_neighbors), nearest.ravel()] = True
    adjacency |= adjacency.T
    S = np.where(adjacency, np.exp(-sq / bandwidth), 0.0)
    degree = S.sum(axis=1)
    L = np.diag(degree) - S

    scores = np.zeros(ds.n_features)
    for j in range(ds.n_features):
        f = ds.values[:, j]
        if span[j] == 0:
            continue
        f_tilde = f - (f @ degree) / degree.sum()
        denom = f_tilde @ (degree * f_tilde)
        if denom <= 0:
            continue
        scores[j] = -(f_tilde @ L @ f_tilde) / denom
    return FeatureScores("laplacian", scores)


def relieff(ds: Dataset, m: int | None = None, k_neighbors: int = 5, seed: int | None = None) -> FeatureScores:
    """ReliefF weights on min-max normalized features.

    With ``m`` = n (the default) every row is used once in row order; with a
    smaller ``m`` the rows are sampled without replacement from ``seed``.
    Nearest hits and misses use the Manhattan distance over normalized
    differences; ties go to the lower row index. Misses from each other class
    are weighted by that class's prior among the non-target classes.
    """
    ds.require_supervised()
    n = ds.n_samples
    if m is None:
        m = n
    if not 1 <= m <= n:
        raise ValueError(f"sample count m must lie in [1, {n}], got {m}")
    if k_neighbors < 1:
        raise ValueError("k_neighbors must be >= 1")

    Z, _ = _minmax(ds.values)
    y = ds.class_codes
    counts = np.bincount(y, minlength=ds.n_classes)
    prior = counts / n
    members = [np.flatnonzero(y == c) for c in range(ds.n_classes)]
    short = [ds.label_set[c] for c in range(ds.n_classes) if 0 < counts[c] <= k_neighbors]
    if short:
        warnings.warn(
            f"classes {short} have <= {k_neighbors} members; using fewer neighbours for them",
            FeatselWarning,
            stacklevel=2,
        )

    if m == n:
        rows = np.arange(n)
    else:
        if seed is None:
            raise ValueError("a seed is required when m < n")
        rows = np.random.default_rng(seed).choice(n, size=m, replace=False)

    weights = np.zeros(ds.n_features)
    for r in rows:
        diff = np.abs(Z - Z[r])
        dist = diff.sum(axis=1)
        own = y[r]
        update = np.zeros(ds.n_features)
        for c, idx in enumerate(members):
            if c == own:
                idx = idx[idx != r]
            if idx.size == 0:
                continue
            near = idx[np.argsort(dist[idx], kind="stable")[:k_neighbors]]
            contribution = diff[near].sum(axis=0) / len(near)
            if c == own:
                update -= contribution
            else:
                update += prior[c] / (1.0 - prior[own]) * contribution
        weights += update
    return FeatureScores("relieff", weights / m)


def mrmr_select(ds: Dataset, k: int) -> tuple[list[int], list[float]]:
    """Greedy mRMR (difference form). Returns the picks and the score of each pick."""
    _require_discrete(ds)
    d = ds.n_features
    if not 1 <= k <= d:
        raise ValueError(f"k={k} outside [1, {d}]")
    y = ds.class_codes
    cols = _columns(ds)
    relevance = np.array([mutual_information(x, y) for x in cols])
    redundancy = np.zeros(d)
    selected: list[int] = []
    trace: list[float] = []
    remaining = list(range(d))
    for step in range(k):
        if step == 0:
            scores = relevance[remaining]
        else:
            scores = relevance[remaining] - redundancy[remaining] / step
        best_value = scores.max()
        pick = next(j for j, s in zip(remaining, scores) if s >= best_value - MRMR_TIE_TOL)
        selected.append(pick)
        trace.append(float(scores[remaining.index(pick)]))
        remaining.remove(pick)
        for j in remaining:
            redundancy[j] += mutual_information(cols[j], cols[pick])
    return selected, trace


def mrmr_scores(ds: Dataset, k: int | None = None) -> tuple[list[int], FeatureScores]:
    """mRMR order plus order-derived weights (first pick = d, ... unselected 0)."""
    from .scores import order_weights

    order, trace = mrmr_select(ds, ds.n_features if k is None else k)
    weights = order_weights("mrmr", order, ds.n_features)
    return order, FeatureScores("mrmr", weights.scores, info={"trace": trace})


__all__ = [
    "info_gain",
    "gain_ratio",
    "symmetrical_uncertainty",
    "gini_index_score",
    "fisher_score",
    "term_variance",
    "laplacian_score",
    "relieff",
    "mrmr_select",
    "mrmr_scores",
    "mutual_information",
    "rank_top_k",
]
