"""Native classifiers: k-nearest neighbours, Gaussian naive Bayes and CART.

Models work on integer class codes internally and map back to the label
text of the training set. Every tie-break favours the lowest row index,
feature index or label-set position, so training and prediction are fully
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dataset import Dataset, _k_fold_codes

CLASSIFIER_KINDS = ("knn", "naive-bayes", "decision-tree")


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str = "knn"
    knn_k: int = 5
    max_depth: Optional[int] = None
    min_leaf: int = 2
    var_floor: float = 1e-9

    def __post_init__(self):
        if self.kind not in CLASSIFIER_KINDS:
            raise ValueError(f"unknown classifier {self.kind!r}; choose from {', '.join(CLASSIFIER_KINDS)}")
        if self.knn_k < 1:
            raise ValueError("knn k must be >= 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max depth must be >= 0 or None")
        if self.min_leaf < 1:
            raise ValueError("min leaf must be >= 1")
        if not self.var_floor > 0:
            raise ValueError("variance floor must be > 0")

    def describe(self) -> str:
        if self.kind == "knn":
            return f"knn (k={self.knn_k})"
        if self.kind == "naive-bayes":
            return f"naive-bayes (variance floor={self.var_floor:g})"
        depth = "unlimited" if self.max_depth is None else self.max_depth
        return f"decision-tree (max depth={depth}, min leaf={self.min_leaf})"


# -- array-level models -----------------------------------------------------


class _KNN:
    def __init__(self, k, X, y, n_labels):
        if k > len(X):
            raise ValueError(f"knn k={k} exceeds the {len(X)} training samples")
        self.k = k
        self.n_labels = n_labels
        self.lo = X.min(axis=0)
        span = X.max(axis=0) - self.lo
        self.scale = np.where(span > 0, span, 1.0)
        self.active = span > 0
        self.X = self._normalize(X)
        self.y = y

    def _normalize(self, X):
        # constant training features contribute nothing to distances
        return np.where(self.active, (X - self.lo) / self.scale, 0.0)

    def predict_codes(self, X):
        Z = self._normalize(X)
        dist = ((Z[:, None, :] - self.X[None, :, :]) ** 2).sum(axis=2)
        nearest = np.argsort(dist, axis=1, kind="stable")[:, : self.k]
        out = np.empty(len(X), dtype=np.intp)
        for i, row in enumerate(nearest):
            labels = self.y[row]
            votes = np.bincount(labels, minlength=self.n_labels)
            tied = np.flatnonzero(votes == votes.max())
            if len(tied) == 1:
                out[i] = tied[0]
            else:
                # vote tie: the tied label whose nearest member ranks first
                out[i] = next(lab for lab in labels if lab in tied)
        return out


class _NaiveBayes:
    def __init__(self, var_floor, X, y, n_labels):
        n, d = X.shape
        self.counts = np.bincount(y, minlength=n_labels)
        self.means = np.zeros((n_labels, d))
        self.vars = np.full((n_labels, d), var_floor)
        for c in range(n_labels):
            rows = X[y == c]
            if len(rows):
                self.means[c] = rows.mean(axis=0)
                self.vars[c] = np.maximum(rows.var(axis=0), var_floor)
        with np.errstate(divide="ignore"):
            self.log_prior = np.log(self.counts / n)

    def joint_log_likelihood(self, X):
        diff = X[:, None, :] - self.means[None, :, :]
        ll = -0.5 * (np.log(2 * np.pi * self.vars)[None] + diff**2 / self.vars[None]).sum(axis=2)
        return ll + self.log_prior[None, :]

    def predict_proba(self, X):
        jll = self.joint_log_likelihood(X)
        top = jll.max(axis=1, keepdims=True)
        p = np.exp(jll - top)
        return p / p.sum(axis=1, keepdims=True)

    def predict_codes(self, X):
        # argmax returns the first maximum: earliest label wins ties
        return np.argmax(self.joint_log_likelihood(X), axis=1)


@dataclass
class _Node:
    n: int
    gini: float
    prediction: int
    feature: int = -1
    threshold: float = 0.0
    left: Optional["_Node"] = None
    right: Optional["_Node"] = None

    @property
    def is_leaf(self):
        return self.left is None


def _gini(counts, total):
    if total == 0:
        return 0.0
    p = counts / total
    return 1.0 - float(np.dot(p, p))


def _best_split(X, y, n_labels):
    """Lowest weighted-Gini threshold split; ties keep the lowest feature, then threshold."""
    n, d = X.shape
    best = None
    best_score = np.inf
    for j in range(d):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        ys = y[order]
        boundaries = np.flatnonzero(xs[1:] > xs[:-1])
        if len(boundaries) == 0:
            continue
        onehot = np.zeros((n, n_labels))
        onehot[np.arange(n), ys] = 1.0
        left = np.cumsum(onehot, axis=0)[boundaries]
        right = onehot.sum(axis=0) - left
        n_left = (boundaries + 1).astype(float)
        n_right = n - n_left
        gini_left = 1.0 - ((left / n_left[:, None]) ** 2).sum(axis=1)
        gini_right = 1.0 - ((right / n_right[:, None]) ** 2).sum(axis=1)
        score = (n_left * gini_left + n_right * gini_right) / n
        i = int(np.argmin(score))
        if score[i] < best_score:
            best_score = float(score[i])
            lo, hi = xs[boundaries[i]], xs[boundaries[i] + 1]
            threshold = (lo + hi) / 2.0
            if not lo <= threshold < hi:  # adjacent floats
                threshold = lo
            best = (j, threshold, best_score)
    return best


class _Tree:
    def __init__(self, max_depth, min_leaf, X, y, n_labels):
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.n_labels = n_labels
        self.n_features = X.shape[1]
        self.n_train = len(X)
        self.root = self._grow(X, y, 0)

    def _grow(self, X, y, depth):
        counts = np.bincount(y, minlength=self.n_labels).astype(float)
        node = _Node(len(y), _gini(counts, len(y)), int(np.argmax(counts)))
        if (
            node.gini == 0.0
            or len(y) < self.min_leaf
            or (self.max_depth is not None and depth >= self.max_depth)
        ):
            return node
        split = _best_split(X, y, self.n_labels)
        if split is None:
            return node
        node.feature, node.threshold, _ = split
        mask = X[:, node.feature] <= node.threshold
        node.left = self._grow(X[mask], y[mask], depth + 1)
        node.right = self._grow(X[~mask], y[~mask], depth + 1)
        return node

    def predict_codes(self, X):
        out = np.empty(len(X), dtype=np.intp)
        for i, x in enumerate(X):
            node = self.root
            while not node.is_leaf:
                node = node.left if x[node.feature] <= node.threshold else node.right
            out[i] = node.prediction
        return out

    def impurity_decrease(self):
        """Total weighted Gini decrease per feature (unnormalized)."""
        total = np.zeros(self.n_features)
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                continue
            children = node.left.n * node.left.gini + node.right.n * node.right.gini
            total[node.feature] += (node.n * node.gini - children) / self.n_train
            stack += [node.left, node.right]
        return total

    def depth(self):
        def walk(node):
            return 0 if node.is_leaf else 1 + max(walk(node.left), walk(node.right))

        return walk(self.root)


def _fit_arrays(spec: ClassifierSpec, X, y, n_labels):
    if spec.kind == "knn":
        return _KNN(spec.knn_k, X, y, n_labels)
    if spec.kind == "naive-bayes":
        return _NaiveBayes(spec.var_floor, X, y, n_labels)
    return _Tree(spec.max_depth, spec.min_leaf, X, y, n_labels)


# -- public API -------------------------------------------------------------


@dataclass(frozen=True)
class TrainedModel:
    spec: ClassifierSpec
    feature_count: int
    label_set: tuple[str, ...]
    state: object = field(repr=False)

    def _check(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.feature_count:
            raise ValueError(f"expected {self.feature_count} feature values, got {X.shape[1]}")
        if not np.all(np.isfinite(X)):
            raise ValueError("instances must be finite")
        return X

    def predict_many(self, X) -> list[str]:
        codes = self.state.predict_codes(self._check(X))
        return [self.label_set[c] for c in codes]

    def predict(self, instance) -> str:
        instance = np.asarray(instance, dtype=float)
        if instance.ndim != 1:
            raise ValueError("predict takes a single feature vector")
        return self.predict_many(instance[None, :])[0]

    def predict_proba(self, X) -> np.ndarray:
        """Class posteriors (naive Bayes only), columns in label-set order."""
        if self.spec.kind != "naive-bayes":
            raise TypeError("posteriors are only available for naive-bayes")
        return self.state.predict_proba(self._check(X))


def train(spec: ClassifierSpec, ds: Dataset) -> TrainedModel:
    """Fit a classifier on a dataset; see ClassifierSpec for the kinds."""
    state = _fit_arrays(spec, ds.values, ds.class_codes, ds.n_classes)
    return TrainedModel(spec, ds.n_features, ds.label_set, state)


def predict(model: TrainedModel, instance) -> str:
    return model.predict(instance)


def accuracy(model: TrainedModel, ds: Dataset) -> float:
    """Fraction of rows of ``ds`` whose predicted label matches the true one."""
    if ds.n_features != model.feature_count:
        raise ValueError(f"model expects {model.feature_count} features, dataset has {ds.n_features}")
    unknown = set(ds.label_set) - set(model.label_set)
    if unknown:
        raise ValueError(f"dataset labels unknown to the model: {sorted(unknown)}")
    predicted = model.predict_many(ds.values)
    hits = sum(p == t for p, t in zip(predicted, ds.class_labels))
    return hits / ds.n_samples


def error_rate(model: TrainedModel, ds: Dataset) -> float:
    return 1.0 - accuracy(model, ds)


def cv_accuracy_arrays(spec, X, y, n_labels, folds) -> float:
    """Mean test-fold accuracy for precomputed folds (used by wrapper search)."""
    n = len(y)
    total = 0.0
    for test_idx in folds:
        mask = np.ones(n, dtype=bool)
        mask[test_idx] = False
        model = _fit_arrays(spec, X[mask], y[mask], n_labels)
        total += float(np.mean(model.predict_codes(X[test_idx]) == y[test_idx]))
    return total / len(folds)


def cross_val_accuracy(spec: ClassifierSpec, ds: Dataset, folds: int, seed: int) -> float:
    """Mean accuracy over a stratified ``folds``-fold partition seeded by ``seed``."""
    codes = ds.class_codes
    parts = _k_fold_codes(codes, folds, seed)
    return cv_accuracy_arrays(spec, ds.values, codes, ds.n_classes, parts)
