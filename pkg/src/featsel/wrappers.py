"""Wrapper subset search: sequential forward/backward selection and a GA.

Fitness is the stratified k-fold accuracy of the configured classifier on
the candidate subset. One fold partition (seeded by ``SearchConfig.seed``)
is shared by every candidate of a search so comparisons are paired.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .classifiers import ClassifierSpec, cv_accuracy_arrays
from .dataset import Dataset, _k_fold_codes
from .scores import SelectionOutcome, order_weights


@dataclass(frozen=True)
class GAParams:
    population: int = 30
    generations: int = 50
    crossover_rate: float = 0.9
    mutation_rate: Optional[float] = None  # None -> 1/d
    tournament_size: int = 2
    elitism: int = 1

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("GA population must be >= 2")
        if self.generations < 1:
            raise ValueError("GA generations must be >= 1")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError("crossover rate must lie in [0, 1]")
        if self.mutation_rate is not None and not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation rate must lie in [0, 1]")
        if self.tournament_size < 1:
            raise ValueError("tournament size must be >= 1")
        if not 0 <= self.elitism <= self.population:
            raise ValueError("elitism must lie in [0, population]")


@dataclass(frozen=True)
class SearchConfig:
    classifier: ClassifierSpec = field(default_factory=ClassifierSpec)
    folds: int = 5
    seed: int = 0
    ga: GAParams = field(default_factory=GAParams)


class _Fitness:
    """Cached CV accuracy of feature subsets for one dataset and partition."""

    def __init__(self, ds: Dataset, cfg: SearchConfig):
        self.X = ds.values
        self.y = ds.class_codes
        self.n_labels = ds.n_classes
        self.spec = cfg.classifier
        self.folds = _k_fold_codes(self.y, cfg.folds, cfg.seed)
        self.cache: dict[tuple[int, ...], float] = {}

    def __call__(self, subset) -> float:
        key = tuple(sorted(int(i) for i in subset))
        if key not in self.cache:
            self.cache[key] = cv_accuracy_arrays(self.spec, self.X[:, list(key)], self.y, self.n_labels, self.folds)
        return self.cache[key]


def _check_k(k, d):
    if not 1 <= k <= d:
        raise ValueError(f"k={k} outside [1, {d}]")


def sequential_forward_select(ds: Dataset, cfg: SearchConfig, k: int) -> SelectionOutcome:
    """Greedy forward selection; fitness ties go to the lower feature index."""
    d = ds.n_features
    _check_k(k, d)
    start = time.perf_counter()
    fitness = _Fitness(ds, cfg)
    selected: list[int] = []
    trace = []
    while len(selected) < k:
        best, best_fit = None, -1.0
        for j in range(d):
            if j in selected:
                continue
            fit = fitness(selected + [j])
            if fit > best_fit:
                best, best_fit = j, fit
        selected.append(best)
        trace.append(best_fit)
    seconds = time.perf_counter() - start
    return SelectionOutcome("sfs", k, selected, order_weights("sfs", selected, d), seconds, trace=tuple(trace))


def sequential_backward_select(ds: Dataset, cfg: SearchConfig, k: int) -> SelectionOutcome:
    """Greedy backward elimination; removal ties drop the higher feature index.

    The survivors are returned in ascending index order.
    """
    d = ds.n_features
    _check_k(k, d)
    start = time.perf_counter()
    fitness = _Fitness(ds, cfg)
    remaining = list(range(d))
    trace = []
    while len(remaining) > k:
        drop, best_fit = None, -1.0
        for j in reversed(remaining):
            fit = fitness([i for i in remaining if i != j])
            if fit > best_fit:
                drop, best_fit = j, fit
        remaining.remove(drop)
        trace.append(best_fit)
    seconds = time.perf_counter() - start
    return SelectionOutcome("sbs", k, remaining, order_weights("sbs", remaining, d), seconds, trace=tuple(trace))


def _repair(mask, k, rng):
    """Force exactly ``k`` bits on (or at least one when ``k`` is None)."""
    on = np.flatnonzero(mask)
    if k is None:
        if on.size == 0:
            mask[rng.integers(mask.size)] = True
        return mask
    if on.size > k:
        mask[rng.choice(on, size=on.size - k, replace=False)] = False
    elif on.size < k:
        off = np.flatnonzero(~mask)
        mask[rng.choice(off, size=k - on.size, replace=False)] = True
    return mask


def genetic_select(ds: Dataset, cfg: SearchConfig, k: Optional[int] = None) -> SelectionOutcome:
    """Binary-mask genetic search.

    Tournament selection, uniform crossover, bit-flip mutation and elitism.
    With a fixed ``k`` every mask is repaired to exactly ``k`` bits; with
    ``k=None`` any nonempty mask is allowed. Masks are ranked by fitness,
    then fewer features, then the lexicographically smaller bit vector.
    The returned outcome holds the best mask ever seen and the best-so-far
    fitness after each generation in ``trace``; a mask has no internal
    order, so the subset is listed by ascending index.
    """
    d = ds.n_features
    if d < 2:
        raise ValueError("genetic search needs at least 2 features")
    if k is not None:
        _check_k(k, d)
    ga = cfg.ga
    mutation = ga.mutation_rate if ga.mutation_rate is not None else 1.0 / d
    start = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    fitness = _Fitness(ds, cfg)

    def key(mask):
        return (-fitness(np.flatnonzero(mask)), int(mask.sum()), tuple(int(b) for b in mask))

    def tournament(population):
        picks = rng.integers(len(population), size=ga.tournament_size)
        return min((population[i] for i in picks), key=key)

    population = [_repair(rng.random(d) < 0.5, k, rng) for _ in range(ga.population)]
    best = min(population, key=key).copy()
    trace = []
    for _ in range(ga.generations):
        ranked = sorted(population, key=key)
        offspring = [m.copy() for m in ranked[: ga.elitism]]
        while len(offspring) < ga.population:
            a = tournament(population).copy()
            b = tournament(population).copy()
            if rng.random() < ga.crossover_rate:
                swap = rng.random(d) < 0.5
                a[swap], b[swap] = b[swap], a[swap]
            for child in (a, b):
                child ^= rng.random(d) < mutation
                offspring.append(_repair(child, k, rng))
        population = offspring[: ga.population]
        champion = min(population, key=key)
        if key(champion) < key(best):
            best = champion.copy()
        trace.append(-key(best)[0])

    selected = [int(i) for i in np.flatnonzero(best)]
    seconds = time.perf_counter() - start
    return SelectionOutcome(
        "ga", len(selected), selected, order_weights("ga", selected, d), seconds, trace=tuple(trace)
    )
