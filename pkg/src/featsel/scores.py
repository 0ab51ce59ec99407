"""Result types shared by the selection approaches."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class FeatureScores:
    """Per-feature weights from one method; larger is better."""

    method_name: str
    scores: np.ndarray
    higher_is_better: bool = True
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        scores = np.array(self.scores, dtype=float, copy=True)
        if scores.ndim != 1:
            raise ValueError("scores must be a vector")
        if not np.all(np.isfinite(scores)):
            raise ValueError(f"{self.method_name}: non-finite feature score")
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)

    def __len__(self):
        return len(self.scores)


@dataclass(frozen=True)
class SelectionOutcome:
    method_name: str
    k: int
    selected: tuple[int, ...]
    weights: FeatureScores
    seconds: float = 0.0
    run_index: int = 0
    trace: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "selected", tuple(int(i) for i in self.selected))
        if len(set(self.selected)) != len(self.selected):
            raise ValueError("selected indices must be distinct")
        if self.seconds < 0:
            raise ValueError("selection time must be non-negative")


def rank_top_k(scores, k: int) -> list[int]:
    """Indices of the ``k`` largest scores, best first; ties go to the lower index."""
    values = scores.scores if isinstance(scores, FeatureScores) else np.asarray(scores, dtype=float)
    d = len(values)
    if not 1 <= k <= d:
        raise ValueError(f"k={k} outside [1, {d}]")
    order = np.argsort(-values, kind="stable")
    return [int(i) for i in order[:k]]


def order_weights(method_name: str, order, d: int) -> FeatureScores:
    """Weights from a selection order: first pick gets ``d``, next ``d - 1``, unselected 0."""
    weights = np.zeros(d)
    for position, j in enumerate(order):
        weights[j] = d - position
    return FeatureScores(method_name, weights)
