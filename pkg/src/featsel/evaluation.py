"""Experiment runner: repeated selection + classification over several subset sizes."""

from __future__ import annotations

import logging
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, TypeVar, Union

from .classifiers import ClassifierSpec, accuracy, train
from .dataset import DataSplit, Dataset, export_arff, export_csv, harmonize_labels, load_csv, reduce_to_features, split_train_test
from .errors import ConfigError
from .methods import METHODS, MethodParams, select_features
from .scores import SelectionOutcome

log = logging.getLogger(__name__)

T = TypeVar("T")
DataSource = Union[str, os.PathLike, Dataset]


def time_section(label: str, thunk: Callable[[], T]) -> tuple[T, float]:
    """Run ``thunk`` and return its result with the elapsed monotonic seconds."""
    start = time.perf_counter()
    result = thunk()
    seconds = time.perf_counter() - start
    log.debug("%s took %.6f s", label, seconds)
    return result, seconds


@dataclass(frozen=True)
class ExperimentConfig:
    method: str
    k_list: tuple[int, ...]
    data: Optional[DataSource] = None
    train: Optional[DataSource] = None
    test: Optional[DataSource] = None
    train_fraction: float = 2.0 / 3.0
    params: MethodParams = field(default_factory=MethodParams)
    classifier: ClassifierSpec = field(default_factory=ClassifierSpec)
    runs: int = 1
    base_seed: int = 0
    jobs: int = 1
    name: Optional[str] = None

    @property
    def presplit(self) -> bool:
        return self.data is None


@dataclass(frozen=True)
class DatasetInfo:
    name: str
    n_train: int
    n_test: int
    n_features: int
    n_classes: int
    feature_names: tuple[str, ...]
    label_set: tuple[str, ...]


@dataclass(frozen=True)
class RunRecord:
    outcome: SelectionOutcome
    train_accuracy: float
    test_accuracy: float

    @property
    def error_rate(self) -> float:
        return 1.0 - self.test_accuracy

    @property
    def k(self) -> int:
        return self.outcome.k

    @property
    def run_index(self) -> int:
        return self.outcome.run_index


@dataclass(frozen=True)
class Averages:
    accuracy: float
    error_rate: float
    seconds: float
    train_accuracy: float


@dataclass
class ExperimentReport:
    dataset: DatasetInfo
    method: str
    classifier: str
    k_list: tuple[int, ...]
    runs: int
    records: list[RunRecord]
    averages: dict[int, Averages]
    splits: list[DataSplit] = field(default_factory=list, repr=False)

    def record(self, run: int, k: int) -> RunRecord:
        for rec in self.records:
            if rec.run_index == run and rec.k == k:
                return rec
        raise KeyError((run, k))

    def series(self, metric: str) -> list[list[float]]:
        """Per-run value sequences over ``k_list`` for accuracy / error / time."""
        getter = {
            "accuracy": lambda r: r.test_accuracy,
            "error": lambda r: r.error_rate,
            "time": lambda r: r.outcome.seconds,
        }[metric]
        return [[getter(self.record(r, k)) for k in self.k_list] for r in range(self.runs)]

    def average_series(self, metric: str) -> list[float]:
        attr = {"accuracy": "accuracy", "error": "error_rate", "time": "seconds"}[metric]
        return [getattr(self.averages[k], attr) for k in self.k_list]


def _load(source: DataSource) -> Dataset:
    return source if isinstance(source, Dataset) else load_csv(source)


_SPLIT_SUFFIX = re.compile(r"[_\-.](train|training|tr)$", re.IGNORECASE)


def _resolve(cfg: ExperimentConfig):
    if cfg.presplit:
        if cfg.train is None or cfg.test is None:
            raise ConfigError("give either a whole dataset or both train and test datasets")
        fixed = harmonize_labels(_load(cfg.train), _load(cfg.test))
        name = cfg.name or _SPLIT_SUFFIX.sub("", fixed.train.source_name)
        return fixed, fixed.train.n_features, fixed.train.feature_names, name
    if cfg.train is not None or cfg.test is not None:
        raise ConfigError("whole-dataset mode and train/test mode are mutually exclusive")
    whole = _load(cfg.data)
    return whole, whole.n_features, whole.feature_names, cfg.name or whole.source_name


def validate_k_list(k_list, d: int) -> tuple[int, ...]:
    ks = tuple(k_list)
    if not ks:
        raise ConfigError("the list of subset sizes is empty")
    if any(not isinstance(k, int) or isinstance(k, bool) for k in ks):
        raise ConfigError(f"subset sizes must be integers: {list(ks)}")
    if len(set(ks)) != len(ks):
        raise ConfigError(f"duplicate subset sizes in {list(ks)}")
    bad = [k for k in ks if not 1 <= k <= d]
    if bad:
        raise ConfigError(f"subset sizes {bad} outside [1, {d}]")
    return ks


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Select, train and evaluate for every run and subset size.

    Run ``r`` uses seed ``base_seed + r``. Whole-dataset mode draws a fresh
    stratified split per run; pre-split mode reuses the fixed files.
    """
    if cfg.method not in METHODS:
        raise ConfigError(f"unknown method {cfg.method!r}")
    if cfg.runs < 1:
        raise ConfigError("runs must be >= 1")
    source, d, feature_names, name = _resolve(cfg)
    k_list = validate_k_list(cfg.k_list, d)

    def one_run(r: int):
        seed = cfg.base_seed + r
        split = source if cfg.presplit else split_train_test(source, cfg.train_fraction, seed)
        try:
            outcomes = select_features(cfg.method, split.train, k_list, cfg.params, cfg.classifier, seed, r)
            records = []
            for k in k_list:
                outcome = outcomes[k]
                reduced_train = reduce_to_features(split.train, outcome.selected)
                reduced_test = reduce_to_features(split.test, outcome.selected)
                model = train(cfg.classifier, reduced_train)
                records.append(RunRecord(outcome, accuracy(model, reduced_train), accuracy(model, reduced_test)))
        except Exception as exc:
            raise RuntimeError(f"run {r} ({cfg.method}): {exc}") from exc
        return split, records

    runs = range(cfg.runs)
    if cfg.jobs > 1 and cfg.runs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(one_run, runs))
    else:
        results = [one_run(r) for r in runs]

    splits = [s for s, _ in results]
    records = [rec for _, recs in results for rec in recs]
    averages = {}
    for k in k_list:
        per_k = [rec for rec in records if rec.k == k]
        averages[k] = Averages(
            accuracy=sum(rec.test_accuracy for rec in per_k) / len(per_k),
            error_rate=sum(rec.error_rate for rec in per_k) / len(per_k),
            seconds=sum(rec.outcome.seconds for rec in per_k) / len(per_k),
            train_accuracy=sum(rec.train_accuracy for rec in per_k) / len(per_k),
        )
    first = splits[0]
    info = DatasetInfo(
        name,
        first.train.n_samples,
        first.test.n_samples,
        d,
        first.train.n_classes,
        tuple(feature_names),
        first.train.label_set,
    )
    return ExperimentReport(info, cfg.method, cfg.classifier.describe(), k_list, cfg.runs, records, averages, splits)


def reduced_file_stem(dataset: str, method: str, k: int, run: int, part: str) -> str:
    return f"{dataset}_{method}_k{k}_run{run}_{part}"


def export_reduced_datasets(report: ExperimentReport, out_dir) -> list[Path]:
    """Write train/test projections of every (run, k) subset as CSV and ARFF."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for rec in report.records:
        split = report.splits[rec.run_index]
        for part, ds in (("train", split.train), ("test", split.test)):
            reduced = reduce_to_features(ds, rec.outcome.selected)
            stem = reduced_file_stem(report.dataset.name, report.method, rec.k, rec.run_index, part)
            export_csv(reduced, out / f"{stem}.csv")
            export_arff(reduced, stem, out / f"{stem}.arff")
            written += [out / f"{stem}.csv", out / f"{stem}.arff"]
    return written
