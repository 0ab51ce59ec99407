"""Dataset container plus CSV/ARFF I/O, splitting and discretization.

The on-disk convention is a CSV file with a header row, numeric feature
columns and the class label in the last column (whatever its header says).
"""

from __future__ import annotations

import csv
import math
import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import CsvParseError, DatasetError, FeatselWarning, MissingValueError

MISSING_MARKERS = ("", "?")


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable table of numeric features and a nominal class column.

    ``label_set`` lists the distinct labels in a fixed order (first
    appearance when loaded from disk); every tie-break that involves labels
    follows this order.
    """

    feature_names: tuple[str, ...]
    values: np.ndarray
    class_labels: tuple[str, ...]
    label_set: tuple[str, ...]
    source_name: str = field(default="dataset")

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim != 2:
            raise DatasetError(f"feature matrix must be 2-D, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "feature_names", tuple(str(n) for n in self.feature_names))
        object.__setattr__(self, "class_labels", tuple(str(c) for c in self.class_labels))
        object.__setattr__(self, "label_set", tuple(str(c) for c in self.label_set))

        n, d = values.shape
        if len(self.feature_names) != d:
            raise DatasetError(
                f"{len(self.feature_names)} feature names for {d} feature columns"
            )
        if len(set(self.feature_names)) != d:
            dupes = sorted({x for x in self.feature_names if self.feature_names.count(x) > 1})
            raise DatasetError(f"duplicate feature names: {', '.join(dupes)}")
        if len(self.class_labels) != n:
            raise DatasetError(f"{len(self.class_labels)} class labels for {n} rows")
        if len(set(self.label_set)) != len(self.label_set):
            raise DatasetError("label set contains duplicates")
        unknown = set(self.class_labels) - set(self.label_set)
        if unknown:
            raise DatasetError(f"labels not in label set: {sorted(unknown)}")
        if not np.all(np.isfinite(values)):
            raise DatasetError("feature matrix contains non-finite values")

    @classmethod
    def from_arrays(cls, X, y, feature_names=None, label_set=None, source_name="dataset"):
        """Build a dataset from a matrix and a label sequence.

        Labels are converted to text. ``label_set`` defaults to the order of
        first appearance in ``y``.
        """
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        labels = tuple(str(v) for v in y)
        if feature_names is None:
            feature_names = [f"f{j + 1}" for j in range(X.shape[1])]
        if label_set is None:
            label_set = tuple(dict.fromkeys(labels))
        return cls(tuple(feature_names), X, labels, tuple(label_set), source_name)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.label_set)

    @property
    def class_codes(self) -> np.ndarray:
        """Class labels as integer indices into ``label_set``."""
        index = {label: i for i, label in enumerate(self.label_set)}
        return np.fromiter((index[c] for c in self.class_labels), dtype=np.intp, count=self.n_samples)

    def take_rows(self, rows) -> "Dataset":
        """Subset of rows (in the given order), same features and label set."""
        rows = np.asarray(rows, dtype=np.intp)
        return Dataset(
            self.feature_names,
            self.values[rows],
            tuple(self.class_labels[i] for i in rows),
            self.label_set,
            self.source_name,
        )

    def with_label_set(self, label_set: Sequence[str]) -> "Dataset":
        return Dataset(self.feature_names, self.values, self.class_labels, tuple(label_set), self.source_name)

    def require_supervised(self):
        if self.n_classes < 2 or len(set(self.class_labels)) < 2:
            raise DatasetError("supervised operation needs at least two distinct class labels")

    def __eq__(self, other):
        # source_name is provenance, not content
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.feature_names == other.feature_names
            and self.class_labels == other.class_labels
            and self.label_set == other.label_set
            and self.values.shape == other.values.shape
            and bool(np.array_equal(self.values, other.values))
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"Dataset({self.source_name!r}, n={self.n_samples}, d={self.n_features}, "
            f"classes={list(self.label_set)})"
        )


@dataclass(frozen=True)
class DataSplit:
    train: Dataset
    test: Dataset
    train_rows: tuple[int, ...] = ()
    test_rows: tuple[int, ...] = ()


def harmonize_labels(train: Dataset, test: Dataset) -> DataSplit:
    """Give two independently loaded datasets one shared label set.

    The train order comes first; labels only seen in test are appended.
    """
    if train.feature_names != test.feature_names:
        raise DatasetError("train and test files have different feature columns")
    labels = tuple(dict.fromkeys(train.label_set + test.label_set))
    return DataSplit(train.with_label_set(labels), test.with_label_set(labels))


# -- CSV --------------------------------------------------------------------


def _parse_cell(text, row, column):
    cell = text.strip()
    if cell in MISSING_MARKERS:
        raise MissingValueError(f"missing value at row {row}, column {column!r}")
    try:
        value = float(cell)
    except ValueError:
        raise CsvParseError(
            f"non-numeric value {cell!r} at row {row}, column {column!r}", row=row, column=column
        ) from None
    if not math.isfinite(value):
        raise CsvParseError(
            f"non-finite value {cell!r} at row {row}, column {column!r}", row=row, column=column
        )
    return value


def read_csv_rows(path) -> list[list[str]]:
    """Read all rows of a CSV file (RFC-4180 quoting), dropping blank lines."""
    with open(path, newline="", encoding="utf-8") as fh:
        return [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]


def dataset_from_rows(rows: list[list[str]], source_name="dataset") -> Dataset:
    """Validate header + data rows (class column last) into a Dataset."""
    if len(rows) < 3:
        raise DatasetError("need a header row and at least 2 data rows")
    header = [h.strip() for h in rows[0]]
    width = len(header)
    if width < 2:
        raise DatasetError("need at least one feature column and a class column")
    feature_names = header[:-1]
    if len(set(feature_names)) != len(feature_names):
        dupes = sorted({x for x in feature_names if feature_names.count(x) > 1})
        raise DatasetError(f"duplicate feature names: {', '.join(dupes)}")

    values = np.empty((len(rows) - 1, width - 1))
    labels = []
    for i, row in enumerate(rows[1:], start=1):
        if len(row) < width:
            raise MissingValueError(f"row {i} has {len(row)} cells, expected {width}")
        if len(row) > width:
            raise DatasetError(f"row {i} has {len(row)} cells, expected {width}")
        for j, name in enumerate(feature_names):
            values[i - 1, j] = _parse_cell(row[j], i, name)
        label = row[-1].strip()
        if label in MISSING_MARKERS:
            raise MissingValueError(f"missing class label at row {i}")
        labels.append(label)
    return Dataset(tuple(feature_names), values, tuple(labels), tuple(dict.fromkeys(labels)), source_name)


def load_csv(path) -> Dataset:
    """Load a dataset in the toolkit CSV convention.

    Raises:
        CsvParseError: a feature cell is not a finite number.
        MissingValueError: a cell is empty, ``?`` or the row is short.
        DatasetError: too few rows/columns or duplicate feature names.
    """
    return dataset_from_rows(read_csv_rows(path), source_name=Path(path).stem)


def format_number(value: float) -> str:
    """Shortest text that parses back to the same float (integers without ``.0``)."""
    value = float(value)
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}", str(path)) from exc


def csv_text(ds: Dataset) -> str:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(ds.feature_names) + ["class"])
    for row, label in zip(ds.values, ds.class_labels):
        writer.writerow([format_number(v) for v in row] + [label])
    return buf.getvalue()


def export_csv(ds: Dataset, path) -> None:
    _write_text(path, csv_text(ds))


# -- ARFF -------------------------------------------------------------------

_ARFF_SPECIAL = set(" \t,{}'\"%\\")


def arff_quote(name: str) -> str:
    """Quote an ARFF identifier when it contains spaces or reserved characters."""
    if name and not (_ARFF_SPECIAL & set(name)) and not name.startswith("@"):
        return name
    escaped = name.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


def arff_text(ds: Dataset, relation_name: str) -> str:
    if not relation_name:
        raise ValueError("relation name must be nonempty")
    lines = [f"@relation {arff_quote(relation_name)}"]
    lines += [f"@attribute {arff_quote(name)} numeric" for name in ds.feature_names]
    lines.append("@attribute class {" + ",".join(arff_quote(c) for c in ds.label_set) + "}")
    lines.append("@data")
    for row, label in zip(ds.values, ds.class_labels):
        lines.append(",".join([format_number(v) for v in row] + [arff_quote(label)]))
    return "\n".join(lines) + "\n"


def export_arff(ds: Dataset, relation_name: str, path) -> None:
    _write_text(path, arff_text(ds, relation_name))


# -- splitting --------------------------------------------------------------


def _allocate(class_sizes, total):
    """Largest-remainder allocation of ``total`` train slots across classes."""
    fraction = total / sum(class_sizes)
    counts = []
    for size in class_sizes:
        counts.append(1 if size == 1 else int(math.floor(size * fraction)))
    remainders = [size * fraction - math.floor(size * fraction) for size in class_sizes]
    order = sorted(range(len(class_sizes)), key=lambda c: (-remainders[c], c))
    missing = total - sum(counts)
    for c in order:
        if missing <= 0:
            break
        if class_sizes[c] > 1 and counts[c] < class_sizes[c]:
            counts[c] += 1
            missing -= 1
    for c in reversed(order):
        if missing >= 0:
            break
        if class_sizes[c] > 1 and counts[c] > 0:
            counts[c] -= 1
            missing += 1
    return counts


def split_train_test(ds: Dataset, train_fraction: float, seed: int) -> DataSplit:
    """Stratified random train/test split.

    The train set gets floor(n * train_fraction) rows spread over classes by
    largest remainder. Singleton classes go to train with a warning. Rows in
    each part keep their original relative order.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train fraction must lie in (0, 1), got {train_fraction}")
    n = ds.n_samples
    total = int(math.floor(n * train_fraction))
    if total < 1 or n - total < 1:
        raise ValueError(f"fraction {train_fraction} leaves an empty part for n={n}")

    rng = np.random.default_rng(seed)
    codes = ds.class_codes
    members = [np.flatnonzero(codes == c) for c in range(ds.n_classes)]
    sizes = [len(m) for m in members]
    present = [c for c in range(ds.n_classes) if sizes[c] > 0]
    for c in present:
        if sizes[c] == 1:
            warnings.warn(
                f"class {ds.label_set[c]!r} has a single sample; placed in the train set",
                FeatselWarning,
                stacklevel=2,
            )
    counts = _allocate([sizes[c] for c in present], total)

    train_rows = []
    for c, count in zip(present, counts):
        shuffled = rng.permutation(members[c])
        train_rows.extend(shuffled[:count].tolist())
    train_rows = sorted(train_rows)
    chosen = set(train_rows)
    test_rows = [i for i in range(n) if i not in chosen]
    return DataSplit(ds.take_rows(train_rows), ds.take_rows(test_rows), tuple(train_rows), tuple(test_rows))


def k_fold_partition(ds: Dataset, k: int, seed: int) -> list[np.ndarray]:
    """Stratified k-fold index sets.

    Rows are shuffled within each class, the per-class lists are chained in
    label-set order and dealt round-robin, so fold sizes differ by at most one.
    """
    return _k_fold_codes(ds.class_codes, k, seed)


def _k_fold_codes(codes, k, seed):
    n = len(codes)
    if k < 2:
        raise ValueError(f"need at least 2 folds, got {k}")
    if k > n:
        raise ValueError(f"{k} folds requested for {n} samples")
    rng = np.random.default_rng(seed)
    order = []
    for c in np.unique(codes):
        order.extend(rng.permutation(np.flatnonzero(codes == c)).tolist())
    order = np.asarray(order, dtype=np.intp)
    return [np.sort(order[f::k]) for f in range(k)]


def reduce_to_features(ds: Dataset, indices: Sequence[int]) -> Dataset:
    """Project onto the listed feature columns, in the listed order."""
    idx = [int(i) for i in indices]
    if not idx:
        raise ValueError("feature index list is empty")
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate feature indices in {idx}")
    bad = [i for i in idx if not 0 <= i < ds.n_features]
    if bad:
        raise ValueError(f"feature indices out of range [0, {ds.n_features}): {bad}")
    return Dataset(
        tuple(ds.feature_names[i] for i in idx),
        ds.values[:, idx],
        ds.class_labels,
        ds.label_set,
        ds.source_name,
    )


# -- discretization ---------------------------------------------------------

DEFAULT_BINS = 10


def discretize_column(column: np.ndarray, bins: int = DEFAULT_BINS) -> np.ndarray:
    column = np.asarray(column, dtype=float)
    distinct = np.unique(column)
    if len(distinct) < bins:
        return np.searchsorted(distinct, column).astype(float)
    lo, hi = distinct[0], distinct[-1]
    scaled = (column - lo) / (hi - lo) * bins
    # values sitting on an edge must not drop a bin through rounding
    codes = np.floor(scaled + 1e-9)
    return np.clip(codes, 0, bins - 1)


def discretize_equal_width(ds: Dataset, bins: int = DEFAULT_BINS) -> Dataset:
    """Integer-code every feature into equal-width bins.

    A feature with fewer than ``bins`` distinct values is coded by the rank
    of its value instead; a constant feature becomes all zeros.
    """
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    coded = np.column_stack([discretize_column(ds.values[:, j], bins) for j in range(ds.n_features)])
    return Dataset(ds.feature_names, coded, ds.class_labels, ds.label_set, ds.source_name)


def is_discretized(ds: Dataset) -> bool:
    v = ds.values
    return bool(np.all(v >= 0) and np.all(v == np.floor(v)))


def dataset_name(path) -> str:
    return os.path.splitext(os.path.basename(str(path)))[0]
