import os

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from featsel.dataset import (
    Dataset,
    arff_text,
    csv_text,
    discretize_column,
    discretize_equal_width,
    export_arff,
    export_csv,
    k_fold_partition,
    load_csv,
    reduce_to_features,
    split_train_test,
)
from featsel.errors import CsvParseError, DatasetError, FeatselWarning, MissingValueError


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_csv_basic(tmp_path):
    ds = load_csv(write(tmp_path, "f1,f2,class\n1,2,a\n3,4,b\n"))
    assert ds.n_samples == 2 and ds.n_features == 2
    assert ds.label_set == ("a", "b")
    assert ds.feature_names == ("f1", "f2")
    assert ds.values.tolist() == [[1.0, 2.0], [3.0, 4.0]]
    assert ds.source_name == "d"


def test_load_csv_label_set_first_appearance(tmp_path):
    ds = load_csv(write(tmp_path, "x,y\n1,b\n2,a\n3,b\n"))
    assert ds.label_set == ("b", "a")


def test_load_csv_quoted_labels(tmp_path):
    ds = load_csv(write(tmp_path, 'x,label\n1,"a, b"\n2,c\n'))
    assert ds.class_labels == ("a, b", "c")


def test_parse_error_names_row_and_column(tmp_path):
    with pytest.raises(CsvParseError) as err:
        load_csv(write(tmp_path, "f1,f2,class\nx,2,a\n3,4,b\n"))
    assert err.value.row == 1 and err.value.column == "f1"
    assert "row 1" in str(err.value) and "'f1'" in str(err.value)


@pytest.mark.parametrize("body", ["1,,a\n3,4,b\n", "1,?,a\n3,4,b\n", "1,2\n3,4,b\n", "1,2,\n3,4,b\n"])
def test_missing_values_rejected(tmp_path, body):
    with pytest.raises(MissingValueError):
        load_csv(write(tmp_path, "f1,f2,class\n" + body))


@pytest.mark.parametrize(
    "text",
    ["f1,class\n1,a\n", "class\na\nb\n", "f,f,class\n1,2,a\n3,4,b\n"],
    ids=["one-row", "one-column", "duplicate-name"],
)
def test_structural_errors(tmp_path, text):
    with pytest.raises(DatasetError):
        load_csv(write(tmp_path, text))


def test_non_finite_rejected(tmp_path):
    with pytest.raises(CsvParseError):
        load_csv(write(tmp_path, "f1,class\nnan,a\n1,b\n"))


def test_export_csv_exact_text(toy, tmp_path):
    p = tmp_path / "out.csv"
    export_csv(toy, p)
    assert p.read_bytes() == b"f1,f2,class\n1,2,a\n3,4,b\n"


def test_export_csv_shortest_floats(tmp_path):
    ds = Dataset.from_arrays([[0.1, -2.5e-7], [1e20, 3.0]], ["a", "b"])
    assert csv_text(ds).splitlines()[1:] == ["0.1,-2.5e-07,a", "1e+20,3,b"]


def test_export_csv_io_error(toy, tmp_path):
    locked = tmp_path / "locked"
    locked.mkdir()
    os.chmod(locked, 0o500)
    try:
        if os.access(locked, os.W_OK):
            pytest.skip("running with privileges that ignore directory permissions")
        with pytest.raises(OSError, match="locked"):
            export_csv(toy, locked / "x.csv")
    finally:
        os.chmod(locked, 0o700)


def test_export_csv_missing_directory(toy, tmp_path):
    with pytest.raises(OSError, match="nope"):
        export_csv(toy, tmp_path / "nope" / "x.csv")


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    ds = Dataset.from_arrays(rng.normal(size=(12, 4)) * 1e3, rng.choice(["x", "y z", "w,v"], 12))
    p = tmp_path / "rt.csv"
    export_csv(ds, p)
    first = load_csv(p)
    assert first == ds
    export_csv(first, p)
    assert load_csv(p) == first


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(1, 4), st.data())
def test_csv_round_trip_property(tmp_path_factory, n, d, data):
    values = data.draw(st.lists(st.lists(finite, min_size=d, max_size=d), min_size=n, max_size=n))
    labels = data.draw(st.lists(st.sampled_from(["a", "b", "c"]), min_size=n, max_size=n))
    ds = Dataset.from_arrays(values, labels)
    p = tmp_path_factory.mktemp("rt") / "x.csv"
    export_csv(ds, p)
    assert load_csv(p) == ds


def test_export_arff_layout(toy, tmp_path):
    p = tmp_path / "toy.arff"
    export_arff(toy, "toy", p)
    assert p.read_text() == (
        "@relation toy\n@attribute f1 numeric\n@attribute f2 numeric\n"
        "@attribute class {a,b}\n@data\n1,2,a\n3,4,b\n"
    )


def test_arff_label_order_preserved():
    ds = Dataset.from_arrays([[1], [2], [3]], ["z", "a", "m"])
    assert "@attribute class {z,a,m}" in arff_text(ds, "r")


def test_arff_quotes_names_with_spaces():
    ds = Dataset.from_arrays([[1, 2], [3, 4]], ["a", "b"], feature_names=["my feat", "it's"])
    text = arff_text(ds, "rel")
    assert "@attribute 'my feat' numeric" in text
    assert "@attribute 'it\\'s' numeric" in text


def test_arff_empty_relation_rejected(toy):
    with pytest.raises(ValueError):
        arff_text(toy, "")


def balanced(n_per_class=5, classes=("a", "b")):
    labels = [c for c in classes for _ in range(n_per_class)]
    return Dataset.from_arrays(np.arange(len(labels), dtype=float)[:, None], labels)


def test_split_counts():
    split = split_train_test(balanced(), 0.8, 7)
    assert split.train.n_samples == 8 and split.test.n_samples == 2
    assert split.train.class_labels.count("a") == 4 and split.train.class_labels.count("b") == 4


def test_split_deterministic_and_partitions():
    ds = balanced(7, ("a", "b", "c"))
    s1 = split_train_test(ds, 0.6, 11)
    s2 = split_train_test(ds, 0.6, 11)
    assert s1.train_rows == s2.train_rows and s1.test_rows == s2.test_rows
    assert sorted(s1.train_rows + s1.test_rows) == list(range(ds.n_samples))
    assert s1.train.feature_names == s1.test.feature_names
    assert s1.train.label_set == s1.test.label_set == ds.label_set


@pytest.mark.parametrize("fraction", [0.0, 1.0, -0.2, 1.5])
def test_split_fraction_range(fraction):
    with pytest.raises(ValueError):
        split_train_test(balanced(), fraction, 0)


def test_split_singleton_class_goes_to_train():
    ds = Dataset.from_arrays(np.arange(7)[:, None], ["a"] * 3 + ["b"] * 3 + ["c"])
    with pytest.warns(FeatselWarning):
        split = split_train_test(ds, 0.5, 1)
    assert "c" in split.train.class_labels and "c" not in split.test.class_labels


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(2, 15), min_size=2, max_size=4), st.floats(0.2, 0.8), st.integers(0, 10**6))
def test_split_stratification_property(sizes, fraction, seed):
    labels = [f"c{i}" for i, s in enumerate(sizes) for _ in range(s)]
    assume(1 <= int(len(labels) * fraction) < len(labels))
    ds = Dataset.from_arrays(np.zeros((len(labels), 1)), labels)
    split = split_train_test(ds, fraction, seed)
    for i, size in enumerate(sizes):
        assert abs(split.train.class_labels.count(f"c{i}") - size * fraction) <= 1.0 + 1e-9


def test_kfold_sizes():
    folds = k_fold_partition(balanced(), 5, 0)
    assert [len(f) for f in folds] == [2, 2, 2, 2, 2]
    ds7 = Dataset.from_arrays(np.zeros((7, 1)), list("aaaabbb"))
    assert sorted(len(f) for f in k_fold_partition(ds7, 3, 0)) == [2, 2, 3]


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 30), st.integers(2, 6), st.integers(0, 1000))
def test_kfold_partition_property(n, k, seed):
    if k > n:
        return
    ds = Dataset.from_arrays(np.zeros((n, 1)), [("a", "b", "c")[i % 3] for i in range(n)])
    folds = k_fold_partition(ds, k, seed)
    allidx = np.concatenate(folds)
    assert sorted(allidx.tolist()) == list(range(n))
    sizes = [len(f) for f in folds]
    assert max(sizes) - min(sizes) <= 1
    again = k_fold_partition(ds, k, seed)
    assert all(np.array_equal(a, b) for a, b in zip(folds, again))


def test_kfold_too_many_folds():
    with pytest.raises(ValueError):
        k_fold_partition(balanced(), 11, 0)


def test_reduce_projection():
    ds = Dataset.from_arrays(np.arange(8).reshape(2, 4), ["a", "b"])
    red = reduce_to_features(ds, [2, 0])
    assert red.feature_names == ("f3", "f1")
    assert red.values.tolist() == [[2, 0], [6, 4]]
    assert reduce_to_features(ds, [0, 1, 2, 3]) == ds


@pytest.mark.parametrize("idx", [[4], [1, 1], [], [-1]])
def test_reduce_errors(idx):
    ds = Dataset.from_arrays(np.arange(8).reshape(2, 4), ["a", "b"])
    with pytest.raises(ValueError):
        reduce_to_features(ds, idx)


def test_reduce_inverse_permutation():
    rng = np.random.default_rng(0)
    ds = Dataset.from_arrays(rng.normal(size=(5, 6)), list("ababa"))
    perm = rng.permutation(6)
    inverse = np.argsort(perm)
    assert reduce_to_features(reduce_to_features(ds, perm), inverse) == ds


def test_discretize_examples():
    assert discretize_column([0, 1, 2, 3], 2).tolist() == [0, 0, 1, 1]
    assert discretize_column([5, 5, 5], 10).tolist() == [0, 0, 0]
    assert discretize_column([0.0, 0.24, 0.5, 1.0], 4).tolist() == [0, 0, 2, 3]


def test_discretize_few_distinct_values_by_rank():
    assert discretize_column([7.5, -1, 7.5, 3], 10).tolist() == [2, 0, 2, 1]


def test_discretize_rejects_one_bin(toy):
    with pytest.raises(ValueError):
        discretize_equal_width(toy, 1)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=40),
    st.integers(2, 12),
    st.floats(0.01, 100),
    st.floats(-100, 100),
)
def test_discretize_codes_in_range_and_affine_invariant(col, bins, a, b):
    col = np.array(col)
    codes = discretize_column(col, bins)
    assert codes.min() >= 0 and codes.max() < bins
    assert np.array_equal(codes, discretize_column(a * col + b, bins)) or _near_edge(col, bins)


def _near_edge(col, bins):
    # affine maps may move a value sitting within rounding of a bin edge
    lo, hi = col.min(), col.max()
    if hi == lo:
        return False
    t = (col - lo) / (hi - lo) * bins
    return bool(np.any(np.abs(t - np.round(t)) < 1e-6))
