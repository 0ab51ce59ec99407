import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from featsel.dataset import Dataset, discretize_equal_width
from featsel.errors import FeatselWarning
from featsel.filters import (
    fisher_score,
    gain_ratio,
    gini_index_score,
    info_gain,
    laplacian_score,
    mrmr_select,
    relieff,
    symmetrical_uncertainty,
    term_variance,
)
from featsel.scores import FeatureScores, rank_top_k

DISCRETE_SCORERS = {
    "info-gain": (info_gain, oracles.info_gain),
    "gain-ratio": (gain_ratio, oracles.gain_ratio),
    "su": (symmetrical_uncertainty, oracles.su),
    "gini": (gini_index_score, oracles.gini_score),
}


def ds_of(columns, labels):
    return Dataset.from_arrays(np.array(columns, dtype=float).T, labels)


def example_ds():
    # f1 = [0,0,1,1] against class [a,b,b,b]; f2 constant
    return ds_of([[0, 0, 1, 1], [5, 5, 5, 5]], list("abbb"))


def test_info_gain_examples():
    bal = ds_of([[0, 0, 1, 1]], list("aabb"))
    assert info_gain(bal).scores[0] == pytest.approx(1.0, abs=1e-12)
    s = info_gain(example_ds()).scores
    assert s[0] == pytest.approx(0.8113 - 0.5, abs=1e-4)
    assert s[0] == pytest.approx(0.31127812445913283, abs=1e-12)
    assert s[1] == 0.0


def test_gain_ratio_examples():
    assert gain_ratio(ds_of([[0, 0, 1, 1]], list("aabb"))).scores[0] == pytest.approx(1.0)
    s = gain_ratio(example_ds()).scores
    assert s[0] == pytest.approx(0.3113, abs=1e-4)
    assert s[1] == 0.0


def test_su_examples():
    assert symmetrical_uncertainty(ds_of([[0, 0, 1, 1]], list("aabb"))).scores[0] == pytest.approx(1.0)
    s = symmetrical_uncertainty(example_ds()).scores
    assert s[0] == pytest.approx(0.3437, abs=1e-4)
    assert s[0] == pytest.approx(0.34371101848545077, abs=1e-12)
    assert s[1] == 0.0


def test_gini_examples():
    assert gini_index_score(ds_of([[0, 0, 1, 1]], list("aabb"))).scores[0] == pytest.approx(0.5)
    s = gini_index_score(example_ds()).scores
    assert s[0] == pytest.approx(0.125, abs=1e-12)
    assert s[1] == 0.0


def test_fisher_examples():
    ds = ds_of([[1, 2, 3, 4], [7, 7, 7, 7], [1, 1, 3, 3]], list("aabb"))
    s = fisher_score(ds).scores
    assert s[0] == pytest.approx(4.0, rel=1e-9)
    assert s[1] == 0.0
    assert s[2] == pytest.approx(4.0 / 1e-12, rel=1e-6) and np.isfinite(s[2])


def test_variance_examples():
    s = term_variance(ds_of([[1, 2, 3, 4], [3, 3, 3, 3], [1, 2, 3, 4]], list("aabb"))).scores
    assert s.tolist() == [1.25, 0.0, 1.25]


def test_entropy_scorers_reject_raw_values():
    ds = ds_of([[0.5, 1.5, 2.0, 3.0]], list("aabb"))
    for scorer, _ in DISCRETE_SCORERS.values():
        with pytest.raises(ValueError):
            scorer(ds)


def test_relieff_desk_example():
    ds = ds_of([[0, 0.1, 0.9, 1.0], [3, 3, 3, 3]], list("aabb"))
    s = relieff(ds, k_neighbors=1).scores
    assert s[0] == pytest.approx(0.75, abs=1e-9)
    assert s[1] == 0.0


def test_relieff_duplicated_feature():
    rng = np.random.default_rng(0)
    x = rng.normal(size=20)
    y = np.where(x + 0.3 * rng.normal(size=20) > 0, "p", "n")
    single = relieff(Dataset.from_arrays(x[:, None], y), k_neighbors=3).scores
    double = relieff(Dataset.from_arrays(np.column_stack([x, x]), y), k_neighbors=3).scores
    assert double == pytest.approx([single[0], single[0]], abs=1e-12)


def test_relieff_small_class_warns():
    ds = ds_of([[0, 1, 2, 3, 4]], list("aaaab"))
    with pytest.warns(FeatselWarning):
        relieff(ds, k_neighbors=2)


def test_relieff_sampling_requires_seed_and_is_deterministic():
    rng = np.random.default_rng(1)
    ds = Dataset.from_arrays(rng.normal(size=(30, 4)), rng.choice(["a", "b"], 30))
    with pytest.raises(ValueError):
        relieff(ds, m=10)
    a = relieff(ds, m=10, seed=3).scores
    b = relieff(ds, m=10, seed=3).scores
    assert np.array_equal(a, b)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_relieff_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    n, d = rng.integers(6, 25), rng.integers(1, 5)
    X = rng.normal(size=(n, d))
    y = [("a", "b", "c")[i % 3] for i in rng.permutation(n)]
    k = int(rng.integers(1, 4))
    with np.errstate(all="ignore"):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", FeatselWarning)
            got = relieff(Dataset.from_arrays(X, y), k_neighbors=k).scores
    assert got == pytest.approx(oracles.relieff(X.tolist(), y, k), abs=1e-9)


def two_cluster():
    # rows 0-2 near the origin, rows 3-5 far away along f1; f2 is noise
    return Dataset.from_arrays(
        [[0.0, 0.3], [0.1, 0.9], [0.05, 0.1], [1.0, 0.8], [0.9, 0.2], [0.95, 0.5]],
        list("aaabbb"),
    )


def test_laplacian_two_clusters():
    ds = two_cluster()
    got = laplacian_score(ds, k_neighbors=2, bandwidth=1.0).scores
    expected = oracles.laplacian(ds.values.tolist(), 2, 1.0)
    assert got == pytest.approx(expected, abs=1e-12)
    assert got[0] > got[1]


def test_laplacian_constant_and_duplicate():
    rng = np.random.default_rng(2)
    x = rng.normal(size=12)
    ds = Dataset.from_arrays(np.column_stack([x, np.full(12, 4.0), x, rng.normal(size=12)]), ["a"] * 12)
    s = laplacian_score(ds, 3, 0.5).scores
    assert s[1] == 0.0
    assert s[0] == s[2]


def test_laplacian_identical_rows_warns():
    ds = Dataset.from_arrays(np.ones((5, 2)), list("aabba"))
    with pytest.warns(FeatselWarning):
        assert laplacian_score(ds, 2).scores.tolist() == [0.0, 0.0]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_laplacian_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    n, d = int(rng.integers(5, 16)), int(rng.integers(1, 5))
    X = rng.normal(size=(n, d))
    k = int(rng.integers(1, n))
    t = float(rng.uniform(0.1, 3))
    got = laplacian_score(Dataset.from_arrays(X, ["a"] * n), k, t).scores
    assert got == pytest.approx(oracles.laplacian(X.tolist(), k, t), abs=1e-9)


def test_mrmr_tie_break_fixture():
    cls = [0, 0, 0, 0, 1, 1, 1, 1]
    f3 = [0, 0, 0, 1, 1, 1, 1, 0]
    ds = ds_of([cls, cls, f3], list("aaaabbbb"))
    picks, trace = mrmr_select(ds, 2)
    assert picks == [0, 1]
    assert trace[0] == pytest.approx(1.0)
    assert trace[1] == pytest.approx(0.0, abs=1e-12)
    assert oracles.mutual_info(f3, cls) == pytest.approx(0.1887, abs=1e-4)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_mrmr_first_pick_and_permutation(seed):
    rng = np.random.default_rng(seed)
    X = rng.integers(0, 3, size=(20, 5)).astype(float)
    y = rng.choice(["a", "b"], 20)
    y[:2] = ["a", "b"]
    ds = Dataset.from_arrays(X, y)
    picks, _ = mrmr_select(ds, 5)
    assert sorted(picks) == list(range(5))
    rel = [oracles.mutual_info(X[:, j].tolist(), list(y)) for j in range(5)]
    assert rel[picks[0]] == pytest.approx(max(rel), abs=1e-12)
    assert picks[0] == min(j for j in range(5) if rel[j] >= max(rel) - 1e-12)
    assert mrmr_select(ds, 2)[0] == picks[:2]


def test_mrmr_k_range():
    with pytest.raises(ValueError):
        mrmr_select(example_ds(), 3)


def test_rank_top_k():
    assert rank_top_k([0.2, 0.9, 0.9], 2) == [1, 2]
    assert sorted(rank_top_k([3, 1, 2, 5], 4)) == [0, 1, 2, 3]
    assert rank_top_k(info_gain(example_ds()), 1) == [0]
    with pytest.raises(ValueError):
        rank_top_k([1.0, 2.0], 0)
    with pytest.raises(ValueError):
        rank_top_k([1.0, 2.0], 3)


def test_feature_scores_finite():
    with pytest.raises(ValueError):
        FeatureScores("x", [1.0, np.nan])


@pytest.mark.parametrize("name", sorted(DISCRETE_SCORERS))
@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_discrete_scorers_match_oracle(name, seed):
    scorer, oracle = DISCRETE_SCORERS[name]
    rng = np.random.default_rng(seed)
    n, d = int(rng.integers(4, 31)), int(rng.integers(1, 9))
    X = rng.integers(0, rng.integers(1, 5), size=(n, d)).astype(float)
    y = rng.choice(["a", "b", "c"][: rng.integers(2, 4)], n)
    y[:2] = ["a", "b"]
    got = scorer(Dataset.from_arrays(X, y)).scores
    expected = [oracle(X[:, j].tolist(), list(y)) for j in range(d)]
    assert got == pytest.approx(expected, abs=1e-9)


def test_discretized_pipeline_affine_invariance():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(30, 4))
    y = rng.choice(["a", "b"], 30)
    base = discretize_equal_width(Dataset.from_arrays(X, y), 5)
    moved = discretize_equal_width(Dataset.from_arrays(3.5 * X - 2, y), 5)
    for scorer, _ in DISCRETE_SCORERS.values():
        assert scorer(base).scores == pytest.approx(scorer(moved).scores, abs=1e-12)
