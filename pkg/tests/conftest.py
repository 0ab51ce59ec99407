import numpy as np
import pytest

from featsel.dataset import Dataset, export_csv

# (criterion number, description, passed) filled in by test_acceptance.py
ACCEPTANCE_RESULTS = []


def planted_dataset(seed=0, n=100, d=10, informative=(3, 7), margin=0.3):
    """Binary data whose class is sign(x_a + x_b) with a margin; other columns are noise."""
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < n:
        a, b = rng.uniform(-1, 1, 2)
        if abs(a + b) >= margin:
            pairs.append((a, b))
    pairs = np.array(pairs)
    X = rng.uniform(-1, 1, (n, d))
    X[:, informative[0]] = pairs[:, 0]
    X[:, informative[1]] = pairs[:, 1]
    y = np.where(pairs.sum(axis=1) > 0, "pos", "neg")
    return Dataset.from_arrays(X, y, source_name="planted")


def presplit_fixture(directory, n=100, d=20, n_train=70, seed=1):
    """Write ``toy_train.csv`` / ``toy_test.csv`` (n x d, first 4 features informative)."""
    rng = np.random.default_rng(seed)
    y = rng.integers(0, 2, n)
    X = rng.normal(size=(n, d))
    X[:, :4] += y[:, None] * 1.5
    ds = Dataset.from_arrays(X.round(4), np.where(y, "yes", "no"), source_name="toy")
    train_path = directory / "toy_train.csv"
    test_path = directory / "toy_test.csv"
    export_csv(ds.take_rows(range(n_train)), train_path)
    export_csv(ds.take_rows(range(n_train, n)), test_path)
    return train_path, test_path


@pytest.fixture
def toy():
    return Dataset.from_arrays([[1, 2], [3, 4]], ["a", "b"], source_name="toy")


@pytest.fixture
def planted():
    return planted_dataset()


@pytest.fixture
def presplit(tmp_path):
    return presplit_fixture(tmp_path)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, passed in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {text}")
