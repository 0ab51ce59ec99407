"""Friedman test with the Iman-Davenport F correction.

Critical values come from ``featsel.special`` rather than printed tables, so
any number of methods, datasets and significance levels is supported.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .special import chi2_critical_value, f_critical_value

DEFAULT_ALPHAS = (0.01, 0.05, 0.1)


@dataclass(frozen=True)
class ResultMatrix:
    """Rows are datasets, columns are methods (e.g. error rates)."""

    method_names: tuple[str, ...]
    dataset_names: tuple[str, ...]
    values: np.ndarray
    lower_is_better: bool = True

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "method_names", tuple(self.method_names))
        object.__setattr__(self, "dataset_names", tuple(self.dataset_names))
        if values.ndim != 2:
            raise ValueError("result matrix must be 2-D")
        n, k = values.shape
        if k < 2 or n < 2:
            raise ValueError(f"need at least 2 methods and 2 datasets, got {k} and {n}")
        if len(self.method_names) != k or len(self.dataset_names) != n:
            raise ValueError("row/column names do not match the matrix shape")
        if not np.all(np.isfinite(values)):
            raise ValueError("result matrix contains non-finite entries")

    @property
    def n_datasets(self) -> int:
        return self.values.shape[0]

    @property
    def n_methods(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class AlphaVerdict:
    alpha: float
    f_critical: float
    chi_critical: float
    significant: bool


@dataclass(frozen=True)
class FriedmanReport:
    method_names: tuple[str, ...]
    n_datasets: int
    average_ranks: np.ndarray
    chi_square: float
    iman_davenport_f: float
    dof1: int
    dof2: int
    verdicts: tuple[AlphaVerdict, ...] = field(default_factory=tuple)
    best_method: int = 0

    @property
    def f_is_infinite(self) -> bool:
        return math.isinf(self.iman_davenport_f)


def rank_row(values: Sequence[float], lower_is_better: bool = True) -> np.ndarray:
    """Rank 1 for the best value; tied values share the mean of their ranks."""
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("cannot rank non-finite values")
    keys = values if lower_is_better else -values
    order = np.argsort(keys, kind="stable")
    ranks = np.empty(len(values))
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and keys[order[j + 1]] == keys[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def friedman_chi_square(m: ResultMatrix) -> tuple[float, np.ndarray]:
    """Friedman statistic and the average rank of each method."""
    ranks = np.array([rank_row(row, m.lower_is_better) for row in m.values])
    n, k = ranks.shape
    avg = ranks.mean(axis=0)
    chi = 12.0 * n / (k * (k + 1)) * (float(np.sum(avg**2)) - k * (k + 1) ** 2 / 4.0)
    return max(chi, 0.0), avg


def iman_davenport_f(chi_square: float, n: int, k: int) -> float:
    """F-distributed correction of the Friedman statistic; inf on perfect separation."""
    upper = n * (k - 1)
    slack = 1e-9 * upper
    if chi_square < 0 or chi_square > upper + slack:
        raise ArithmeticError(f"chi-square {chi_square} outside [0, {upper}]")
    denom = upper - chi_square
    if denom <= slack:
        return math.inf
    return (n - 1) * chi_square / denom


def significance_table(f_value: float, k: int, n: int, alphas=DEFAULT_ALPHAS) -> tuple[AlphaVerdict, ...]:
    """Compare an Iman-Davenport F against F(k-1, (k-1)(n-1)) at each alpha."""
    dof1, dof2 = k - 1, (k - 1) * (n - 1)
    verdicts = []
    for alpha in alphas:
        f_crit = f_critical_value(dof1, dof2, alpha)
        verdicts.append(
            AlphaVerdict(float(alpha), f_crit, chi2_critical_value(dof1, alpha), bool(f_value > f_crit))
        )
    return tuple(verdicts)


def friedman_test(m: ResultMatrix, alphas=DEFAULT_ALPHAS) -> FriedmanReport:
    chi, avg = friedman_chi_square(m)
    n, k = m.n_datasets, m.n_methods
    f_value = iman_davenport_f(chi, n, k)
    best = int(np.argmin(avg))
    return FriedmanReport(
        m.method_names, n, avg, chi, f_value, k - 1, (k - 1) * (n - 1), significance_table(f_value, k, n, alphas), best
    )


def load_result_matrix(path, lower_is_better: bool = True) -> ResultMatrix:
    """Read ``dataset,<method1>,...,<methodK>`` CSV, one row per dataset."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if len(rows) < 3:
        raise ValueError(f"{path}: need a header and at least 2 dataset rows")
    header = [h.strip() for h in rows[0]]
    methods = header[1:]
    names, values = [], []
    for i, row in enumerate(rows[1:], start=1):
        if len(row) != len(header):
            raise ValueError(f"{path}: row {i} has {len(row)} cells, expected {len(header)}")
        names.append(row[0].strip())
        try:
            values.append([float(c) for c in row[1:]])
        except ValueError:
            raise ValueError(f"{path}: non-numeric entry in row {i}") from None
    return ResultMatrix(tuple(methods), tuple(names), np.array(values), lower_is_better)


def format_friedman_report(report: FriedmanReport) -> str:
    lines = ["FRIEDMAN TEST", f"methods: {len(report.method_names)}  datasets: {report.n_datasets}", ""]
    lines.append("average ranks:")
    width = max(len(name) for name in report.method_names)
    for name, rank in zip(report.method_names, report.average_ranks):
        lines.append(f"  {name:<{width}}  {rank:.4f}")
    lines.append("")
    lines.append(f"chi-square: {report.chi_square:.4f}")
    f_text = "inf (perfect separation)" if report.f_is_infinite else f"{report.iman_davenport_f:.4f}"
    lines.append(f"F (Iman-Davenport): {f_text}")
    lines.append(f"degrees of freedom: ({report.dof1}, {report.dof2})")
    lines.append("")
    for v in report.verdicts:
        verdict = "significant" if v.significant else "not significant"
        lines.append(
            f"alpha={v.alpha:g}: F critical={v.f_critical:.4f}  chi-square critical={v.chi_critical:.4f}  -> {verdict}"
        )
    lines.append("")
    lines.append(f"best method: {report.method_names[report.best_method]}")
    return "\n".join(lines) + "\n"
