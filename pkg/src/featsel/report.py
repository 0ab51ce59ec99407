"""Plain-text experiment report."""

from __future__ import annotations

from pathlib import Path

from .dataset import _write_text
from .evaluation import ExperimentReport


def _weight_lines(names, weights):
    order = sorted(range(len(names)), key=lambda j: (-weights.scores[j], j))
    return [f"  {names[j]}: {weights.scores[j]:.4f}" for j in order]


def format_text_report(report: ExperimentReport) -> str:
    info = report.dataset
    names = info.feature_names
    lines = [
        "=== DATASET INFO ===",
        f"name: {info.name}",
        f"train samples: {info.n_train}",
        f"test samples: {info.n_test}",
        f"features: {info.n_features}",
        f"classes: {info.n_classes} ({', '.join(info.label_set)})",
        f"method: {report.method}",
        f"classifier: {report.classifier}",
        f"runs: {report.runs}",
        f"subset sizes: {', '.join(str(k) for k in report.k_list)}",
    ]
    for run in range(report.runs):
        records = [report.record(run, k) for k in report.k_list]
        lines += ["", f"=== RUN {run} ===", "FEATURE WEIGHTS"]
        shared = all(rec.outcome.weights is records[0].outcome.weights for rec in records)
        if shared:
            lines += _weight_lines(names, records[0].outcome.weights)
        else:
            for rec in records:
                lines.append(f" k={rec.k}:")
                lines += _weight_lines(names, rec.outcome.weights)
        lines.append("SELECTED SUBSET")
        for rec in records:
            lines.append(f"  k={rec.k}: {', '.join(names[j] for j in rec.outcome.selected)}")
        lines.append("ACCURACY/ERROR/TIME")
        for rec in records:
            lines.append(
                f"  k={rec.k}: accuracy={rec.test_accuracy:.4f} error={rec.error_rate:.4f} "
                f"train_accuracy={rec.train_accuracy:.4f} time={rec.outcome.seconds:.3f}s"
            )
    lines += ["", "=== AVERAGES ==="]
    for k in report.k_list:
        avg = report.averages[k]
        lines.append(
            f"k={k}: accuracy={avg.accuracy:.4f} error={avg.error_rate:.4f} "
            f"train_accuracy={avg.train_accuracy:.4f} time={avg.seconds:.3f}s"
        )
    return "\n".join(lines) + "\n"


def write_text_report(report: ExperimentReport, path) -> Path:
    path = Path(path)
    _write_text(path, format_text_report(report))
    return path
