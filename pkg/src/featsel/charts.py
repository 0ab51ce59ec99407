"""SVG line charts of accuracy, error rate and execution time per subset size.

Figures are built with the object-oriented matplotlib API (no pyplot
state), so rendering is safe from worker threads. Each run's line carries
the SVG id ``run-<r>`` and the mean line ``average``.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib as mpl
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

METRIC_LABELS = {
    "accuracy": "Accuracy",
    "error": "Error rate",
    "time": "Execution time (s)",
}
PAD_FRACTION = 0.05

_RC = {
    "svg.hashsalt": "featsel",
    "svg.fonttype": "path",
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def padded_range(values: Sequence[float], pad: float = PAD_FRACTION) -> tuple[float, float]:
    """[min, max] of ``values`` widened by ``pad`` of the span on each side."""
    lo, hi = min(values), max(values)
    span = hi - lo
    if span == 0:
        span = abs(lo) if lo != 0 else 1.0
    return lo - pad * span, hi + pad * span


def build_chart(run_series, average, metric: str, k_list) -> Figure:
    k_list = list(k_list)
    for seq in list(run_series) + [average]:
        if len(seq) != len(k_list):
            raise ValueError(f"series of length {len(seq)} for {len(k_list)} subset sizes")
    label = METRIC_LABELS.get(metric, metric)
    with mpl.rc_context(_RC):
        fig = Figure(figsize=(6.4, 4.0))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot()
        for r, seq in enumerate(run_series):
            ax.plot(k_list, seq, linewidth=1.0, alpha=0.6, marker="o", markersize=3,
                    label=f"run {r}", gid=f"run-{r}")
        ax.plot(k_list, average, color="black", linewidth=2.2, linestyle="--", marker="s",
                markersize=4, label="average", gid="average")
        ax.set_xlim(*padded_range(k_list))
        ax.set_ylim(*padded_range([v for seq in list(run_series) + [average] for v in seq]))
        ax.set_xticks(k_list)
        ax.set_xlabel("Number of selected features")
        ax.set_ylabel(label)
        ax.set_title(label)
        ax.legend(loc="best", fontsize=8, frameon=False)
        fig.tight_layout()
    return fig


def render_chart(run_series, average, metric: str, k_list, path) -> Path:
    """Write one metric chart as a deterministic SVG file."""
    path = Path(path)
    fig = build_chart(run_series, average, metric, k_list)
    with mpl.rc_context(_RC):
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def render_report_charts(report, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return [
        render_chart(report.series(m), report.average_series(m), m, report.k_list, out / f"{m}.svg")
        for m in ("accuracy", "error", "time")
    ]
