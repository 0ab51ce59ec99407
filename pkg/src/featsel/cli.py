"""Command-line interface: ``featsel {run,convert,friedman,list-methods}``.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from .classifiers import CLASSIFIER_KINDS, ClassifierSpec
from .dataset import dataset_from_rows, export_csv, read_csv_rows
from .embedded import RegularizedFitConfig
from .errors import ConfigError, DatasetError
from .evaluation import ExperimentConfig, export_reduced_datasets, run_experiment
from .methods import APPROACHES, METHODS, MethodParams, methods_by_approach
from .report import write_text_report
from .charts import render_report_charts
from .stats import DEFAULT_ALPHAS, format_friedman_report, friedman_test, load_result_matrix
from .wrappers import GAParams

log = logging.getLogger("featsel")

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _color(text, code):
    if os.environ.get("FEATSEL_NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def parse_int_list(text) -> list[int]:
    """Parse ``5,10,15,20``; rejects non-integers, non-positive values and duplicates."""
    if isinstance(text, (list, tuple)):
        items = list(text)
    else:
        items = [t.strip() for t in str(text).split(",")]
    out = []
    for item in items:
        try:
            if isinstance(item, bool) or (isinstance(item, float) and not item.is_integer()):
                raise ValueError
            value = int(item)
        except (TypeError, ValueError):
            raise UsageError(f"not an integer in feature-count list: {item!r}") from None
        if value < 1:
            raise UsageError(f"feature counts must be positive: {value}")
        out.append(value)
    if not out:
        raise UsageError("empty feature-count list")
    if len(set(out)) != len(out):
        raise UsageError(f"duplicate feature counts in {out}")
    return out


def parse_float_list(text) -> list[float]:
    items = text if isinstance(text, (list, tuple)) else str(text).split(",")
    try:
        return [float(x) for x in items]
    except ValueError:
        raise UsageError(f"not a number list: {text!r}") from None


# -- run --------------------------------------------------------------------

# dest -> (default, type); None defaults mean "unset" so --config exclusivity can be checked
RUN_OPTIONS = {
    "data": (None, str),
    "train": (None, str),
    "test": (None, str),
    "train_fraction": (2.0 / 3.0, float),
    "name": (None, str),
    "method": (None, str),
    "num_features": (None, str),
    "classifier": ("knn", str),
    "knn_k": (5, int),
    "tree_max_depth": (None, int),
    "tree_min_leaf": (2, int),
    "nb_var_floor": (1e-9, float),
    "runs": (1, int),
    "seed": (0, int),
    "out": (None, str),
    "jobs": (None, int),
    "bins": (10, int),
    "relieff_k": (5, int),
    "relieff_m": (None, int),
    "laplacian_k": (5, int),
    "laplacian_bandwidth": (1.0, float),
    "folds": (5, int),
    "ga_population": (30, int),
    "ga_generations": (50, int),
    "ga_crossover": (0.9, float),
    "ga_mutation": (None, float),
    "ga_tournament": (2, int),
    "ga_elitism": (1, int),
    "l1_lambda": (0.01, float),
    "l1_max_iters": (500, int),
    "l1_step": (0.1, float),
    "l1_tol": (1e-6, float),
}


def _add_run_parser(sub):
    p = sub.add_parser("run", help="select features, evaluate a classifier and write reports")
    p.add_argument("--config", help="JSON file with keys mirroring the flags (exclusive with flags)")
    src = p.add_argument_group("data")
    src.add_argument("--data", help="whole dataset CSV (split per run)")
    src.add_argument("--train", help="pre-split training CSV")
    src.add_argument("--test", help="pre-split test CSV")
    src.add_argument("--train-fraction", type=float, help="train share in whole-dataset mode (default 2/3)")
    src.add_argument("--name", help="dataset name used in output file names")
    sel = p.add_argument_group("selection")
    sel.add_argument("--method", choices=sorted(METHODS), help="selection method (see list-methods)")
    sel.add_argument("--num-features", help="comma-separated subset sizes, e.g. 5,10,15,20")
    sel.add_argument("--bins", type=int, help="equal-width bins for entropy-based filters (default 10)")
    sel.add_argument("--relieff-k", type=int)
    sel.add_argument("--relieff-m", type=int, help="ReliefF sample count (default: all rows)")
    sel.add_argument("--laplacian-k", type=int)
    sel.add_argument("--laplacian-bandwidth", type=float)
    sel.add_argument("--folds", type=int, help="cross-validation folds for wrapper fitness (default 5)")
    sel.add_argument("--ga-population", type=int)
    sel.add_argument("--ga-generations", type=int)
    sel.add_argument("--ga-crossover", type=float)
    sel.add_argument("--ga-mutation", type=float, help="bit-flip rate (default 1/d)")
    sel.add_argument("--ga-tournament", type=int)
    sel.add_argument("--ga-elitism", type=int)
    sel.add_argument("--l1-lambda", type=float)
    sel.add_argument("--l1-max-iters", type=int)
    sel.add_argument("--l1-step", type=float)
    sel.add_argument("--l1-tol", type=float)
    clf = p.add_argument_group("classifier")
    clf.add_argument("--classifier", choices=CLASSIFIER_KINDS)
    clf.add_argument("--knn-k", type=int)
    clf.add_argument("--tree-max-depth", type=int)
    clf.add_argument("--tree-min-leaf", type=int)
    clf.add_argument("--nb-var-floor", type=float)
    runcfg = p.add_argument_group("run configuration")
    runcfg.add_argument("--runs", type=int)
    runcfg.add_argument("--seed", type=int)
    runcfg.add_argument("--jobs", type=int, help="concurrent runs (default: CPU count)")
    runcfg.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_run)


def _run_settings(args) -> dict:
    given = {k: getattr(args, k) for k in RUN_OPTIONS if getattr(args, k) is not None}
    if args.config:
        if given:
            raise UsageError(f"--config cannot be combined with flags: {', '.join(sorted(given))}")
        try:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(raw, dict):
            raise UsageError("config file must hold a JSON object")
        given = {}
        for key, value in raw.items():
            dest = key.replace("-", "_")
            if dest not in RUN_OPTIONS:
                raise UsageError(f"unknown config key {key!r}")
            if value is not None and dest != "num_features":
                try:
                    value = RUN_OPTIONS[dest][1](value)
                except (TypeError, ValueError):
                    raise UsageError(f"bad value for {key!r}: {value!r}") from None
            given[dest] = value
    settings = {k: default for k, (default, _) in RUN_OPTIONS.items()}
    settings.update(given)
    return settings


def build_config(s: dict) -> ExperimentConfig:
    if not s["method"]:
        raise UsageError("--method is required")
    if s["method"] not in METHODS:
        raise UsageError(f"unknown method {s['method']!r}")
    if s["num_features"] is None:
        raise UsageError("--num-features is required")
    if not s["out"]:
        raise UsageError("--out is required")
    if bool(s["data"]) == bool(s["train"] or s["test"]):
        raise UsageError("give either --data or both --train and --test")
    if s["train"] and not s["test"] or s["test"] and not s["train"]:
        raise UsageError("--train and --test must be given together")
    if s["classifier"] not in CLASSIFIER_KINDS:
        raise UsageError(f"unknown classifier {s['classifier']!r}")
    k_list = parse_int_list(s["num_features"])
    try:
        classifier = ClassifierSpec(s["classifier"], s["knn_k"], s["tree_max_depth"], s["tree_min_leaf"], s["nb_var_floor"])
        params = MethodParams(
            bins=s["bins"],
            relieff_k=s["relieff_k"],
            relieff_m=s["relieff_m"],
            laplacian_k=s["laplacian_k"],
            laplacian_bandwidth=s["laplacian_bandwidth"],
            folds=s["folds"],
            ga=GAParams(s["ga_population"], s["ga_generations"], s["ga_crossover"], s["ga_mutation"],
                        s["ga_tournament"], s["ga_elitism"]),
            l1=RegularizedFitConfig(s["l1_lambda"], s["l1_max_iters"], s["l1_step"], s["l1_tol"]),
            tree=ClassifierSpec("decision-tree", max_depth=s["tree_max_depth"], min_leaf=s["tree_min_leaf"]),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if s["runs"] < 1:
        raise UsageError("--runs must be >= 1")
    return ExperimentConfig(
        method=s["method"],
        k_list=tuple(k_list),
        data=s["data"],
        train=s["train"],
        test=s["test"],
        train_fraction=s["train_fraction"],
        params=params,
        classifier=classifier,
        runs=s["runs"],
        base_seed=s["seed"],
        jobs=s["jobs"] or os.cpu_count() or 1,
        name=s["name"],
    )


def write_results_csv(report, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["run", "k", "accuracy", "error", "train_accuracy", "seconds", "selected"])
        for rec in report.records:
            names = [report.dataset.feature_names[j] for j in rec.outcome.selected]
            writer.writerow([rec.run_index, rec.k, repr(rec.test_accuracy), repr(rec.error_rate),
                             repr(rec.train_accuracy), f"{rec.outcome.seconds:.6f}", " ".join(names)])


def cmd_run(args) -> int:
    settings = _run_settings(args)
    cfg = build_config(settings)
    out = Path(settings["out"])
    try:
        report = run_experiment(cfg)
    except (ConfigError, DatasetError, FileNotFoundError) as exc:
        raise UsageError(str(exc)) from exc
    out.mkdir(parents=True, exist_ok=True)
    write_text_report(report, out / "report.txt")
    write_results_csv(report, out / "results.csv")
    render_report_charts(report, out / "charts")
    files = export_reduced_datasets(report, out / "reduced")
    print(f"dataset {report.dataset.name}: {report.dataset.n_features} features, "
          f"{report.dataset.n_train} train / {report.dataset.n_test} test rows")
    for k in report.k_list:
        avg = report.averages[k]
        print(f"k={k}: accuracy={avg.accuracy:.4f} error={avg.error_rate:.4f} time={avg.seconds:.3f}s")
    print(f"wrote {out / 'report.txt'}, 3 charts and {len(files)} reduced datasets")
    return EXIT_OK


# -- convert ----------------------------------------------------------------


def cmd_convert(args) -> int:
    try:
        rows = read_csv_rows(args.input)
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    if not rows:
        raise UsageError(f"{args.input} is empty")
    header = [h.strip() for h in rows[0]]
    col = args.class_column
    if col in header:
        index = header.index(col)
    else:
        try:
            index = int(col)
        except ValueError:
            raise UsageError(f"unknown class column {col!r}; columns are {', '.join(header)}") from None
        if not -len(header) <= index < len(header):
            raise UsageError(f"class column index {index} out of range for {len(header)} columns")
        index %= len(header)
    reordered = [[c for i, c in enumerate(row) if i != index] + [row[index]] if len(row) > index else row
                 for row in rows]
    try:
        ds = dataset_from_rows(reordered, source_name=Path(args.output).stem)
    except DatasetError as exc:
        raise UsageError(str(exc)) from None
    export_csv(ds, args.output)
    print(f"wrote {args.output}: {ds.n_samples} rows, {ds.n_features} features, "
          f"{ds.n_classes} classes")
    return EXIT_OK


# -- friedman ---------------------------------------------------------------


def cmd_friedman(args) -> int:
    alphas = parse_float_list(args.alphas) if args.alphas else list(DEFAULT_ALPHAS)
    if any(not 0 < a < 1 for a in alphas):
        raise UsageError("alphas must lie in (0, 1)")
    try:
        matrix = load_result_matrix(args.matrix, lower_is_better=not args.higher_is_better)
    except OSError as exc:
        raise UsageError(f"cannot read {args.matrix}: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = friedman_test(matrix, alphas)
    text = format_friedman_report(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    for line in text.splitlines():
        if line.endswith("-> significant"):
            line = _color(line, "32")
        elif line.endswith("not significant"):
            line = _color(line, "33")
        print(line)
    return EXIT_OK


# -- list-methods -----------------------------------------------------------


def format_method_list() -> str:
    lines = []
    for approach in APPROACHES:
        roster = methods_by_approach(approach)
        lines.append(f"{approach.upper()} ({len(roster)})")
        for m in roster:
            lines.append(f"  {m.name:<16} {m.summary}")
        lines.append("")
    lines.append("classifiers: " + ", ".join(CLASSIFIER_KINDS))
    return "\n".join(lines) + "\n"


def cmd_list_methods(args) -> int:
    sys.stdout.write(format_method_list())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="featsel", description="Filter, wrapper and embedded feature selection.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_parser(sub)

    p = sub.add_parser("convert", help="move the class column last and validate a CSV file")
    p.add_argument("--in", dest="input", required=True, help="raw CSV with a header row")
    p.add_argument("--class-column", required=True, help="class column name or 0-based index")
    p.add_argument("--out", dest="output", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("friedman", help="Friedman / Iman-Davenport test on a result matrix")
    p.add_argument("--matrix", required=True, help="CSV: dataset,<method1>,...,<methodK>")
    p.add_argument("--higher-is-better", action="store_true", help="rank larger values first")
    p.add_argument("--alphas", help="comma-separated significance levels (default 0.01,0.05,0.1)")
    p.add_argument("--out", help="also write the report to this file")
    p.set_defaults(func=cmd_friedman)

    p = sub.add_parser("list-methods", help="list selection methods by approach")
    p.set_defaults(func=cmd_list_methods)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"featsel {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - report any runtime failure with context
        log.debug("failure", exc_info=True)
        print(f"featsel {args.command}: failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
