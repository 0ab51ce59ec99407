"""Feature selection toolkit: filter, wrapper and embedded methods, an
experiment runner with reports and charts, and the Friedman test."""

from .classifiers import ClassifierSpec, accuracy, cross_val_accuracy, predict, train
from .dataset import (
    DataSplit,
    Dataset,
    discretize_equal_width,
    export_arff,
    export_csv,
    k_fold_partition,
    load_csv,
    reduce_to_features,
    split_train_test,
)
from .embedded import RegularizedFitConfig, embedded_select, l1_logistic_weights, tree_importance
from .evaluation import ExperimentConfig, export_reduced_datasets, run_experiment, time_section
from .filters import (
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
from .methods import METHODS, MethodParams
from .scores import FeatureScores, SelectionOutcome, rank_top_k
from .stats import ResultMatrix, friedman_test
from .wrappers import GAParams, SearchConfig, genetic_select, sequential_backward_select, sequential_forward_select

__version__ = "0.1.0"
