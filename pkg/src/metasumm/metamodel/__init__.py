"""Meta-model layer: regression dataset, predictors, and evaluation reports."""

from .baseline import MeanBaselinePredictor, mean_baseline
from .dataset import (
    MetaDataset,
    MetaRecord,
    SplitSpec,
    add_length_feature,
    balance_dataset,
    build_meta_dataset,
    load_jsonl,
    save_jsonl,
    split,
)
from .nets import MLPConfig, MLPNet, MLPPredictor, train_mlp
from .predictors import Predictor, load_predictor, recommend, save_predictor
from .reports import (
    EvalReport,
    FinalRougeTable,
    classification_report,
    evaluate_mse,
    final_rouge_comparison,
    recommendation_frequencies,
)
from .trees import ForestConfig, ForestPredictor, TreeConfig, TreePredictor, train_forest, train_tree

__all__ = [
    "MetaDataset",
    "MetaRecord",
    "SplitSpec",
    "build_meta_dataset",
    "split",
    "add_length_feature",
    "balance_dataset",
    "save_jsonl",
    "load_jsonl",
    "MLPConfig",
    "MLPNet",
    "MLPPredictor",
    "train_mlp",
    "TreeConfig",
    "ForestConfig",
    "TreePredictor",
    "ForestPredictor",
    "train_tree",
    "train_forest",
    "MeanBaselinePredictor",
    "mean_baseline",
    "Predictor",
    "recommend",
    "save_predictor",
    "load_predictor",
    "EvalReport",
    "FinalRougeTable",
    "evaluate_mse",
    "classification_report",
    "recommendation_frequencies",
    "final_rouge_comparison",
]
