"""Uniform predictor contract, recommendation, and model persistence.

Every predictor maps a feature vector to per-summarizer scores; the
recommendation is the argmax in canonical engine order. Models persist in
a "MSP1" container with the variant tag, config, and parameters.
"""

from __future__ import annotations

from dataclasses import asdict
from pathlib import Path
from typing import Protocol, runtime_checkable

import numpy as np

from ..errors import DataError
from ..io import read_container, write_container
from ..summarizers import SummarizerId
from .baseline import MeanBaselinePredictor
from .nets import MLPConfig, MLPNet, MLPPredictor, _Standardizer
from .trees import ForestConfig, ForestPredictor, TreeConfig, TreePredictor

MAGIC = "MSP1"


@runtime_checkable
class Predictor(Protocol):
    variant: str

    @property
    def target_dim(self) -> int: ...

    def predict(self, features: np.ndarray) -> np.ndarray: ...


def summarizer_scores(p: Predictor, features: np.ndarray) -> np.ndarray:
    """Four per-engine scores; 16-output suite predictors average their members."""
    scores = np.asarray(p.predict(np.asarray(features, dtype=np.float64)))
    if scores.ndim != 1:
        raise DataError("summarizer_scores expects a single feature vector")
    if len(scores) == len(SummarizerId):
        return scores
    if len(scores) == 4 * len(SummarizerId):
        return scores.reshape(len(SummarizerId), 4).mean(axis=1)
    raise DataError(f"predictor output length {len(scores)} is not 4 or 16")


def recommend(p: Predictor, features: np.ndarray) -> SummarizerId:
    """Engine with the highest predicted score; ties go to the lowest index."""
    features = np.asarray(features, dtype=np.float64)
    expected = getattr(p, "feature_dim", None)
    if expected is not None and features.shape[-1] != expected:
        raise DataError(f"feature dimension {features.shape[-1]} does not match predictor ({expected})")
    return SummarizerId(int(np.argmax(summarizer_scores(p, features))))


def save_predictor(path: str | Path, p: Predictor) -> None:
    if isinstance(p, MeanBaselinePredictor):
        meta = {"format": 1, "variant": p.variant, "feature_dim": p.feature_dim}
        write_container(path, MAGIC, meta, {"mean": p.mean})
    elif isinstance(p, TreePredictor):
        meta = {
            "format": 1,
            "variant": p.variant,
            "feature_dim": p.feature_dim,
            "config": asdict(p.config),
        }
        write_container(path, MAGIC, meta, _tree_arrays(p))
    elif isinstance(p, ForestPredictor):
        offsets = np.cumsum([0] + [t.n_nodes for t in p.trees]).astype(np.int64)
        arrays = {
            "offsets": offsets,
            "feature": np.concatenate([t.feature for t in p.trees]),
            "threshold": np.concatenate([t.threshold for t in p.trees]),
            "left": np.concatenate([t.left for t in p.trees]),
            "right": np.concatenate([t.right for t in p.trees]),
            "value": np.concatenate([t.value for t in p.trees]),
        }
        meta = {
            "format": 1,
            "variant": p.variant,
            "feature_dim": p.feature_dim,
            "config": asdict(p.config),
        }
        write_container(path, MAGIC, meta, arrays)
    elif isinstance(p, MLPPredictor):
        arrays = {
            "x_mean": p.x_scaler.mean,
            "x_scale": p.x_scaler.scale,
            "y_mean": p.y_scaler.mean,
            "y_scale": p.y_scaler.scale,
        }
        for i, (w, b) in enumerate(zip(p.net.weights, p.net.biases)):
            arrays[f"w{i}"] = w
            arrays[f"b{i}"] = b
        cfg = asdict(p.config)
        cfg["hidden"] = list(p.config.hidden)
        meta = {
            "format": 1,
            "variant": p.variant,
            "config": cfg,
            "layer_sizes": p.net.layer_sizes,
            "best_epoch": p.best_epoch,
            "train_losses": p.train_losses,
            "val_losses": p.val_losses,
        }
        write_container(path, MAGIC, meta, arrays)
    else:
        raise DataError(f"cannot persist predictor of type {type(p).__name__}")


def _tree_arrays(t: TreePredictor) -> dict[str, np.ndarray]:
    return {
        "feature": t.feature,
        "threshold": t.threshold,
        "left": t.left,
        "right": t.right,
        "value": t.value,
    }


def _tree_from_arrays(arrays: dict[str, np.ndarray], cfg: TreeConfig, feature_dim: int) -> TreePredictor:
    t = TreePredictor(
        arrays["feature"], arrays["threshold"], arrays["left"], arrays["right"], arrays["value"], cfg
    )
    t.feature_dim = feature_dim
    return t


def load_predictor(path: str | Path) -> Predictor:
    meta, arrays = read_container(path, MAGIC)
    variant = meta["variant"]
    if variant == "mean_baseline":
        p = MeanBaselinePredictor(arrays["mean"])
        p.feature_dim = meta["feature_dim"]
        return p
    if variant == "tree":
        return _tree_from_arrays(arrays, TreeConfig(**meta["config"]), meta["feature_dim"])
    if variant == "forest":
        cfg = ForestConfig(**meta["config"])
        offsets = arrays["offsets"]
        tree_cfg = TreeConfig(min_samples_split=cfg.min_samples_split)
        trees = []
        for i in range(len(offsets) - 1):
            lo, hi = int(offsets[i]), int(offsets[i + 1])
            sub = {k: arrays[k][lo:hi] for k in ("feature", "threshold", "left", "right", "value")}
            trees.append(_tree_from_arrays(sub, tree_cfg, meta["feature_dim"]))
        f = ForestPredictor(trees, cfg)
        f.feature_dim = meta["feature_dim"]
        return f
    if variant == "mlp":
        cfg_dict = dict(meta["config"])
        cfg_dict["hidden"] = tuple(cfg_dict["hidden"])
        cfg = MLPConfig(**cfg_dict)
        net = MLPNet(meta["layer_sizes"], init="zeros")
        n_layers = len(meta["layer_sizes"]) - 1
        net.weights = [arrays[f"w{i}"] for i in range(n_layers)]
        net.biases = [arrays[f"b{i}"] for i in range(n_layers)]
        x_scaler = _Standardizer.__new__(_Standardizer)
        x_scaler.mean, x_scaler.scale = arrays["x_mean"], arrays["x_scale"]
        y_scaler = _Standardizer.__new__(_Standardizer)
        y_scaler.mean, y_scaler.scale = arrays["y_mean"], arrays["y_scale"]
        return MLPPredictor(
            net=net,
            x_scaler=x_scaler,
            y_scaler=y_scaler,
            config=cfg,
            train_losses=list(meta["train_losses"]),
            val_losses=list(meta["val_losses"]),
            best_epoch=meta["best_epoch"],
        )
    raise DataError(f"unknown predictor variant {variant!r}")
