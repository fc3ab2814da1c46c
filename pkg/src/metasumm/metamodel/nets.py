"""Fully connected regression network trained with Adam and early stopping.

All math is float64 numpy. `MLPNet` exposes the raw network (forward and
analytic gradients of the mean-squared-error loss) so the training path
can be validated against central finite differences; `MLPPredictor` wraps
a trained net together with the input/target standardizers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, TrainingDivergedError
from .dataset import MetaDataset

logger = logging.getLogger("metasumm.metamodel")


@dataclass(frozen=True)
class MLPConfig:
    hidden: tuple[int, ...] = (1024, 1024)
    batch_size: int = 32
    max_epochs: int = 100
    patience: int = 2
    validation_fraction: float = 0.1
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0
    standardize: bool = True

    def __post_init__(self) -> None:
        if any(h <= 0 for h in self.hidden):
            raise ConfigError(f"hidden layer sizes must be positive, got {self.hidden}")
        if self.patience < 0:
            raise ConfigError(f"patience must be >= 0, got {self.patience}")
        if not 0.0 < self.validation_fraction < 1.0:
            raise ConfigError(f"validation fraction must be in (0, 1), got {self.validation_fraction}")


class MLPNet:
    """ReLU hidden layers, linear output, mean-squared-error loss."""

    def __init__(self, layer_sizes: list[int], seed: int = 0, init: str = "glorot"):
        self.layer_sizes = list(layer_sizes)
        rng = np.random.default_rng(seed)
        self.weights: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
            if init == "glorot":
                limit = np.sqrt(6.0 / (fan_in + fan_out))
                w = rng.uniform(-limit, limit, size=(fan_in, fan_out))
            elif init == "zeros":
                w = np.zeros((fan_in, fan_out))
            else:
                raise ConfigError(f"unknown init {init!r}")
            self.weights.append(w)
            self.biases.append(np.zeros(fan_out))

    def forward(self, x: np.ndarray) -> np.ndarray:
        h = np.asarray(x, dtype=np.float64)
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            h = h @ w + b
            if i != last:
                h = np.maximum(h, 0.0)
        return h

    def loss_and_grads(
        self, x: np.ndarray, y: np.ndarray
    ) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
        """MSE (mean over samples and outputs) and its exact gradients."""
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        last = len(self.weights) - 1
        activations = [x]
        h = x
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            h = h @ w + b
            if i != last:
                h = np.maximum(h, 0.0)
            activations.append(h)
        pred = activations[-1]
        diff = pred - y
        loss = float(np.mean(diff * diff))

        n, k = y.shape
        delta = 2.0 * diff / (n * k)
        g_w: list[np.ndarray] = [np.empty(0)] * len(self.weights)
        g_b: list[np.ndarray] = [np.empty(0)] * len(self.biases)
        for i in range(last, -1, -1):
            g_w[i] = activations[i].T @ delta
            g_b[i] = delta.sum(axis=0)
            if i > 0:
                delta = (delta @ self.weights[i].T) * (activations[i] > 0.0)
        return loss, g_w, g_b

    def clone_params(self) -> tuple[list[np.ndarray], list[np.ndarray]]:
        return [w.copy() for w in self.weights], [b.copy() for b in self.biases]

    def set_params(self, weights: list[np.ndarray], biases: list[np.ndarray]) -> None:
        self.weights = [w.copy() for w in weights]
        self.biases = [b.copy() for b in biases]


class _Standardizer:
    def __init__(self, data: np.ndarray, enabled: bool):
        if enabled:
            self.mean = data.mean(axis=0)
            scale = data.std(axis=0)
            self.scale = np.where(scale > 0, scale, 1.0)
        else:
            self.mean = np.zeros(data.shape[1])
            self.scale = np.ones(data.shape[1])

    def transform(self, data: np.ndarray) -> np.ndarray:
        return (data - self.mean) / self.scale

    def inverse(self, data: np.ndarray) -> np.ndarray:
        return data * self.scale + self.mean


@dataclass
class MLPPredictor:
    variant = "mlp"

    net: MLPNet
    x_scaler: _Standardizer
    y_scaler: _Standardizer
    config: MLPConfig
    train_losses: list[float] = field(default_factory=list)
    val_losses: list[float] = field(default_factory=list)
    best_epoch: int = -1

    @property
    def target_dim(self) -> int:
        return self.net.layer_sizes[-1]

    @property
    def feature_dim(self) -> int:
        return self.net.layer_sizes[0]

    def predict(self, features: np.ndarray) -> np.ndarray:
        x = np.asarray(features, dtype=np.float64)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        out = self.y_scaler.inverse(self.net.forward(self.x_scaler.transform(x)))
        return out[0] if single else out


class _Adam:
    def __init__(self, shapes: list[tuple], cfg: MLPConfig):
        self.m = [np.zeros(s) for s in shapes]
        self.v = [np.zeros(s) for s in shapes]
        self.t = 0
        self.cfg = cfg

    def step(self, params: list[np.ndarray], grads: list[np.ndarray]) -> None:
        cfg = self.cfg
        self.t += 1
        for i, (p, g) in enumerate(zip(params, grads)):
            self.m[i] = cfg.beta1 * self.m[i] + (1 - cfg.beta1) * g
            self.v[i] = cfg.beta2 * self.v[i] + (1 - cfg.beta2) * (g * g)
            mhat = self.m[i] / (1 - cfg.beta1**self.t)
            vhat = self.v[i] / (1 - cfg.beta2**self.t)
            p -= cfg.learning_rate * mhat / (np.sqrt(vhat) + cfg.adam_eps)


def train_mlp(train: MetaDataset, cfg: MLPConfig | None = None) -> MLPPredictor:
    """Fit the network, early-stopping on a held-out validation slice.

    Training stops once validation loss has not strictly improved for
    `patience` consecutive epochs; the best-validation weights are
    restored before returning.
    """
    cfg = cfg or MLPConfig()
    x_all = train.feature_matrix()
    y_all = train.target_matrix()
    n = len(x_all)

    rng = np.random.default_rng(cfg.seed)
    perm = rng.permutation(n)
    n_val = max(1, int(round(cfg.validation_fraction * n)))
    if n_val >= n:
        raise ConfigError(f"validation fraction {cfg.validation_fraction} leaves no training data for n={n}")
    val_idx, tr_idx = perm[:n_val], perm[n_val:]

    x_scaler = _Standardizer(x_all[tr_idx], cfg.standardize)
    y_scaler = _Standardizer(y_all[tr_idx], cfg.standardize)
    xt = x_scaler.transform(x_all[tr_idx])
    yt = y_scaler.transform(y_all[tr_idx])
    xv = x_scaler.transform(x_all[val_idx])
    yv = y_scaler.transform(y_all[val_idx])

    sizes = [xt.shape[1], *cfg.hidden, yt.shape[1]]
    net = MLPNet(sizes, seed=cfg.seed)
    adam_w = _Adam([w.shape for w in net.weights], cfg)
    adam_b = _Adam([b.shape for b in net.biases], cfg)

    best_val = np.inf
    best_params: tuple | None = None
    best_epoch = -1
    wait = 0
    train_losses: list[float] = []
    val_losses: list[float] = []
    for epoch in range(cfg.max_epochs):
        order = rng.permutation(len(xt))
        epoch_loss = 0.0
        batches = 0
        for start in range(0, len(xt), cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            loss, g_w, g_b = net.loss_and_grads(xt[idx], yt[idx])
            if not np.isfinite(loss):
                raise TrainingDivergedError(f"non-finite training loss at epoch {epoch}")
            adam_w.step(net.weights, g_w)
            adam_b.step(net.biases, g_b)
            epoch_loss += loss
            batches += 1
        train_losses.append(epoch_loss / max(batches, 1))

        val_pred = net.forward(xv)
        val_loss = float(np.mean((val_pred - yv) ** 2))
        if not np.isfinite(val_loss):
            raise TrainingDivergedError(f"non-finite validation loss at epoch {epoch}")
        val_losses.append(val_loss)
        logger.debug("epoch %d: train %.6f val %.6f", epoch, train_losses[-1], val_loss)

        if val_loss < best_val:
            best_val = val_loss
            best_params = net.clone_params()
            best_epoch = epoch
            wait = 0
        else:
            wait += 1
            if wait >= max(cfg.patience, 1):
                break

    assert best_params is not None
    net.set_params(*best_params)
    return MLPPredictor(
        net=net,
        x_scaler=x_scaler,
        y_scaler=y_scaler,
        config=cfg,
        train_losses=train_losses,
        val_losses=val_losses,
        best_epoch=best_epoch,
    )
