"""Logistic regression over averaged word embeddings.

A deliberately plain reference classifier: zero-initialized weights,
full-batch gradient descent on L2-regularized binary cross-entropy.
Deterministic by construction, so any seed yields the same model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


@dataclass
class LogRegModel:
    weights: np.ndarray
    bias: float
    trained_on: str = ""

    def __post_init__(self) -> None:
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.weights.ndim != 1:
            raise ValueError("weights must be a vector")
        if not np.all(np.isfinite(self.weights)) or not np.isfinite(self.bias):
            raise ValueError("non-finite model parameters")


def _sigmoid(z: np.ndarray | float) -> np.ndarray | float:
    return np.where(
        np.asarray(z) >= 0,
        1.0 / (1.0 + np.exp(-np.abs(z))),
        np.exp(-np.abs(z)) / (1.0 + np.exp(-np.abs(z))),
    )


def lr_loss_and_grad(
    weights: np.ndarray,
    bias: float,
    x: np.ndarray,
    y: np.ndarray,
    l2: float,
) -> tuple[float, np.ndarray, float]:
    """Mean BCE + 0.5*l2*||w||^2 and its exact gradient.

    Uses the logaddexp form of the per-example loss, log(1+e^-z)+(1-y)z,
    which stays smooth for finite-difference comparison.
    """
    z = x @ weights + bias
    losses = np.logaddexp(0.0, -z) + (1.0 - y) * z
    loss = float(np.mean(losses)) + 0.5 * l2 * float(weights @ weights)
    p = _sigmoid(z)
    g = (p - y) / len(y)
    grad_w = x.T @ g + l2 * weights
    grad_b = float(np.sum(g))
    return loss, grad_w, grad_b


def lr_train(
    features: Sequence[tuple[np.ndarray, int]],
    l2: float = 1e-4,
    epochs: int = 500,
    lr: float = 0.5,
    seed: int = 1,
    trained_on: str = "",
) -> LogRegModel:
    """Fit the model by full-batch gradient descent.

    The objective is convex and the start point is fixed at zero, so the
    seed has no effect on the result; it is accepted for interface parity
    with the stochastic trainers.
    """
    if l2 < 0:
        raise ValueError("l2 must be non-negative")
    if epochs < 0:
        raise ValueError("epochs must be non-negative")
    if not features:
        raise ValueError("no training features")
    x = np.stack([np.asarray(v, dtype=np.float64) for v, _ in features])
    y = np.asarray([label for _, label in features], dtype=np.float64)
    if not (np.any(y == 0) and np.any(y == 1)):
        raise ValueError("degenerate labels: both classes must be present")
    weights = np.zeros(x.shape[1])
    bias = 0.0
    for _ in range(epochs):
        _, grad_w, grad_b = lr_loss_and_grad(weights, bias, x, y, l2)
        weights -= lr * grad_w
        bias -= lr * grad_b
    return LogRegModel(weights=weights, bias=bias, trained_on=trained_on)


def lr_predict(model: LogRegModel, feature: np.ndarray) -> float:
    """Probability of the positive class, sigmoid(w.x + b)."""
    feature = np.asarray(feature, dtype=np.float64)
    if feature.shape != model.weights.shape:
        raise ValueError(
            f"dimension mismatch: feature {feature.shape} vs weights {model.weights.shape}"
        )
    return float(_sigmoid(float(model.weights @ feature) + model.bias))


def lr_predict_batch(model: LogRegModel, features: np.ndarray) -> np.ndarray:
    """Vectorized lr_predict over rows of a feature matrix."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != model.weights.shape[0]:
        raise ValueError("feature matrix shape mismatch")
    return np.asarray(_sigmoid(features @ model.weights + model.bias), dtype=np.float64)
