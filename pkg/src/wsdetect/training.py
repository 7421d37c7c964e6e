"""Supervised training loop for the BiLSTM classifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .datasets import stratified_split_indices
from .metrics import EvalReport, build_report
from .model import BiLstmModel, backward, encode_tokens, forward_batch, pad_batch
from .optim import AdamHyper, AdamState, adam_step


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 10
    batch_size: int = 256
    adam: AdamHyper = field(default_factory=AdamHyper)
    test_fraction: float = 0.2
    seed: int = 1
    hidden_size: int = 64
    dense1_size: int = 16
    stratify: bool = True

    def __post_init__(self) -> None:
        if self.epochs < 0:
            raise ValueError("epochs must be non-negative")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError("test_fraction must be in (0, 1)")
        if self.hidden_size < 1 or self.dense1_size < 1:
            raise ValueError("layer sizes must be positive")


def train(
    model: BiLstmModel,
    dataset: Sequence[tuple[Sequence[str], int]],
    cfg: TrainConfig,
    model_id: str = "bilstm",
    dataset_id: str = "heldout",
    on_epoch: Callable[[int, float], None] | None = None,
) -> tuple[BiLstmModel, list[float], EvalReport]:
    """Minibatch Adam over a seeded stratified 80/20 split.

    Returns the trained model (updated in place), the mean training loss
    per epoch, and an evaluation report on the held-out side. Examples
    are (token sequence, 0/1 label) pairs; encoding and truncation follow
    the model's vocabulary and max_sequence_length.
    """
    labels_all = [int(label) for _, label in dataset]
    if len(set(labels_all)) < 2:
        raise ValueError("degenerate labels: both classes must be present")
    encoded = [
        encode_tokens(model.vocab, tokens, model.max_sequence_length)
        for tokens, _ in dataset
    ]
    train_idx, test_idx = stratified_split_indices(
        labels_all, cfg.test_fraction, cfg.seed, stratify=cfg.stratify
    )
    train_ids = [encoded[i] for i in train_idx]
    train_y = np.asarray([labels_all[i] for i in train_idx], dtype=np.float64)
    params = model.param_dict()
    state = AdamState()
    history: list[float] = []
    n = len(train_ids)
    for epoch in range(cfg.epochs):
        order = np.random.default_rng([cfg.seed, epoch]).permutation(n)
        total = 0.0
        for start in range(0, n, cfg.batch_size):
            chosen = order[start : start + cfg.batch_size]
            ids = pad_batch([train_ids[i] for i in chosen])
            loss, grads, _ = backward(model, ids, train_y[chosen])
            adam_step(params, grads, state, cfg.adam)
            total += loss * len(chosen)
        epoch_loss = total / n
        history.append(epoch_loss)
        if on_epoch is not None:
            on_epoch(epoch, epoch_loss)
    test_scores = predict_ids(model, [encoded[i] for i in test_idx], cfg.batch_size)
    test_labels = [labels_all[i] for i in test_idx]
    report = build_report(model_id, dataset_id, test_scores.tolist(), test_labels)
    return model, history, report


def predict_ids(
    model: BiLstmModel, sequences: Sequence[Sequence[int]], batch_size: int = 256
) -> np.ndarray:
    """Probabilities for already-encoded id sequences, in batches."""
    out = np.empty(len(sequences))
    for start in range(0, len(sequences), batch_size):
        chunk = [list(s) for s in sequences[start : start + batch_size]]
        p, _ = forward_batch(model, pad_batch(chunk))
        out[start : start + len(chunk)] = p
    return out
