"""Bidirectional LSTM classifier over pretrained word embeddings.

Token id space: 0 is the reserved padding/unknown id whose embedding row
is all zeros and which every pass skips via masking; vocabulary word i
maps to row i + 1. The two directional final hidden states are
concatenated and fed through a linear dense layer, then a sigmoid unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .embeddings import EmbeddingMatrix, Vocabulary, vocab_fingerprint
from .lstm import LstmParams, lstm_sequence_backward, lstm_sequence_forward

BCE_EPSILON = 1e-7
PAD_ID = 0


@dataclass
class BiLstmModel:
    vocab: Vocabulary
    embedding: np.ndarray
    forward_lstm: LstmParams
    backward_lstm: LstmParams
    dense1_w: np.ndarray
    dense1_b: np.ndarray
    dense2_w: np.ndarray
    dense2_b: np.ndarray
    max_sequence_length: int = 64
    embedding_trainable: bool = True

    def __post_init__(self) -> None:
        v, dim = self.embedding.shape
        if v != len(self.vocab) + 1:
            raise ValueError("embedding table must have len(vocab)+1 rows (row 0 = padding)")
        h = self.forward_lstm.hidden_size
        if self.backward_lstm.hidden_size != h:
            raise ValueError("directional hidden sizes differ")
        if self.forward_lstm.input_size != dim or self.backward_lstm.input_size != dim:
            raise ValueError("LSTM input size must equal embedding dim")
        d1 = self.dense1_w.shape[0]
        if self.dense1_w.shape != (d1, 2 * h) or self.dense1_b.shape != (d1,):
            raise ValueError("dense1 shapes inconsistent")
        if self.dense2_w.shape != (1, d1) or self.dense2_b.shape != (1,):
            raise ValueError("dense2 shapes inconsistent")
        if self.max_sequence_length < 1:
            raise ValueError("max_sequence_length must be >= 1")

    @property
    def hidden_size(self) -> int:
        return self.forward_lstm.hidden_size

    @property
    def embedding_dim(self) -> int:
        return self.embedding.shape[1]

    def param_dict(self) -> dict[str, np.ndarray]:
        """Live views of every trainable tensor, keyed by stable names."""
        out: dict[str, np.ndarray] = {}
        if self.embedding_trainable:
            out["embedding"] = self.embedding
        out.update(self.forward_lstm.as_dict("fwd"))
        out.update(self.backward_lstm.as_dict("bwd"))
        out["dense1.w"] = self.dense1_w
        out["dense1.b"] = self.dense1_b
        out["dense2.w"] = self.dense2_w
        out["dense2.b"] = self.dense2_b
        return out


def init_bilstm(
    embeddings: EmbeddingMatrix,
    hidden_size: int = 64,
    dense1_size: int = 16,
    max_sequence_length: int = 64,
    seed: int = 1,
    embedding_trainable: bool = True,
) -> BiLstmModel:
    """Build a model whose embedding table is seeded from trained vectors."""
    rng = np.random.default_rng(seed)
    dim = embeddings.dim
    table = np.zeros((len(embeddings.vocab) + 1, dim))
    table[1:] = embeddings.vectors
    fwd = LstmParams.init(rng, hidden_size, dim)
    bwd = LstmParams.init(rng, hidden_size, dim)
    s1 = np.sqrt(6.0 / (2 * hidden_size + dense1_size))
    s2 = np.sqrt(6.0 / (dense1_size + 1))
    return BiLstmModel(
        vocab=embeddings.vocab,
        embedding=table,
        forward_lstm=fwd,
        backward_lstm=bwd,
        dense1_w=rng.uniform(-s1, s1, size=(dense1_size, 2 * hidden_size)),
        dense1_b=np.zeros(dense1_size),
        dense2_w=rng.uniform(-s2, s2, size=(1, dense1_size)),
        dense2_b=np.zeros(1),
        max_sequence_length=max_sequence_length,
        embedding_trainable=embedding_trainable,
    )


def encode_tokens(vocab: Vocabulary, tokens: Sequence[str], max_length: int) -> list[int]:
    """Map tokens to model ids, truncating at the tail.

    Unknown tokens map to the padding id 0 and are skipped by masking.
    """
    ids = [vocab.token_to_id[t] + 1 if t in vocab else PAD_ID for t in tokens]
    return ids[:max_length]


def pad_batch(sequences: Sequence[Sequence[int]]) -> np.ndarray:
    """Right-pad id lists with 0 to the longest length (minimum 1)."""
    t_max = max((len(s) for s in sequences), default=0)
    t_max = max(t_max, 1)
    out = np.zeros((len(sequences), t_max), dtype=np.int64)
    for r, seq in enumerate(sequences):
        out[r, : len(seq)] = seq
    return out


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def bce_loss(p: float | np.ndarray, y: float | np.ndarray) -> float | np.ndarray:
    """Binary cross-entropy with probabilities clamped to [eps, 1-eps]."""
    p = np.clip(p, BCE_EPSILON, 1.0 - BCE_EPSILON)
    val = -(np.asarray(y) * np.log(p) + (1.0 - np.asarray(y)) * np.log(1.0 - p))
    return float(val) if np.ndim(val) == 0 else val


def forward_batch(model: BiLstmModel, ids: np.ndarray) -> tuple[np.ndarray, dict]:
    """Probabilities for a padded id batch (B, T), plus a backward cache."""
    ids = np.asarray(ids, dtype=np.int64)
    if ids.ndim != 2 or ids.shape[1] == 0:
        raise ValueError("ids must be a non-empty (batch, time) array")
    mask = ids != PAD_ID
    x = model.embedding[ids]
    h_fwd, cache_f = lstm_sequence_forward(x, mask, model.forward_lstm, reverse=False)
    h_bwd, cache_b = lstm_sequence_forward(x, mask, model.backward_lstm, reverse=True)
    concat = np.concatenate([h_fwd, h_bwd], axis=1)
    a1 = concat @ model.dense1_w.T + model.dense1_b
    z2 = a1 @ model.dense2_w.T + model.dense2_b
    p = _sigmoid(z2[:, 0])
    cache = {
        "ids": ids,
        "cache_f": cache_f,
        "cache_b": cache_b,
        "concat": concat,
        "a1": a1,
        "p": p,
    }
    return p, cache


def bilstm_forward(model: BiLstmModel, token_ids: Sequence[int]) -> float:
    """Probability of the positive class for one id sequence."""
    if len(token_ids) == 0:
        raise ValueError("empty input")
    ids = pad_batch([list(token_ids)[: model.max_sequence_length]])
    p, _ = forward_batch(model, ids)
    return float(p[0])


def predict_proba(model: BiLstmModel, token_batches: Sequence[Sequence[str]]) -> np.ndarray:
    """Probabilities for raw token sequences, batched for speed."""
    encoded = [encode_tokens(model.vocab, toks, model.max_sequence_length)
               for toks in token_batches]
    out = np.empty(len(encoded))
    step = 256
    for start in range(0, len(encoded), step):
        chunk = encoded[start : start + step]
        p, _ = forward_batch(model, pad_batch(chunk))
        out[start : start + len(chunk)] = p
    return out


def backward(
    model: BiLstmModel, ids: np.ndarray, labels: np.ndarray
) -> tuple[float, dict[str, np.ndarray], np.ndarray]:
    """Mean BCE over the batch and its exact gradients.

    Returns (loss, grads keyed like param_dict, probabilities). The
    sigmoid+BCE composite gradient dz2 = (p - y)/B keeps the backward
    pass stable even when probabilities saturate.
    """
    labels = np.asarray(labels, dtype=np.float64)
    p, cache = forward_batch(model, ids)
    b = len(labels)
    loss = float(np.mean(bce_loss(p, labels)))
    dz2 = ((p - labels) / b)[:, None]
    a1 = cache["a1"]
    concat = cache["concat"]
    grads: dict[str, np.ndarray] = {}
    grads["dense2.w"] = dz2.T @ a1
    grads["dense2.b"] = dz2.sum(axis=0)
    da1 = dz2 @ model.dense2_w
    grads["dense1.w"] = da1.T @ concat
    grads["dense1.b"] = da1.sum(axis=0)
    dconcat = da1 @ model.dense1_w
    h = model.hidden_size
    g_f, dx_f = lstm_sequence_backward(dconcat[:, :h], cache["cache_f"])
    g_b, dx_b = lstm_sequence_backward(dconcat[:, h:], cache["cache_b"])
    for name, val in g_f.items():
        grads[f"fwd.{name}"] = val
    for name, val in g_b.items():
        grads[f"bwd.{name}"] = val
    if model.embedding_trainable:
        d_emb = np.zeros_like(model.embedding)
        dx = dx_f + dx_b
        np.add.at(d_emb, cache["ids"].ravel(), dx.reshape(-1, dx.shape[-1]))
        d_emb[PAD_ID] = 0.0
        grads["embedding"] = d_emb
    return loss, grads, p


def model_fingerprint(model: BiLstmModel) -> str:
    """Fingerprint of the vocabulary the model's id space is bound to."""
    return vocab_fingerprint(model.vocab, model.embedding_dim)
