"""Continuous-bag-of-words embedding training with negative sampling.

A center word is predicted from the mean of its context vectors inside a
window; the objective contrasts the true center against k noise words drawn
from the unigram distribution raised to the 3/4 power. Plain SGD over
(context, target) pairs with a linear learning-rate decay down to a tenth
of the starting rate.

Training is single threaded and, given a seed, bit-reproducible: sentences
are visited in corpus order and every random draw (subsampling, negative
samples, dynamic windows in stochastic mode) comes from one seeded
generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from wsdetect.embeddings import EmbeddingMatrix, Vocabulary, build_vocab

NOISE_POWER = 0.75


@dataclass(frozen=True)
class CbowConfig:
    dim: int = 300
    window: int = 5
    negative_samples: int = 5
    epochs: int = 5
    initial_lr: float = 0.025
    min_count: int = 5
    subsample_threshold: float = 1e-3  # 0 disables subsampling
    seed: int = 1

    def __post_init__(self) -> None:
        if self.dim < 1 or self.window < 1 or self.negative_samples < 1:
            raise ValueError("dim, window and negative_samples must all be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.initial_lr < 0:
            raise ValueError("initial_lr must not be negative")
        if self.subsample_threshold < 0:
            raise ValueError("subsample_threshold must be >= 0")


def cbow_pair_loss(
    w_in: np.ndarray,
    w_out: np.ndarray,
    context_ids: list[int],
    target_id: int,
    negative_ids: list[int],
) -> tuple[float, dict[int, np.ndarray], dict[int, np.ndarray]]:
    """Loss and exact gradients for a single (context, target) pair.

    Returns (loss, input-vector gradients by row id, output-vector gradients
    by row id). Repeated ids accumulate. Kept separate from the training
    loop so the gradient can be checked against finite differences.
    """
    h = w_in[context_ids].mean(axis=0)
    u_t = w_out[target_id]
    s_pos = _sigmoid(u_t @ h)
    loss = -_log(s_pos)
    grad_h = (s_pos - 1.0) * u_t
    grad_out: dict[int, np.ndarray] = {target_id: (s_pos - 1.0) * h}
    for nid in negative_ids:
        u_n = w_out[nid]
        s_neg = _sigmoid(u_n @ h)
        loss -= _log(1.0 - s_neg)
        grad_h = grad_h + s_neg * u_n
        if nid in grad_out:
            grad_out[nid] = grad_out[nid] + s_neg * h
        else:
            grad_out[nid] = s_neg * h
    grad_in: dict[int, np.ndarray] = {}
    per_context = grad_h / len(context_ids)
    for cid in context_ids:
        if cid in grad_in:
            grad_in[cid] = grad_in[cid] + per_context
        else:
            grad_in[cid] = per_context.copy()
    return float(loss), grad_in, grad_out


def train_cbow(
    corpus: Iterable[list[str]],
    cfg: CbowConfig,
    deterministic: bool = True,
    on_epoch: Callable[[int, float], None] | None = None,
) -> EmbeddingMatrix:
    """Train input-side word vectors over a corpus of token sequences.

    ``deterministic=True`` (the default) uses a fixed context window;
    otherwise the window size is drawn uniformly from 1..window per center
    word, as the classic tooling does. ``on_epoch`` receives
    (epoch_index, mean pair loss) after each pass.
    """
    sentences = [s for s in corpus]
    vocab = build_vocab(sentences, cfg.min_count)
    if len(vocab) == 0:
        raise ValueError("empty vocabulary after min_count filtering")
    encoded = [
        [vocab.token_to_id[t] for t in sent if t in vocab.token_to_id]
        for sent in sentences
    ]
    encoded = [sent for sent in encoded if sent]
    total_positions = sum(len(sent) for sent in encoded)
    if total_positions < 2:
        raise ValueError("insufficient context")

    rng = np.random.default_rng(cfg.seed)
    w_in = (rng.random((len(vocab), cfg.dim)) - 0.5) / cfg.dim
    w_out = np.zeros((len(vocab), cfg.dim), dtype=np.float64)

    counts = np.asarray(vocab.counts, dtype=np.float64)
    noise = counts**NOISE_POWER
    noise /= noise.sum()
    keep_prob = _keep_probabilities(counts, cfg.subsample_threshold)

    total_budget = max(1, cfg.epochs * total_positions)
    processed = 0
    any_pair = False
    for epoch in range(cfg.epochs):
        loss_sum = 0.0
        pair_count = 0
        for sent in encoded:
            if keep_prob is None:
                kept = sent
            else:
                draws = rng.random(len(sent))
                kept = [wid for wid, d in zip(sent, draws) if d < keep_prob[wid]]
            n = len(kept)
            for pos in range(n):
                processed += 1
                window = (
                    cfg.window
                    if deterministic
                    else int(rng.integers(1, cfg.window + 1))
                )
                lo = max(0, pos - window)
                context = kept[lo:pos] + kept[pos + 1 : pos + window + 1]
                if not context:
                    continue
                target = kept[pos]
                negatives = _draw_negatives(
                    rng, noise, target, cfg.negative_samples
                )
                loss, grad_in, grad_out = cbow_pair_loss(
                    w_in, w_out, context, target, negatives
                )
                frac = min(1.0, processed / total_budget)
                lr = cfg.initial_lr * (1.0 - 0.9 * frac)
                for rid, g in grad_in.items():
                    w_in[rid] -= lr * g
                for rid, g in grad_out.items():
                    w_out[rid] -= lr * g
                loss_sum += loss
                pair_count += 1
                any_pair = True
        if on_epoch is not None:
            mean = loss_sum / pair_count if pair_count else float("nan")
            on_epoch(epoch, mean)
    if not any_pair:
        raise ValueError("insufficient context")
    return EmbeddingMatrix(vocab=vocab, vectors=w_in)


def _keep_probabilities(
    counts: np.ndarray, threshold: float
) -> np.ndarray | None:
    """Per-id keep probability for frequent-word subsampling; None disables."""
    if threshold <= 0:
        return None
    freq = counts / counts.sum()
    with np.errstate(divide="ignore"):
        keep = np.sqrt(threshold / freq)
    return np.clip(keep, 0.0, 1.0)


def _draw_negatives(
    rng: np.random.Generator, noise: np.ndarray, target: int, k: int
) -> list[int]:
    # Redraw collisions with the target; give up after a bounded number of
    # attempts so one-word vocabularies cannot loop forever.
    out: list[int] = []
    attempts = 0
    while len(out) < k and attempts < 10 * k:
        cand = int(rng.choice(len(noise), p=noise))
        attempts += 1
        if cand != target:
            out.append(cand)
    return out


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + np.exp(-x))
    z = np.exp(x)
    return z / (1.0 + z)


def _log(x: float) -> float:
    return float(np.log(max(x, 1e-10)))
