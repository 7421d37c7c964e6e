"""Fine-tune a pretrained BERT-style sequence classifier on a labeled CSV.

The dataset is split 80/20 with the shared seeded recipe, the model is
trained with AdamW through the classification head that sits on the
[CLS] position, and the held-out metrics are written as one report row
in the shared CSV format.

Weights are resolved strictly offline: either --model-path points at a
save_pretrained() directory, or the named size must already be in the
local cache. Nothing is downloaded implicitly; the error message says
how to fetch the weights instead.

Determinism is best effort. One process rerunning the same command on
the same device reproduces its report; the model runtime does not
promise bitwise equality beyond that.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator

import numpy as np
import torch

from bert_harness.config import FinetuneConfig
from bert_harness.data import load_dataset, stratified_split_indices
from bert_harness.reporting import ReportRow, evaluate_scores, render_report_csv

TEST_FRACTION = 0.2


class FinetuneError(Exception):
    """Unusable model or dataset; the message includes the suggested fix."""


def step_budget(epochs: float, n_train: int, batch_size: int) -> int:
    """Optimizer steps for a possibly fractional epoch count, at least 1."""
    return max(1, round(epochs * math.ceil(n_train / batch_size)))


def resolve_model(cfg: FinetuneConfig, model_path: str | Path | None = None):
    """Load tokenizer and classifier from a local directory or the local cache."""
    import transformers
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    transformers.logging.disable_progress_bar()
    source = str(model_path) if model_path is not None else cfg.model_name
    missing = FinetuneError(
        f"pretrained weights for {source!r} were not found locally; download "
        f"them first (for example: huggingface-cli download {source}) or pass "
        "--model-path DIR pointing at a save_pretrained() directory"
    )
    if model_path is not None and not (Path(model_path) / "config.json").is_file():
        raise missing
    try:
        tokenizer = AutoTokenizer.from_pretrained(source, local_files_only=True)
        model = AutoModelForSequenceClassification.from_pretrained(
            source, num_labels=2, local_files_only=True
        )
    except OSError as exc:
        raise missing from exc
    return tokenizer, model


@contextmanager
def oom_guard(batch_size: int) -> Iterator[None]:
    """Rewrap out-of-memory failures with the batch-halving suggestion."""
    try:
        yield
    except RuntimeError as exc:
        if "out of memory" not in str(exc).lower():
            raise
        half = max(1, batch_size // 2)
        raise FinetuneError(
            f"ran out of memory at batch_size={batch_size}; try --batch {half} "
            "(the defaults make the same cut, 32 down to 16, for the large model)"
        ) from exc


def finetune_and_eval(
    dataset_csv: str | Path,
    cfg: FinetuneConfig,
    out_csv: str | Path | None = None,
    model_path: str | Path | None = None,
) -> ReportRow:
    """Train on the 80% side, score the 20% side, emit one report row.

    Fractional epochs are honored as a step budget: the number of
    optimizer steps is epochs * ceil(n_train / batch_size) rounded to
    the nearest whole step, at least 1.
    """
    texts, labels = load_dataset(dataset_csv)
    if len(set(labels)) < 2:
        raise ValueError("dataset must contain both classes")
    train_idx, test_idx = stratified_split_indices(labels, TEST_FRACTION, cfg.seed)
    torch.manual_seed(cfg.seed)
    tokenizer, model = resolve_model(cfg, model_path)
    device = torch.device("cuda" if torch.cuda.is_available() else "cpu")
    model.to(device)

    def encode(rows: list[int]):
        return tokenizer(
            [texts[i] for i in rows],
            padding=True,
            truncation=True,
            max_length=cfg.max_seq_len,
            return_tensors="pt",
        ).to(device)

    total_steps = step_budget(cfg.epochs, len(train_idx), cfg.batch_size)
    optimizer = torch.optim.AdamW(model.parameters(), lr=cfg.learning_rate)
    model.train()
    step = 0
    epoch = 0
    while step < total_steps:
        order = np.random.default_rng([cfg.seed, epoch]).permutation(len(train_idx))
        for start in range(0, len(order), cfg.batch_size):
            if step >= total_steps:
                break
            rows = [train_idx[i] for i in order[start : start + cfg.batch_size]]
            batch = encode(rows)
            y = torch.tensor([labels[i] for i in rows], device=device)
            with oom_guard(cfg.batch_size):
                model(**batch, labels=y).loss.backward()
            optimizer.step()
            optimizer.zero_grad()
            step += 1
        epoch += 1

    model.eval()
    scores: list[float] = []
    with torch.no_grad():
        for start in range(0, len(test_idx), cfg.batch_size):
            rows = test_idx[start : start + cfg.batch_size]
            with oom_guard(cfg.batch_size):
                logits = model(**encode(rows)).logits
            scores.extend(torch.softmax(logits, dim=-1)[:, 1].tolist())

    row = evaluate_scores(
        f"bert-{cfg.model_size}",
        Path(dataset_csv).name,
        scores,
        [labels[i] for i in test_idx],
    )
    if out_csv is not None:
        Path(out_csv).write_text(render_report_csv([row]), encoding="utf-8")
    return row
