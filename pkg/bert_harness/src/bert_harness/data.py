"""Dataset loading and splitting against the shared CSV contract.

The file layout (``text,label`` header, label tokens ``0``/``1``) and
the seeded split recipe below are the interchange contract with the
companion wsdetect package. Both are reimplemented here from that
contract rather than imported, so this harness runs on its own; given
the same file and seed, both packages carve out the same test rows.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

import numpy as np


def load_dataset(path: str | Path) -> tuple[list[str], list[int]]:
    """Read a text,label CSV into parallel text and 0/1 label lists."""
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["text", "label"]:
        head = rows[0] if rows else None
        raise ValueError(f"{path}: expected header text,label, got {head}")
    texts: list[str] = []
    labels: list[int] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise ValueError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
        if row[1] not in ("0", "1"):
            raise ValueError(f"{path}:{lineno}: unknown label token {row[1]!r}")
        texts.append(row[0])
        labels.append(int(row[1]))
    return texts, labels


def stratified_split_indices(
    labels: Sequence[int], test_fraction: float, seed: int = 1
) -> tuple[list[int], list[int]]:
    """Seeded stratified train/test partition, shared with wsdetect.

    The recipe: one default_rng(seed) drives everything. For each class
    value in ascending order, collect that class's indices in input
    order, draw the generator's permutation of them, and send the first
    floor(n_class * test_fraction + 0.5) to the test side. Both lists
    come back sorted. Any implementation following these steps with the
    same generator reproduces the split exactly.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    test_idx: list[int] = []
    for c in sorted(set(labels)):
        members = [i for i, label in enumerate(labels) if label == c]
        n_test = int(np.floor(len(members) * test_fraction + 0.5))
        order = rng.permutation(len(members))
        test_idx.extend(members[i] for i in order[:n_test])
    test_set = set(test_idx)
    train = [i for i in range(len(labels)) if i not in test_set]
    return train, sorted(test_set)
