"""Labeled datasets: loading, annotation aggregation, balancing, splits.

Label conventions
-----------------
Binary labels are 0 (non-white-supremacist) and 1 (white-supremacist).
Annotation files carry one of four tokens per annotator; the collapse
rule maps explicit_ws and implicit_ws to 1, other_hate and neutral to 0.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

SOURCES = ("Stormfront", "Twitter", "Synthetic")

# Published Stormfront-corpus annotations use these tokens; classes that
# are not sentences about the target construct are excluded at load time.
STORMFRONT_LABEL_MAP: dict[str, int | None] = {
    "hate": 1,
    "noHate": 0,
    "relation": None,
    "skip": None,
}


class FourLabel(Enum):
    """Annotation scheme used by the three-judge labeling task."""

    EXPLICIT_WS = "explicit_ws"
    IMPLICIT_WS = "implicit_ws"
    OTHER_HATE = "other_hate"
    NEUTRAL = "neutral"


class Undecidable:
    """Sentinel result for a three-way annotation tie in uncollapsed mode."""

    def __repr__(self) -> str:
        return "UNDECIDABLE"


UNDECIDABLE = Undecidable()


@dataclass(frozen=True)
class AnnotationRecord:
    text: str
    labels: tuple[FourLabel, FourLabel, FourLabel]

    def __post_init__(self) -> None:
        if len(self.labels) != 3:
            raise ValueError(f"expected exactly 3 annotator labels, got {len(self.labels)}")
        for l in self.labels:
            if not isinstance(l, FourLabel):
                raise TypeError(f"not a FourLabel: {l!r}")


@dataclass(frozen=True)
class LabeledExample:
    text: str
    label: int
    source: str = "Twitter"

    def __post_init__(self) -> None:
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")


@dataclass(frozen=True)
class KappaResult:
    p_o: float
    p_e: float
    kappa: float


def collapse_labels(label: FourLabel) -> int:
    """Map the four-way scheme onto the binary target."""
    if label in (FourLabel.EXPLICIT_WS, FourLabel.IMPLICIT_WS):
        return 1
    return 0


def majority_vote(
    record: AnnotationRecord, collapse: bool = True, source: str = "Twitter"
) -> LabeledExample | Undecidable:
    """Aggregate three annotator labels into one example.

    With collapse=True the labels are binarized first, so three votes
    always produce a majority. Without collapsing, a 1-1-1 tie over the
    four-way scheme is returned as UNDECIDABLE; otherwise the winning
    four-way label is binarized for the output example.
    """
    if collapse:
        votes = [collapse_labels(l) for l in record.labels]
        label = 1 if sum(votes) >= 2 else 0
        return LabeledExample(text=record.text, label=label, source=source)
    counts: dict[FourLabel, int] = {}
    for l in record.labels:
        counts[l] = counts.get(l, 0) + 1
    best = max(counts.values())
    if best == 1:
        return UNDECIDABLE
    winner = next(l for l in record.labels if counts[l] == best)
    return LabeledExample(text=record.text, label=collapse_labels(winner), source=source)


def cohen_kappa(a: Sequence, b: Sequence) -> KappaResult:
    """Cohen's kappa for two label sequences over a shared alphabet.

    p_o is the fraction of positions where the sequences agree, p_e the
    chance agreement from the two marginal distributions. Perfect
    agreement with degenerate marginals (p_e = 1) is defined as kappa 1.
    """
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if len(a) == 0:
        raise ValueError("empty sequences")
    n = len(a)
    p_o = sum(1 for x, y in zip(a, b) if x == y) / n
    marg_a: dict = {}
    marg_b: dict = {}
    for x in a:
        marg_a[x] = marg_a.get(x, 0) + 1
    for y in b:
        marg_b[y] = marg_b.get(y, 0) + 1
    p_e = sum(marg_a[k] * marg_b.get(k, 0) for k in marg_a) / (n * n)
    if p_e >= 1.0:
        kappa = 1.0
    else:
        kappa = (p_o - p_e) / (1.0 - p_e)
    return KappaResult(p_o=p_o, p_e=p_e, kappa=kappa)


def average_pairwise_kappa(
    records: Sequence[AnnotationRecord],
    label_map: Callable[[FourLabel], object] | None = None,
) -> float:
    """Mean of the three pairwise Cohen's kappas between annotators.

    label_map, when given, is applied to every label first (pass
    collapse_labels for the binary agreement figure).
    """
    if not records:
        raise ValueError("no annotation records")
    columns: list[list] = [[], [], []]
    for r in records:
        for i in range(3):
            l = r.labels[i]
            columns[i].append(label_map(l) if label_map is not None else l)
    pairs = [(0, 1), (1, 2), (0, 2)]
    return float(np.mean([cohen_kappa(columns[i], columns[j]).kappa for i, j in pairs]))


def combine_and_balance(
    datasets: Sequence[Sequence[LabeledExample]], seed: int = 1
) -> list[LabeledExample]:
    """Concatenate datasets and downsample the majority class.

    All minority-class examples are kept; the majority class is sampled
    uniformly without replacement down to the same count, then the whole
    result is shuffled. Both steps draw from default_rng(seed).
    """
    combined = [ex for ds in datasets for ex in ds]
    pos = [ex for ex in combined if ex.label == 1]
    neg = [ex for ex in combined if ex.label == 0]
    if not pos or not neg:
        raise ValueError("balancing requires both classes to be present")
    m = min(len(pos), len(neg))
    rng = np.random.default_rng(seed)
    if len(pos) > m:
        keep = sorted(rng.choice(len(pos), size=m, replace=False).tolist())
        pos = [pos[i] for i in keep]
    elif len(neg) > m:
        keep = sorted(rng.choice(len(neg), size=m, replace=False).tolist())
        neg = [neg[i] for i in keep]
    out = pos + neg
    order = rng.permutation(len(out))
    return [out[i] for i in order]


def stratified_split_indices(
    labels: Sequence[int],
    test_fraction: float,
    seed: int = 1,
    stratify: bool = True,
) -> tuple[list[int], list[int]]:
    """Deterministic train/test index partition.

    Stratified mode: for each class value in ascending order, collect the
    indices of that class in input order, draw default_rng(seed)'s
    permutation of them, and send the first floor(n_class * f + 0.5) to
    the test side. Both index lists come back sorted, so the same recipe
    applied elsewhere to the same rows reproduces the split exactly.
    stratify=False applies one permutation over all indices instead.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    n = len(labels)
    test_idx: list[int] = []
    if stratify:
        for c in sorted(set(labels)):
            members = [i for i, label in enumerate(labels) if label == c]
            n_test = int(np.floor(len(members) * test_fraction + 0.5))
            order = rng.permutation(len(members))
            test_idx.extend(members[i] for i in order[:n_test])
    else:
        n_test = int(np.floor(n * test_fraction + 0.5))
        order = rng.permutation(n)
        test_idx.extend(order[:n_test].tolist())
    test_set = set(test_idx)
    train = [i for i in range(n) if i not in test_set]
    return train, sorted(test_set)


def stratified_split(
    data: Sequence[LabeledExample],
    test_fraction: float,
    seed: int = 1,
    stratify: bool = True,
) -> tuple[list[LabeledExample], list[LabeledExample]]:
    """stratified_split_indices applied to LabeledExample rows."""
    train_idx, test_idx = stratified_split_indices(
        [ex.label for ex in data], test_fraction, seed, stratify=stratify
    )
    return [data[i] for i in train_idx], [data[i] for i in test_idx]


def load_labeled_csv(
    path: str | Path,
    schema: str = "labeled",
    source: str = "Twitter",
    label_map: dict[str, int | None] | None = None,
) -> list[LabeledExample] | list[AnnotationRecord]:
    """Read a UTF-8 CSV dataset with a header row.

    schema="labeled" expects columns text,label. Label tokens are looked
    up in label_map (default {"0": 0, "1": 1}); tokens mapped to None are
    skipped, unmapped tokens raise with the offending line number.
    schema="annotations" expects text,ann1,ann2,ann3 with the four-way
    tokens and returns AnnotationRecords.
    """
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        return []
    header = rows[0]
    if schema == "labeled":
        if header != ["text", "label"]:
            raise ValueError(f"{path}: expected header text,label, got {header}")
        mapping = {"0": 0, "1": 1} if label_map is None else label_map
        examples: list[LabeledExample] = []
        for lineno, row in enumerate(rows[1:], start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            text, token = row
            if token not in mapping:
                raise ValueError(f"{path}:{lineno}: unknown label token {token!r}")
            label = mapping[token]
            if label is None:
                continue
            examples.append(LabeledExample(text=text, label=label, source=source))
        return examples
    if schema == "annotations":
        if header != ["text", "ann1", "ann2", "ann3"]:
            raise ValueError(f"{path}: expected header text,ann1,ann2,ann3, got {header}")
        token_map = {l.value: l for l in FourLabel}
        records: list[AnnotationRecord] = []
        for lineno, row in enumerate(rows[1:], start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 columns, got {len(row)}")
            text = row[0]
            labels = []
            for token in row[1:]:
                if token not in token_map:
                    raise ValueError(f"{path}:{lineno}: unknown label token {token!r}")
                labels.append(token_map[token])
            records.append(AnnotationRecord(text=text, labels=tuple(labels)))
        return records
    raise ValueError(f"unknown schema {schema!r}")


def save_labeled_csv(path: str | Path, examples: Sequence[LabeledExample]) -> None:
    """Write examples in the text,label layout load_labeled_csv reads."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["text", "label"])
        for ex in examples:
            writer.writerow([ex.text, str(ex.label)])
