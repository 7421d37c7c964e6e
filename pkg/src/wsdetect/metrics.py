"""Binary-classification metrics and CSV/markdown report rendering.

The positive class is label 1 (white-supremacist speech). Degenerate
ratios (0/0) are reported as 0.0 and flagged instead of propagating NaN.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

REPORT_COLUMNS = [
    "Method",
    "Dataset",
    "Precision",
    "Recall",
    "F1-score",
    "AUC",
    "Accuracy(Hate)",
    "Accuracy(non-Hate)",
    "Accuracy",
    "Flags",
]

_METRIC_FIELDS = [
    "precision",
    "recall",
    "f1",
    "auc",
    "accuracy_hate",
    "accuracy_nonhate",
    "accuracy",
]


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class EvalReport:
    """One row of the results table: a (model, dataset) pair's metrics."""

    model_id: str
    dataset_id: str
    precision: float
    recall: float
    f1: float
    auc: float
    accuracy_hate: float
    accuracy_nonhate: float
    accuracy: float
    flags: tuple[str, ...] = field(default_factory=tuple)


def confusion(preds: Sequence[int], labels: Sequence[int]) -> ConfusionCounts:
    if len(preds) != len(labels):
        raise ValueError(f"length mismatch: {len(preds)} preds vs {len(labels)} labels")
    if len(preds) == 0:
        raise ValueError("no examples")
    tp = fp = fn = tn = 0
    for p, y in zip(preds, labels):
        if p not in (0, 1) or y not in (0, 1):
            raise ValueError(f"labels and predictions must be 0/1, got ({p}, {y})")
        if p == 1 and y == 1:
            tp += 1
        elif p == 1 and y == 0:
            fp += 1
        elif p == 0 and y == 1:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def prf1(c: ConfusionCounts) -> tuple[float, float, float]:
    """Precision, recall, F1 with the 0/0 -> 0 convention."""
    precision = c.tp / (c.tp + c.fp) if (c.tp + c.fp) else 0.0
    recall = c.tp / (c.tp + c.fn) if (c.tp + c.fn) else 0.0
    f1 = (
        2.0 * precision * recall / (precision + recall)
        if (precision + recall) > 0.0
        else 0.0
    )
    return precision, recall, f1


def roc_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Rank-based AUC: P(random positive scores above random negative),
    ties counted half. Errors when only one class is present."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ValueError("length mismatch")
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC undefined: both classes must be present")
    order = np.argsort(scores, kind="mergesort")
    ranks = np.empty(len(scores), dtype=np.float64)
    i = 0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0  # average rank, 1-based
        i = j + 1
    rank_sum_pos = float(ranks[labels == 1].sum())
    u = rank_sum_pos - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def per_class_accuracy(
    preds: Sequence[int], labels: Sequence[int]
) -> tuple[float, float, float]:
    """(hate accuracy, non-hate accuracy, overall accuracy).

    Hate accuracy is the positive-class recall tp/(tp+fn); non-hate accuracy
    is tn/(tn+fp). An absent class yields 0.0 (flagged by build_report).
    """
    c = confusion(preds, labels)
    acc_hate = c.tp / (c.tp + c.fn) if (c.tp + c.fn) else 0.0
    acc_nonhate = c.tn / (c.tn + c.fp) if (c.tn + c.fp) else 0.0
    return acc_hate, acc_nonhate, (c.tp + c.tn) / c.total


def build_report(
    model_id: str,
    dataset_id: str,
    scores: Sequence[float],
    labels: Sequence[int],
    threshold: float = 0.5,
) -> EvalReport:
    """Assemble the full metric row from raw scores, flagging degeneracies."""
    preds = [1 if s >= threshold else 0 for s in scores]
    c = confusion(preds, labels)
    precision, recall, f1 = prf1(c)
    flags: list[str] = []
    if c.tp + c.fp == 0:
        flags.append("precision undefined (no positive predictions)")
    if c.tp + c.fn == 0:
        flags.append("hate class absent")
    if c.tn + c.fp == 0:
        flags.append("non-hate class absent")
    if precision + recall == 0.0 and "hate class absent" not in flags:
        flags.append("f1 undefined")
    try:
        auc = roc_auc(scores, labels)
    except ValueError:
        auc = 0.0
        flags.append("auc undefined (single class)")
    acc_hate, acc_nonhate, accuracy = per_class_accuracy(preds, labels)
    return EvalReport(
        model_id=model_id,
        dataset_id=dataset_id,
        precision=precision,
        recall=recall,
        f1=f1,
        auc=auc,
        accuracy_hate=acc_hate,
        accuracy_nonhate=acc_nonhate,
        accuracy=accuracy,
        flags=tuple(flags),
    )


def render_report(reports: Sequence[EvalReport], fmt: str = "csv") -> str:
    """Render rows in the fixed column order with 5-decimal formatting."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for r in reports:
            writer.writerow(_row_cells(r))
        return buf.getvalue()
    if fmt == "markdown":
        lines = [
            "| " + " | ".join(REPORT_COLUMNS) + " |",
            "|" + "|".join(["---"] * len(REPORT_COLUMNS)) + "|",
        ]
        for r in reports:
            lines.append("| " + " | ".join(_row_cells(r)) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def parse_report(text: str) -> list[EvalReport]:
    """Inverse of render_report(..., "csv"); render(parse(t)) == t."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != REPORT_COLUMNS:
        raise ValueError(f"unexpected report header: {header}")
    out: list[EvalReport] = []
    for row in reader:
        if not row:
            continue
        if len(row) != len(REPORT_COLUMNS):
            raise ValueError(f"report row has {len(row)} cells: {row}")
        values = [float(cell) for cell in row[2:9]]
        flags = tuple(f for f in row[9].split(";") if f)
        out.append(
            EvalReport(
                model_id=row[0],
                dataset_id=row[1],
                **dict(zip(_METRIC_FIELDS, values)),
                flags=flags,
            )
        )
    return out


def _row_cells(r: EvalReport) -> list[str]:
    cells = [r.model_id, r.dataset_id]
    cells += [f"{getattr(r, name):.5f}" for name in _METRIC_FIELDS]
    cells.append(";".join(r.flags))
    return cells
