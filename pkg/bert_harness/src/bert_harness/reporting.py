"""Evaluation metrics and the shared report CSV layout.

The column order, 5-decimal formatting, and degenerate-case flag
strings match the companion wsdetect package byte for byte, so report
files from either model family can be diffed, concatenated, or fed to
compare_reports interchangeably. Label 1 is the positive (hate) class;
0/0 ratios are reported as 0.0 and flagged rather than left as NaN.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
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
class ReportRow:
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


def rank_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """ROC AUC by average ranks; ties share the mean rank of their group."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ValueError("length mismatch")
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC undefined: both classes must be present")
    order = np.argsort(scores, kind="mergesort")
    sorted_scores = scores[order]
    starts = np.concatenate(([0], np.flatnonzero(np.diff(sorted_scores)) + 1))
    ends = np.concatenate((starts[1:], [len(scores)]))
    ranks = np.empty(len(scores), dtype=np.float64)
    for s, e in zip(starts, ends):
        ranks[order[s:e]] = 0.5 * (s + e - 1) + 1.0
    u = float(ranks[labels == 1].sum()) - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def evaluate_scores(
    model_id: str,
    dataset_id: str,
    scores: Sequence[float],
    labels: Sequence[int],
    threshold: float = 0.5,
) -> ReportRow:
    """Turn raw positive-class scores into one report row.

    Prediction is `score >= threshold`. Degenerate denominators produce
    0.0 plus a flag; the flag strings and their order are part of the
    shared format.
    """
    if len(scores) != len(labels):
        raise ValueError(f"length mismatch: {len(scores)} scores vs {len(labels)} labels")
    if not scores:
        raise ValueError("no examples")
    y = np.asarray(labels)
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be 0/1")
    preds = np.asarray(scores, dtype=np.float64) >= threshold
    tp = int(np.sum(preds & (y == 1)))
    fp = int(np.sum(preds & (y == 0)))
    fn = int(np.sum(~preds & (y == 1)))
    tn = int(np.sum(~preds & (y == 0)))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
    flags: list[str] = []
    if tp + fp == 0:
        flags.append("precision undefined (no positive predictions)")
    if tp + fn == 0:
        flags.append("hate class absent")
    if tn + fp == 0:
        flags.append("non-hate class absent")
    if precision + recall == 0.0 and "hate class absent" not in flags:
        flags.append("f1 undefined")
    try:
        auc = rank_auc(scores, labels)
    except ValueError:
        auc = 0.0
        flags.append("auc undefined (single class)")
    acc_hate = tp / (tp + fn) if tp + fn else 0.0
    acc_nonhate = tn / (tn + fp) if tn + fp else 0.0
    return ReportRow(
        model_id=model_id,
        dataset_id=dataset_id,
        precision=precision,
        recall=recall,
        f1=f1,
        auc=auc,
        accuracy_hate=acc_hate,
        accuracy_nonhate=acc_nonhate,
        accuracy=(tp + tn) / len(labels),
        flags=tuple(flags),
    )


def render_report_csv(rows: Sequence[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for r in rows:
        cells = [r.model_id, r.dataset_id]
        cells += [f"{getattr(r, name):.5f}" for name in _METRIC_FIELDS]
        cells.append(";".join(r.flags))
        writer.writerow(cells)
    return buf.getvalue()


def parse_report_csv(text: str) -> list[ReportRow]:
    """Inverse of render_report_csv; also reads wsdetect report files."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != REPORT_COLUMNS:
        raise ValueError(f"unexpected report header: {header}")
    out: list[ReportRow] = []
    for row in reader:
        if not row:
            continue
        if len(row) != len(REPORT_COLUMNS):
            raise ValueError(f"report row has {len(row)} cells: {row}")
        values = [float(cell) for cell in row[2:9]]
        out.append(
            ReportRow(
                model_id=row[0],
                dataset_id=row[1],
                **dict(zip(_METRIC_FIELDS, values)),
                flags=tuple(f for f in row[9].split(";") if f),
            )
        )
    return out


def read_report_file(path: str | Path) -> list[ReportRow]:
    return parse_report_csv(Path(path).read_text(encoding="utf-8"))
