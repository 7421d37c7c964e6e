"""Pretrained-transformer fine-tuning harness.

Companion package to wsdetect: fine-tunes BERT-style sequence
classifiers on the same text,label CSV datasets and writes evaluation
reports in the same CSV layout, so both model families can be compared
side by side. The two packages share file formats and the seeded split
recipe, not code.
"""

from bert_harness.compare import compare_reports
from bert_harness.config import BATCH_PRESETS, MODEL_NAMES, FinetuneConfig
from bert_harness.data import load_dataset, stratified_split_indices
from bert_harness.finetune import (
    FinetuneError,
    finetune_and_eval,
    resolve_model,
    step_budget,
)
from bert_harness.reporting import (
    REPORT_COLUMNS,
    ReportRow,
    evaluate_scores,
    parse_report_csv,
    rank_auc,
    read_report_file,
    render_report_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BATCH_PRESETS",
    "MODEL_NAMES",
    "REPORT_COLUMNS",
    "FinetuneConfig",
    "FinetuneError",
    "ReportRow",
    "compare_reports",
    "evaluate_scores",
    "finetune_and_eval",
    "load_dataset",
    "parse_report_csv",
    "rank_auc",
    "read_report_file",
    "render_report_csv",
    "resolve_model",
    "step_budget",
    "stratified_split_indices",
    "__version__",
]
