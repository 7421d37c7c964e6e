"""Toolkit for detecting white-supremacist speech in short social-media text.

Everything numerical is implemented from scratch on top of numpy: CBOW
word embeddings with negative sampling, a bidirectional LSTM classifier
trained with Adam, a logistic-regression baseline over averaged embeddings,
annotation aggregation (majority voting, Cohen's kappa), dataset balancing
and splitting, and binary-classification metrics with CSV/markdown reports.

The ``wsdetect`` command line wires the pieces into a reproducible pipeline;
see the ``demos/`` scripts for narrative walkthroughs of each capability.
"""

from wsdetect.preprocess import PreprocessConfig, preprocess, preprocess_all
from wsdetect.embeddings import (
    EmbeddingMatrix,
    Vocabulary,
    average_embedding,
    build_vocab,
    cosine_similarity,
    load_embeddings,
    most_similar,
    save_embeddings,
    vocab_fingerprint,
)
from wsdetect.cbow import CbowConfig, train_cbow
from wsdetect.datasets import (
    UNDECIDABLE,
    AnnotationRecord,
    FourLabel,
    KappaResult,
    LabeledExample,
    average_pairwise_kappa,
    cohen_kappa,
    collapse_labels,
    combine_and_balance,
    load_labeled_csv,
    majority_vote,
    save_labeled_csv,
    stratified_split,
    stratified_split_indices,
)
from wsdetect.metrics import (
    ConfusionCounts,
    EvalReport,
    build_report,
    confusion,
    parse_report,
    per_class_accuracy,
    prf1,
    render_report,
    roc_auc,
)
from wsdetect.baseline import LogRegModel, lr_predict, lr_predict_batch, lr_train
from wsdetect.lstm import LstmParams, LstmState, lstm_cell_forward
from wsdetect.model import BiLstmModel, bce_loss, bilstm_forward, init_bilstm
from wsdetect.optim import AdamHyper, AdamState, adam_step
from wsdetect.training import TrainConfig, train
from wsdetect.checkpoint import load_checkpoint, save_checkpoint

__version__ = "0.1.0"

__all__ = [
    "AdamHyper",
    "AdamState",
    "AnnotationRecord",
    "BiLstmModel",
    "CbowConfig",
    "ConfusionCounts",
    "EmbeddingMatrix",
    "EvalReport",
    "FourLabel",
    "KappaResult",
    "LabeledExample",
    "LogRegModel",
    "LstmParams",
    "LstmState",
    "PreprocessConfig",
    "TrainConfig",
    "UNDECIDABLE",
    "Vocabulary",
    "adam_step",
    "average_embedding",
    "average_pairwise_kappa",
    "bce_loss",
    "bilstm_forward",
    "build_report",
    "build_vocab",
    "cohen_kappa",
    "collapse_labels",
    "combine_and_balance",
    "confusion",
    "cosine_similarity",
    "init_bilstm",
    "load_checkpoint",
    "load_embeddings",
    "load_labeled_csv",
    "lr_predict",
    "lr_predict_batch",
    "lr_train",
    "lstm_cell_forward",
    "majority_vote",
    "most_similar",
    "parse_report",
    "per_class_accuracy",
    "preprocess",
    "preprocess_all",
    "prf1",
    "render_report",
    "roc_auc",
    "save_checkpoint",
    "save_embeddings",
    "save_labeled_csv",
    "stratified_split",
    "stratified_split_indices",
    "train",
    "train_cbow",
    "vocab_fingerprint",
]
