"""Self-describing binary checkpoints for trained models.

Layout (all little-endian, written in one pass, no timestamps, so equal
content produces byte-identical files):

    line 1: magic "WSCKPT1"
    line 2: one JSON object, sorted keys: {"arrays": [[name, shape,
            dtype], ...] sorted by name, "meta": {...}}
    body:   raw C-order bytes of each array, in header order

The meta block records the model kind, its config scalars, and the
fingerprint of the vocabulary the model's id space was built against.
Loading checks that fingerprint against the embeddings file supplied at
prediction time and refuses mismatches.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .baseline import LogRegModel
from .embeddings import EmbeddingMatrix, vocab_fingerprint
from .lstm import GATE_NAMES, LstmParams
from .model import BiLstmModel

MAGIC = b"WSCKPT1"

_ALLOWED_DTYPES = {"<f8", "<i8"}


class CompatibilityError(Exception):
    """Checkpoint and supplied vocabulary/embeddings do not match."""


def save_checkpoint(path: str | Path, meta: dict, arrays: dict[str, np.ndarray]) -> None:
    entries = []
    for name in sorted(arrays):
        a = np.ascontiguousarray(arrays[name])
        dtype = a.dtype.newbyteorder("<").str
        if dtype not in _ALLOWED_DTYPES:
            raise ValueError(f"unsupported dtype {a.dtype} for array {name!r}")
        entries.append([name, list(a.shape), dtype])
    header = json.dumps(
        {"arrays": entries, "meta": meta}, sort_keys=True, separators=(",", ":")
    )
    with open(path, "wb") as fh:
        fh.write(MAGIC + b"\n")
        fh.write(header.encode("utf-8") + b"\n")
        for name, _, dtype in entries:
            fh.write(np.ascontiguousarray(arrays[name], dtype=dtype).tobytes())


def load_checkpoint(path: str | Path) -> tuple[dict, dict[str, np.ndarray]]:
    with open(path, "rb") as fh:
        magic = fh.readline().rstrip(b"\n")
        if magic != MAGIC:
            raise ValueError(f"{path}: not a checkpoint file (bad magic)")
        header = json.loads(fh.readline().decode("utf-8"))
        body = fh.read()
    arrays: dict[str, np.ndarray] = {}
    offset = 0
    for name, shape, dtype in header["arrays"]:
        count = int(np.prod(shape, dtype=np.int64)) if shape else 1
        nbytes = count * np.dtype(dtype).itemsize
        chunk = body[offset : offset + nbytes]
        if len(chunk) != nbytes:
            raise ValueError(f"{path}: truncated checkpoint (array {name!r})")
        arrays[name] = np.frombuffer(chunk, dtype=dtype).reshape(shape).copy()
        offset += nbytes
    if offset != len(body):
        raise ValueError(f"{path}: trailing bytes after last array")
    return header["meta"], arrays


def save_bilstm(path: str | Path, model: BiLstmModel) -> None:
    meta = {
        "kind": "bilstm",
        "format_version": 1,
        "hidden_size": model.hidden_size,
        "dense1_size": int(model.dense1_w.shape[0]),
        "embedding_dim": model.embedding_dim,
        "max_sequence_length": model.max_sequence_length,
        "embedding_trainable": model.embedding_trainable,
        "vocab_fingerprint": vocab_fingerprint(model.vocab, model.embedding_dim),
    }
    arrays: dict[str, np.ndarray] = {"embedding": model.embedding}
    arrays.update(model.forward_lstm.as_dict("fwd"))
    arrays.update(model.backward_lstm.as_dict("bwd"))
    arrays["dense1.w"] = model.dense1_w
    arrays["dense1.b"] = model.dense1_b
    arrays["dense2.w"] = model.dense2_w
    arrays["dense2.b"] = model.dense2_b
    save_checkpoint(path, meta, arrays)


def _lstm_from(arrays: dict[str, np.ndarray], prefix: str) -> LstmParams:
    kw = {}
    for g in GATE_NAMES:
        for kind in ("w", "u", "b"):
            kw[f"{kind}_{g}"] = arrays[f"{prefix}.{kind}_{g}"]
    return LstmParams(**kw)


def load_bilstm(path: str | Path, embeddings: EmbeddingMatrix) -> BiLstmModel:
    """Rebuild a model, binding its id space to the given embeddings file.

    The checkpoint stores the (possibly fine-tuned) embedding table but
    only a fingerprint of the vocabulary; the token list itself comes
    from the embeddings file, which must be the one used at training.
    """
    meta, arrays = load_checkpoint(path)
    if meta.get("kind") != "bilstm":
        raise ValueError(f"{path}: checkpoint kind {meta.get('kind')!r}, expected 'bilstm'")
    expected = vocab_fingerprint(embeddings.vocab, embeddings.dim)
    if meta["vocab_fingerprint"] != expected:
        raise CompatibilityError(
            f"{path}: vocabulary fingerprint {meta['vocab_fingerprint'][:12]}... does not "
            f"match the supplied embeddings ({expected[:12]}...); "
            "pass the embeddings file the model was trained with"
        )
    return BiLstmModel(
        vocab=embeddings.vocab,
        embedding=arrays["embedding"],
        forward_lstm=_lstm_from(arrays, "fwd"),
        backward_lstm=_lstm_from(arrays, "bwd"),
        dense1_w=arrays["dense1.w"],
        dense1_b=arrays["dense1.b"],
        dense2_w=arrays["dense2.w"],
        dense2_b=arrays["dense2.b"],
        max_sequence_length=int(meta["max_sequence_length"]),
        embedding_trainable=bool(meta["embedding_trainable"]),
    )


def save_logreg(path: str | Path, model: LogRegModel, vocab_fp: str) -> None:
    meta = {
        "kind": "logreg",
        "format_version": 1,
        "trained_on": model.trained_on,
        "vocab_fingerprint": vocab_fp,
    }
    arrays = {"weights": model.weights, "bias": np.asarray([model.bias])}
    save_checkpoint(path, meta, arrays)


def load_logreg(path: str | Path, embeddings: EmbeddingMatrix | None = None) -> LogRegModel:
    meta, arrays = load_checkpoint(path)
    if meta.get("kind") != "logreg":
        raise ValueError(f"{path}: checkpoint kind {meta.get('kind')!r}, expected 'logreg'")
    if embeddings is not None:
        expected = vocab_fingerprint(embeddings.vocab, embeddings.dim)
        if meta["vocab_fingerprint"] != expected:
            raise CompatibilityError(
                f"{path}: vocabulary fingerprint does not match the supplied embeddings; "
                "pass the embeddings file the model was trained with"
            )
    return LogRegModel(
        weights=arrays["weights"],
        bias=float(arrays["bias"][0]),
        trained_on=str(meta.get("trained_on", "")),
    )
