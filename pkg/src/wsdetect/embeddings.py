"""Word-vector containers, similarity queries, and the text file format.

The on-disk format is the interchange one: an optional ``"<vocab> <dim>"``
header line, then one word per line followed by its vector components,
space separated, UTF-8. Externally trained vector files (GloVe-style,
headerless) load through the same reader.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np


@dataclass
class Vocabulary:
    """Token/id bijection with per-token corpus frequencies.

    Ids are contiguous ``0..len-1``, assigned by descending count with
    alphabetical tie-breaks so rebuilding from the same corpus is stable.
    """

    token_to_id: dict[str, int] = field(default_factory=dict)
    id_to_token: list[str] = field(default_factory=list)
    counts: list[int] = field(default_factory=list)
    min_count: int = 1

    def __len__(self) -> int:
        return len(self.id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def id_of(self, token: str) -> int:
        return self.token_to_id[token]


def build_vocab(corpus: Iterable[list[str]], min_count: int = 1) -> Vocabulary:
    """Count tokens across a corpus and keep those seen at least min_count times.

    Raises ValueError("empty corpus") when the corpus holds no tokens at all.
    """
    counts: Counter[str] = Counter()
    for sentence in corpus:
        counts.update(sentence)
    if not counts:
        raise ValueError("empty corpus")
    kept = sorted(
        (tok for tok, c in counts.items() if c >= min_count),
        key=lambda tok: (-counts[tok], tok),
    )
    vocab = Vocabulary(min_count=min_count)
    vocab.id_to_token = kept
    vocab.token_to_id = {tok: i for i, tok in enumerate(kept)}
    vocab.counts = [counts[tok] for tok in kept]
    return vocab


@dataclass
class EmbeddingMatrix:
    """A vocabulary plus one dense real vector per token (rows by token id)."""

    vocab: Vocabulary
    vectors: np.ndarray  # (|V|, dim) float64

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def __post_init__(self) -> None:
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.vocab):
            raise ValueError(
                f"vector matrix shape {self.vectors.shape} does not match "
                f"vocabulary of size {len(self.vocab)}"
            )
        if not np.all(np.isfinite(self.vectors)):
            raise ValueError("embedding matrix contains non-finite entries")

    def vector(self, token: str) -> np.ndarray:
        return self.vectors[self.vocab.id_of(token)]


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Standard cosine of the angle between two equal-length vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("zero-norm vector")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def most_similar(
    emb: EmbeddingMatrix, word: str, k: int = 10
) -> list[tuple[str, float]]:
    """The k nearest tokens to ``word`` by cosine, best first.

    The query word itself is excluded; ties break toward the lower token id.
    Candidate rows with zero norm are given similarity 0.0 rather than
    erroring, so degenerate rows sort naturally instead of poisoning the
    whole query.
    """
    if word not in emb.vocab:
        raise KeyError(f"OOV: {word!r} not in vocabulary")
    if k < 1:
        raise ValueError("k must be >= 1")
    qid = emb.vocab.id_of(word)
    q = emb.vectors[qid]
    qnorm = np.linalg.norm(q)
    if qnorm == 0.0:
        raise ValueError("zero-norm vector")
    norms = np.linalg.norm(emb.vectors, axis=1)
    safe = np.where(norms == 0.0, 1.0, norms)
    sims = (emb.vectors @ q) / (safe * qnorm)
    sims = np.where(norms == 0.0, 0.0, sims)
    order = np.lexsort((np.arange(len(sims)), -sims))
    out: list[tuple[str, float]] = []
    for idx in order:
        if idx == qid:
            continue
        out.append((emb.vocab.id_to_token[idx], float(np.clip(sims[idx], -1.0, 1.0))))
        if len(out) == k:
            break
    return out


def average_embedding(emb: EmbeddingMatrix, tokens: list[str]) -> np.ndarray:
    """Mean vector of the in-vocabulary tokens; zero vector if there are none."""
    rows = [emb.vocab.token_to_id[t] for t in tokens if t in emb.vocab.token_to_id]
    if not rows:
        return np.zeros(emb.dim, dtype=np.float64)
    return emb.vectors[rows].mean(axis=0)


def save_embeddings(emb: EmbeddingMatrix, path: str, header: bool = True) -> None:
    """Write the text format: 9-significant-digit components, "\\n" endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            fh.write(f"{len(emb.vocab)} {emb.dim}\n")
        for i, token in enumerate(emb.vocab.id_to_token):
            comps = " ".join(format(v, ".8e") for v in emb.vectors[i])
            fh.write(f"{token} {comps}\n")


def load_embeddings(path: str) -> EmbeddingMatrix:
    """Read the text format, with or without the "<vocab> <dim>" header line.

    A first line of exactly two integer fields is treated as a header.
    Malformed content raises ValueError naming the offending line number.
    """
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    start = 0
    declared: tuple[int, int] | None = None
    if lines:
        first = lines[0].split()
        if len(first) == 2 and all(_is_int(f) for f in first):
            declared = (int(first[0]), int(first[1]))
            start = 1
    tokens: list[str] = []
    rows: list[np.ndarray] = []
    seen: dict[str, int] = {}
    dim: int | None = declared[1] if declared else None
    for lineno, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        fields = line.split()
        token, comps = fields[0], fields[1:]
        if dim is None:
            dim = len(comps)
            if dim == 0:
                raise ValueError(f"line {lineno}: no vector components")
        if len(comps) != dim:
            raise ValueError(
                f"line {lineno}: expected {dim} components, got {len(comps)}"
            )
        if token in seen:
            raise ValueError(f"line {lineno}: duplicate token {token!r}")
        try:
            row = np.array([float(c) for c in comps], dtype=np.float64)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: non-numeric field ({exc})") from None
        seen[token] = len(tokens)
        tokens.append(token)
        rows.append(row)
    if not tokens:
        raise ValueError("empty embedding file")
    if declared is not None and declared[0] != len(tokens):
        raise ValueError(
            f"header declares {declared[0]} words but file has {len(tokens)}"
        )
    vocab = Vocabulary(
        token_to_id={t: i for i, t in enumerate(tokens)},
        id_to_token=tokens,
        counts=[1] * len(tokens),
        min_count=1,
    )
    return EmbeddingMatrix(vocab=vocab, vectors=np.vstack(rows))


def vocab_fingerprint(vocab: Vocabulary, dim: int) -> str:
    """Stable hash identifying (vocabulary, dimension) for checkpoint checks."""
    h = hashlib.sha256()
    h.update(str(dim).encode())
    for token in vocab.id_to_token:
        h.update(b"\x00")
        h.update(token.encode("utf-8"))
    return h.hexdigest()


def _is_int(s: str) -> bool:
    try:
        int(s)
    except ValueError:
        return False
    return True
