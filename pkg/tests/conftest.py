import numpy as np
import pytest

from wsdetect.embeddings import EmbeddingMatrix, Vocabulary
from wsdetect.lstm import LstmParams


def make_embeddings(tokens, dim, seed=0, scale=0.5):
    """Random embedding matrix over an explicit token list."""
    rng = np.random.default_rng(seed)
    vocab = Vocabulary(
        token_to_id={t: i for i, t in enumerate(tokens)},
        id_to_token=list(tokens),
        counts=[1] * len(tokens),
        min_count=1,
    )
    return EmbeddingMatrix(vocab=vocab, vectors=rng.normal(0.0, scale, (len(tokens), dim)))


def lstm_params_from(rows):
    """Build LstmParams from a {name: nested list} mapping."""
    return LstmParams(**{k: np.asarray(v, dtype=np.float64) for k, v in rows.items()})


def toy_word_corpus(reps=20, shuffle_seed=99):
    """Small corpus where king/queen share contexts and realm does not."""
    patterns = [
        "the king rules the northern land",
        "the queen rules the northern land",
        "the king commands loyal armies",
        "the queen commands loyal armies",
        "the king wears a golden crown",
        "the queen wears a golden crown",
        "ancient realm borders frozen mountains",
        "ancient realm contains misty forests",
        "travelers cross the vast realm slowly",
    ]
    sents = [p.split() for p in patterns for _ in range(reps)]
    order = np.random.default_rng(shuffle_seed).permutation(len(sents))
    return [sents[i] for i in order]


def separable_dataset(n_per_class=100, seed=21, min_len=3, max_len=9):
    """Texts drawn from two disjoint token alphabets, labeled by alphabet."""
    rng = np.random.default_rng(seed)
    pos = [f"p{i}" for i in range(10)]
    neg = [f"n{i}" for i in range(10)]
    data = []
    for _ in range(n_per_class):
        k = int(rng.integers(min_len, max_len))
        data.append(([pos[int(j)] for j in rng.integers(0, 10, k)], 1))
        k = int(rng.integers(min_len, max_len))
        data.append(([neg[int(j)] for j in rng.integers(0, 10, k)], 0))
    return data, pos + neg


@pytest.fixture
def tiny_embeddings():
    return make_embeddings(["aa", "bb", "cc"], dim=2, seed=3)
