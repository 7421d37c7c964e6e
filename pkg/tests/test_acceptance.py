"""Acceptance gate: one test per headline guarantee, with time budgets.

Each test re-derives its expected values with brute-force or
finite-difference oracles written out locally, so a pass here does not
depend on any other test file being correct.
"""

import os
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import make_embeddings, separable_dataset, toy_word_corpus
from wsdetect.baseline import lr_loss_and_grad
from wsdetect.cbow import CbowConfig, train_cbow
from wsdetect.cli import EXIT_OK, main
from wsdetect.datasets import (
    UNDECIDABLE,
    AnnotationRecord,
    FourLabel,
    LabeledExample,
    cohen_kappa,
    combine_and_balance,
    majority_vote,
    save_labeled_csv,
    stratified_split_indices,
)
from wsdetect.embeddings import cosine_similarity, save_embeddings
from wsdetect.metrics import parse_report, per_class_accuracy, prf1, confusion, roc_auc
from wsdetect.model import backward, bce_loss, forward_batch, init_bilstm, pad_batch

STORMFRONT_CSV_ENV = "WSDETECT_STORMFRONT_CSV"
STORMFRONT_EMB_ENV = "WSDETECT_STORMFRONT_EMBEDDINGS"


def test_gradients_match_finite_differences_within_tolerance():
    started = time.perf_counter()
    step = 1e-5

    def fd(fn, arr):
        g = np.zeros_like(arr)
        it = np.nditer(arr, flags=["multi_index"])
        while not it.finished:
            idx = it.multi_index
            orig = arr[idx]
            arr[idx] = orig + step
            lp = fn()
            arr[idx] = orig - step
            lm = fn()
            arr[idx] = orig
            g[idx] = (lp - lm) / (2.0 * step)
            it.iternext()
        return g

    def rel(a, b):
        return np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)

    emb = make_embeddings(["aa", "bb", "cc"], dim=3, seed=2)
    model = init_bilstm(emb, hidden_size=3, dense1_size=2, max_sequence_length=6, seed=3)
    ids = pad_batch([[1, 2, 3], [2, 0, 3], [3]])
    labels = np.array([1.0, 0.0, 1.0])

    def loss():
        p, _ = forward_batch(model, ids)
        return float(np.mean(bce_loss(p, labels)))

    _, grads, _ = backward(model, ids, labels)
    worst_nn = 0.0
    for name, arr in model.param_dict().items():
        err = rel(grads[name], fd(loss, arr))
        worst_nn = max(worst_nn, err)
        assert err <= 1e-4, f"{name}: rel err {err:.3e} > 1e-4"

    rng = np.random.default_rng(40)
    x = rng.normal(size=(10, 4))
    y = rng.integers(0, 2, 10).astype(np.float64)
    w = rng.normal(size=4) * 0.3
    _, grad_w, grad_b = lr_loss_and_grad(w, 0.1, x, y, 0.05)
    num_w = fd(lambda: lr_loss_and_grad(w, 0.1, x, y, 0.05)[0], w)
    lp = lr_loss_and_grad(w, 0.1 + step, x, y, 0.05)[0]
    lm = lr_loss_and_grad(w, 0.1 - step, x, y, 0.05)[0]
    err_w = rel(grad_w, num_w)
    err_b = abs(grad_b - (lp - lm) / (2 * step)) / max(abs(grad_b), 1e-12)
    assert err_w <= 1e-6
    assert err_b <= 1e-6

    elapsed = time.perf_counter() - started
    assert elapsed < 60.0
    print(f"PASS gradient correctness: bilstm rel err <= {worst_nn:.2e} (tol 1e-4), "
          f"lr <= {max(err_w, err_b):.2e} (tol 1e-6), {elapsed:.1f}s < 60s")


def test_cbow_learns_toy_analogy_in_nine_of_ten_seeds():
    started = time.perf_counter()
    corpus = toy_word_corpus(reps=20)
    wins = 0
    for seed in range(10):
        losses = []
        cfg = CbowConfig(
            dim=16, window=2, negative_samples=5, epochs=10,
            initial_lr=0.05, min_count=1, subsample_threshold=0.0, seed=seed,
        )
        emb = train_cbow(corpus, cfg, on_epoch=lambda e, l: losses.append(l))
        close = cosine_similarity(emb.vector("king"), emb.vector("queen"))
        far = cosine_similarity(emb.vector("king"), emb.vector("realm"))
        if close > far:
            wins += 1
        for prev, cur in zip(losses, losses[1:]):
            assert cur <= prev * 1.05, f"seed {seed}: loss rose {prev:.4f} -> {cur:.4f}"
    assert wins >= 9, f"only {wins}/10 seeds ranked queen above realm"
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    print(f"PASS cbow learning signal: {wins}/10 seeds (need >= 9), "
          f"loss non-increasing within 5%, {elapsed:.1f}s < 30s")


def test_metrics_match_brute_force_oracles():
    started = time.perf_counter()
    assert roc_auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75

    def brute_prf1(preds, labels):
        tp = sum(p == 1 and y == 1 for p, y in zip(preds, labels))
        fp = sum(p == 1 and y == 0 for p, y in zip(preds, labels))
        fn = sum(p == 0 and y == 1 for p, y in zip(preds, labels))
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        return prec, rec, f1

    def brute_auc(scores, labels):
        pos = [s for s, y in zip(scores, labels) if y == 1]
        neg = [s for s, y in zip(scores, labels) if y == 0]
        total = sum(1.0 if sp > sn else 0.5 if sp == sn else 0.0
                    for sp in pos for sn in neg)
        return total / (len(pos) * len(neg))

    def brute_kappa(a, b):
        n = len(a)
        p_o = sum(x == y for x, y in zip(a, b)) / n
        p_e = sum((a.count(v) / n) * (b.count(v) / n) for v in set(a) | set(b))
        return 1.0 if p_e >= 1.0 else (p_o - p_e) / (1.0 - p_e)

    rng = np.random.default_rng(777)
    for trial in range(100):
        n = int(rng.integers(500, 1001)) if trial % 10 == 0 else int(rng.integers(2, 51))
        labels = rng.integers(0, 2, n).tolist()
        if len(set(labels)) < 2:
            labels[0] = 1 - labels[0]
        preds = rng.integers(0, 2, n).tolist()
        if trial % 2 == 0:
            scores = rng.choice([0.0, 0.2, 0.5, 0.8, 1.0], size=n).tolist()
        else:
            scores = rng.random(n).tolist()

        got = prf1(confusion(preds, labels))
        want = brute_prf1(preds, labels)
        assert all(abs(g - w) <= 1e-9 for g, w in zip(got, want))

        c = confusion(preds, labels)
        acc_h, acc_n, acc = per_class_accuracy(preds, labels)
        assert abs(acc_h - (c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0)) <= 1e-9
        assert abs(acc_n - (c.tn / (c.tn + c.fp) if c.tn + c.fp else 0.0)) <= 1e-9
        assert abs(acc - (c.tp + c.tn) / n) <= 1e-9

        assert abs(roc_auc(scores, labels) - brute_auc(scores, labels)) <= 1e-9
        assert abs(cohen_kappa(preds, labels).kappa - brute_kappa(preds, labels)) <= 1e-9

    elapsed = time.perf_counter() - started
    print(f"PASS metric oracles: 100 instances (n up to 1000) within 1e-9, "
          f"reference AUC exactly 0.75, {elapsed:.1f}s")


def test_dataset_math_matches_published_shape():
    started = time.perf_counter()

    def block(n, label, source):
        return [LabeledExample(f"{source}-{label}-{i}", label, source) for i in range(n)]

    forum = block(1119, 1, "Stormfront") + block(8537, 0, "Stormfront")
    tweets = block(1177, 1, "Twitter") + block(822, 0, "Twitter")
    balanced = combine_and_balance([forum, tweets], seed=1)
    n_pos = sum(ex.label for ex in balanced)
    n_neg = len(balanced) - n_pos
    assert n_pos == n_neg == 2296
    assert len(balanced) == 4592

    labels = [0] * 50 + [1] * 50
    train_idx, test_idx = stratified_split_indices(labels, 0.2, seed=1)
    assert sum(1 for i in test_idx if labels[i] == 0) == 10
    assert sum(1 for i in test_idx if labels[i] == 1) == 10
    assert sorted(train_idx + test_idx) == list(range(100))
    odd = [0] * 7 + [1] * 9
    _, test2 = stratified_split_indices(odd, 0.25, seed=3)
    assert sum(1 for i in test2 if odd[i] == 0) == 2  # floor(7*0.25+0.5)
    assert sum(1 for i in test2 if odd[i] == 1) == 2  # floor(9*0.25+0.5)

    E, I, O, N = (FourLabel.EXPLICIT_WS, FourLabel.IMPLICIT_WS,
                  FourLabel.OTHER_HATE, FourLabel.NEUTRAL)
    assert majority_vote(AnnotationRecord("a", (E, I, N))).label == 1
    assert majority_vote(AnnotationRecord("b", (O, N, I))).label == 0
    assert majority_vote(AnnotationRecord("c", (E, I, N)), collapse=False) is UNDECIDABLE
    assert majority_vote(AnnotationRecord("d", (N, N, E)), collapse=False).label == 0

    elapsed = time.perf_counter() - started
    print(f"PASS dataset math: balanced 2296/2296 of 4592, split 10+10 of 100 at 0.2, "
          f"vote fixtures hold, {elapsed:.1f}s")


def _write_e2e_inputs(root):
    data, tokens = separable_dataset(n_per_class=100, seed=21)
    emb_path = root / "vectors.txt"
    save_embeddings(make_embeddings(tokens, dim=16, seed=3), str(emb_path))
    csv_path = root / "train.csv"
    save_labeled_csv(csv_path, [LabeledExample(" ".join(t), y) for t, y in data])
    return emb_path, csv_path


def _run_e2e_train(csv_path, emb_path, out):
    return main([
        "train", str(csv_path), str(emb_path), "--out", str(out),
        "--epochs", "10", "--hidden-size", "16", "--dense1-size", "8",
        "--max-seq-len", "12", "--learning-rate", "0.005", "--seed", "1",
    ])


def test_end_to_end_bilstm_reaches_f1_on_separable_data(tmp_path):
    started = time.perf_counter()
    emb_path, csv_path = _write_e2e_inputs(tmp_path)
    out = tmp_path / "model.ckpt"
    assert _run_e2e_train(csv_path, emb_path, out) == EXIT_OK

    report_path = Path(f"{out}.report.csv")
    row = parse_report(report_path.read_text(encoding="utf-8"))[0]
    assert row.f1 >= 0.95, f"held-out F1 {row.f1:.5f} < 0.95"

    replay = tmp_path / "replay.csv"
    code = main(["evaluate", str(out), f"{out}.testset.csv",
                 "--embeddings", str(emb_path), "--out", str(replay)])
    assert code == EXIT_OK
    assert replay.read_bytes() == report_path.read_bytes()

    first_report = report_path.read_bytes()
    assert _run_e2e_train(csv_path, emb_path, out) == EXIT_OK
    assert report_path.read_bytes() == first_report

    elapsed = time.perf_counter() - started
    assert elapsed < 120.0
    print(f"PASS end-to-end: 200-example F1 {row.f1:.5f} >= 0.95 in 10 epochs, "
          f"evaluate and rerun reports byte-identical, {elapsed:.1f}s < 120s")


def test_training_artifacts_are_bit_deterministic(tmp_path):
    started = time.perf_counter()
    corpus = tmp_path / "corpus.txt"
    corpus.write_text(
        "\n".join(" ".join(s) for s in toy_word_corpus(reps=5)) + "\n", encoding="utf-8"
    )
    emb_args = ["train-embeddings", str(corpus), "--dim", "8", "--window", "2",
                "--epochs", "2", "--min-count", "1", "--subsample-threshold", "0",
                "--seed", "11", "--deterministic"]
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(emb_args + ["--out", str(a)]) == EXIT_OK
    assert main(emb_args + ["--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()

    emb_path, csv_path = _write_e2e_inputs(tmp_path)
    ckpt = tmp_path / "model.ckpt"
    assert _run_e2e_train(csv_path, emb_path, ckpt) == EXIT_OK
    first = {
        p: Path(p).read_bytes()
        for p in (ckpt, f"{ckpt}.report.csv", f"{ckpt}.testset.csv", f"{ckpt}.manifest")
    }
    assert _run_e2e_train(csv_path, emb_path, ckpt) == EXIT_OK
    for p, content in first.items():
        assert Path(p).read_bytes() == content, f"{p} changed across reruns"

    elapsed = time.perf_counter() - started
    print(f"PASS determinism: embedding and classifier artifacts bit-identical "
          f"across same-seed reruns, {elapsed:.1f}s")


def test_stormfront_protocol_accuracy_band(tmp_path):
    """Optional check against user-downloaded public forum data.

    Point WSDETECT_STORMFRONT_CSV at a text,label CSV of the public forum
    sentences (hate/noHate tokens) and WSDETECT_STORMFRONT_EMBEDDINGS at a
    word2vec/GloVe-style text embedding file covering its vocabulary.
    """
    csv_env = os.environ.get(STORMFRONT_CSV_ENV)
    emb_env = os.environ.get(STORMFRONT_EMB_ENV)
    if not csv_env or not emb_env:
        pytest.skip(
            f"set {STORMFRONT_CSV_ENV} and {STORMFRONT_EMB_ENV} to run the "
            "forum-data protocol"
        )
    started = time.perf_counter()
    from wsdetect.datasets import STORMFRONT_LABEL_MAP, load_labeled_csv
    from wsdetect.embeddings import load_embeddings
    from wsdetect.model import init_bilstm as init
    from wsdetect.optim import AdamHyper
    from wsdetect.preprocess import preprocess
    from wsdetect.training import TrainConfig, train

    rows = load_labeled_csv(csv_env, label_map=STORMFRONT_LABEL_MAP, source="Stormfront")
    balanced = combine_and_balance([rows], seed=1)
    per_class = min(1000, sum(ex.label for ex in balanced))
    kept_pos = [ex for ex in balanced if ex.label == 1][:per_class]
    kept_neg = [ex for ex in balanced if ex.label == 0][:per_class]
    subset = combine_and_balance([kept_pos, kept_neg], seed=2)
    emb = load_embeddings(emb_env)
    dataset = [(preprocess(ex.text), ex.label) for ex in subset]
    model = init(emb, hidden_size=32, dense1_size=16, max_sequence_length=64, seed=1)
    cfg = TrainConfig(epochs=10, batch_size=64, adam=AdamHyper(lr=1e-3), seed=1,
                      hidden_size=32, dense1_size=16)
    _, _, report = train(model, dataset, cfg, dataset_id="stormfront-subset")
    elapsed = time.perf_counter() - started
    assert elapsed < 1800.0
    assert 0.70 <= report.accuracy <= 0.85, f"accuracy {report.accuracy:.4f} outside band"
    print(f"PASS stormfront protocol: accuracy {report.accuracy:.4f} in [0.70, 0.85], "
          f"{elapsed:.0f}s < 1800s")
