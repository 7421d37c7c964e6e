"""Train the BiLSTM classifier and the logistic-regression baseline side
by side on a synthetic separable dataset, then compare their reports.

    python3 demos/03_train_classifier.py
"""

import numpy as np

from wsdetect import (
    AdamHyper,
    EmbeddingMatrix,
    TrainConfig,
    Vocabulary,
    average_embedding,
    build_report,
    init_bilstm,
    lr_predict_batch,
    lr_train,
    render_report,
    stratified_split_indices,
    train,
)

# two disjoint token alphabets; the label is which alphabet a text draws
# from, so any competent classifier should approach perfect scores
rng = np.random.default_rng(21)
pos_tokens = [f"p{i}" for i in range(10)]
neg_tokens = [f"n{i}" for i in range(10)]
dataset = []
for _ in range(100):
    k = int(rng.integers(3, 9))
    dataset.append(([pos_tokens[int(j)] for j in rng.integers(0, 10, k)], 1))
    k = int(rng.integers(3, 9))
    dataset.append(([neg_tokens[int(j)] for j in rng.integers(0, 10, k)], 0))

tokens = pos_tokens + neg_tokens
vocab = Vocabulary(
    token_to_id={t: i for i, t in enumerate(tokens)},
    id_to_token=list(tokens),
    counts=[1] * len(tokens),
    min_count=1,
)
emb = EmbeddingMatrix(vocab=vocab, vectors=rng.normal(0.0, 0.5, (len(tokens), 16)))

print("=== BiLSTM ===")
model = init_bilstm(emb, hidden_size=16, dense1_size=8, max_sequence_length=12, seed=1)
cfg = TrainConfig(epochs=10, batch_size=32, adam=AdamHyper(lr=0.005), seed=1,
                  hidden_size=16, dense1_size=8)
model, history, nn_report = train(model, dataset, cfg, dataset_id="heldout-20pct")
print(f"loss per epoch: {['%.3f' % l for l in history]}")

print()
print("=== logistic regression over averaged vectors ===")
labels = [label for _, label in dataset]
features = [(average_embedding(emb, toks), label) for toks, label in dataset]
train_idx, test_idx = stratified_split_indices(labels, 0.2, seed=1)
lr_model = lr_train([features[i] for i in train_idx], epochs=200)
scores = lr_predict_batch(lr_model, np.stack([features[i][0] for i in test_idx]))
lr_report = build_report("lr", "heldout-20pct", scores.tolist(),
                         [labels[i] for i in test_idx])

print()
print(render_report([nn_report, lr_report], fmt="markdown"))
