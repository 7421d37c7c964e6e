"""Train CBOW word vectors on a tiny scripted corpus and inspect them.

The corpus places "king" and "queen" in interchangeable contexts while
"realm" lives in different sentences, so after a few epochs the cosine
geometry should reflect that. Runs in a few seconds on a laptop.

    python3 demos/02_train_embeddings.py
"""

import numpy as np

from wsdetect import CbowConfig, cosine_similarity, most_similar, train_cbow

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
sentences = [p.split() for p in patterns for _ in range(20)]
order = np.random.default_rng(99).permutation(len(sentences))
corpus = [sentences[i] for i in order]
print(f"corpus: {len(corpus)} sentences, {sum(len(s) for s in corpus)} tokens")

cfg = CbowConfig(
    dim=16,
    window=2,
    negative_samples=5,
    epochs=10,
    initial_lr=0.05,
    min_count=1,
    subsample_threshold=0.0,
    seed=1,
)

print("training...")
emb = train_cbow(corpus, cfg, on_epoch=lambda e, loss: print(f"  epoch {e}: loss {loss:.4f}"))

close = cosine_similarity(emb.vector("king"), emb.vector("queen"))
far = cosine_similarity(emb.vector("king"), emb.vector("realm"))
print()
print(f"cosine(king, queen) = {close:+.4f}")
print(f"cosine(king, realm) = {far:+.4f}")
print("shared contexts pulled king and queen together" if close > far
      else "unexpected: geometry did not separate (try another seed)")

print()
print("nearest neighbors of 'king':")
for token, sim in most_similar(emb, "king", k=4):
    print(f"  {token:<12s} {sim:+.4f}")
