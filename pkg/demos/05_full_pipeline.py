"""Drive the whole artifact pipeline through the command-line interface:
annotations -> labeled CSV -> balanced CSV -> embeddings -> trained
checkpoint -> evaluation report. Everything lands in a scratch directory
printed at the end, with a manifest beside each artifact.

    python3 demos/05_full_pipeline.py
"""

import csv
import tempfile
from pathlib import Path

import numpy as np

from wsdetect.cli import main

root = Path(tempfile.mkdtemp(prefix="wsdetect-demo-"))
print(f"working in {root}")
rng = np.random.default_rng(7)

# 1. fake annotation task output: three judges per text; positive texts
#    use the p* alphabet, negative use n*
ann_path = root / "annotations.csv"
with open(ann_path, "w", newline="", encoding="utf-8") as fh:
    w = csv.writer(fh)
    w.writerow(["text", "ann1", "ann2", "ann3"])
    for i in range(80):
        toks = " ".join(f"p{int(j)}" for j in rng.integers(0, 10, 5))
        w.writerow([toks, "explicit_ws", "implicit_ws",
                    "neutral" if i % 7 == 0 else "explicit_ws"])
    for i in range(120):
        toks = " ".join(f"n{int(j)}" for j in rng.integers(0, 10, 5))
        w.writerow([toks, "neutral", "neutral",
                    "other_hate" if i % 5 == 0 else "neutral"])

print("\n[1] aggregate annotator votes")
assert main(["prepare-data", str(ann_path), "--mode", "aggregate",
             "--out", str(root / "labeled.csv")]) == 0

print("\n[2] balance the classes")
assert main(["prepare-data", str(root / "labeled.csv"), "--mode", "combine_balance",
             "--out", str(root / "balanced.csv"), "--seed", "1"]) == 0

print("\n[3] train embeddings on the raw text")
corpus_path = root / "corpus.txt"
with open(root / "balanced.csv", encoding="utf-8") as fh:
    rows = list(csv.reader(fh))[1:]
corpus_path.write_text("\n".join(r[0] for r in rows) + "\n", encoding="utf-8")
assert main(["train-embeddings", str(corpus_path), "--out", str(root / "vectors.txt"),
             "--dim", "16", "--window", "2", "--epochs", "8", "--min-count", "1",
             "--subsample-threshold", "0", "--seed", "1"]) == 0

print("\n[4] train the classifier (report printed below)")
assert main(["train", str(root / "balanced.csv"), str(root / "vectors.txt"),
             "--out", str(root / "model.ckpt"), "--epochs", "10",
             "--hidden-size", "16", "--dense1-size", "8", "--max-seq-len", "12",
             "--learning-rate", "0.005", "--seed", "1"]) == 0

print("\n[5] re-evaluate the checkpoint on its held-out split")
assert main(["evaluate", str(root / "model.ckpt"), str(root / "model.ckpt.testset.csv"),
             "--embeddings", str(root / "vectors.txt"),
             "--out", str(root / "replay.csv")]) == 0

same = (root / "replay.csv").read_bytes() == (root / "model.ckpt.report.csv").read_bytes()
print(f"replayed report byte-identical to training report: {same}")

print("\nartifacts:")
for p in sorted(root.iterdir()):
    print(f"  {p.name}")
