"""Aggregate three-annotator labels into a binary dataset and measure
inter-annotator agreement with Cohen's kappa.

    python3 demos/04_annotator_agreement.py
"""

from wsdetect import (
    UNDECIDABLE,
    AnnotationRecord,
    FourLabel,
    average_pairwise_kappa,
    cohen_kappa,
    collapse_labels,
    majority_vote,
)

E = FourLabel.EXPLICIT_WS
I = FourLabel.IMPLICIT_WS
O = FourLabel.OTHER_HATE
N = FourLabel.NEUTRAL

records = [
    AnnotationRecord("sentence one", (E, E, I)),
    AnnotationRecord("sentence two", (N, N, O)),
    AnnotationRecord("sentence three", (E, I, N)),
    AnnotationRecord("sentence four", (O, N, N)),
    AnnotationRecord("sentence five", (I, I, E)),
    AnnotationRecord("sentence six", (E, O, N)),
]

print("collapsed majority vote (explicit/implicit -> 1, rest -> 0):")
for r in records:
    voted = majority_vote(r)
    print(f"  {r.text:<16s} {[l.value for l in r.labels]} -> {voted.label}")

# without collapsing first, a three-way disagreement has no majority
print()
print("uncollapsed voting flags genuine three-way ties:")
for r in records:
    voted = majority_vote(r, collapse=False)
    out = "UNDECIDABLE" if voted is UNDECIDABLE else voted.label
    print(f"  {r.text:<16s} -> {out}")

ann1 = [r.labels[0] for r in records]
ann2 = [r.labels[1] for r in records]
raw = cohen_kappa(ann1, ann2)
print()
print(f"annotators 1 vs 2, four-way labels: p_o={raw.p_o:.3f} p_e={raw.p_e:.3f} "
      f"kappa={raw.kappa:.3f}")
binary = cohen_kappa([collapse_labels(l) for l in ann1],
                     [collapse_labels(l) for l in ann2])
print(f"annotators 1 vs 2, binarized:       p_o={binary.p_o:.3f} p_e={binary.p_e:.3f} "
      f"kappa={binary.kappa:.3f}")

print()
print(f"mean pairwise kappa, four-way:  {average_pairwise_kappa(records):.3f}")
print(f"mean pairwise kappa, binarized: "
      f"{average_pairwise_kappa(records, label_map=collapse_labels):.3f}")
