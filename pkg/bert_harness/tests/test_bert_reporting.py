"""Metric math and byte-compatibility of the report CSV format.

Hand-derived cases come first; the format contract is then checked
directly against the companion wsdetect package, which must accept and
re-render this harness's output with not one byte of difference.
"""

import numpy as np
import pytest

from bert_harness.reporting import (
    REPORT_COLUMNS,
    ReportRow,
    evaluate_scores,
    parse_report_csv,
    rank_auc,
    render_report_csv,
)


def test_rank_auc_reference_value_is_exact():
    assert rank_auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75


def test_rank_auc_perfect_and_inverted():
    assert rank_auc([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1]) == 1.0
    assert rank_auc([0.9, 0.8, 0.2, 0.1], [0, 0, 1, 1]) == 0.0


def test_rank_auc_all_tied_is_half():
    assert rank_auc([0.5] * 6, [0, 1, 0, 1, 0, 1]) == 0.5


def test_rank_auc_requires_both_classes():
    with pytest.raises(ValueError, match="both classes"):
        rank_auc([0.1, 0.2], [1, 1])


def test_rank_auc_length_mismatch():
    with pytest.raises(ValueError, match="length mismatch"):
        rank_auc([0.1, 0.2, 0.3], [0, 1])


def test_evaluate_scores_hand_case():
    # preds [1,1,0,1]: tp=2 fp=1 fn=0 tn=1; positive pairs win 3 of 4
    row = evaluate_scores("m", "d", [0.9, 0.8, 0.3, 0.6], [1, 0, 0, 1])
    assert row.precision == pytest.approx(2 / 3, abs=1e-12)
    assert row.recall == 1.0
    assert row.f1 == pytest.approx(0.8, abs=1e-12)
    assert row.auc == 0.75
    assert row.accuracy_hate == 1.0
    assert row.accuracy_nonhate == 0.5
    assert row.accuracy == 0.75
    assert row.flags == ()


def test_threshold_is_inclusive():
    row = evaluate_scores("m", "d", [0.5, 0.4], [1, 0])
    assert row.recall == 1.0 and row.accuracy == 1.0


def test_no_positive_predictions_flags_in_order():
    row = evaluate_scores("m", "d", [0.1, 0.2, 0.3], [1, 0, 1])
    assert row.flags == (
        "precision undefined (no positive predictions)",
        "f1 undefined",
    )
    assert row.precision == 0.0 and row.f1 == 0.0


def test_single_class_labels_flag_auc():
    row = evaluate_scores("m", "d", [0.9, 0.8], [1, 1])
    assert row.auc == 0.0
    assert "auc undefined (single class)" in row.flags
    assert "non-hate class absent" in row.flags


def test_evaluate_scores_validation():
    with pytest.raises(ValueError, match="length mismatch"):
        evaluate_scores("m", "d", [0.1], [1, 0])
    with pytest.raises(ValueError, match="no examples"):
        evaluate_scores("m", "d", [], [])
    with pytest.raises(ValueError, match="0/1"):
        evaluate_scores("m", "d", [0.5, 0.5], [1, 2])


def test_render_produces_the_exact_layout():
    row = ReportRow("bert-base", "heldout", 0.727, 0.81, 0.766, 0.88, 0.81, 0.7, 0.755)
    text = render_report_csv([row])
    lines = text.splitlines()
    assert lines[0] == ",".join(REPORT_COLUMNS)
    assert lines[1] == (
        "bert-base,heldout,0.72700,0.81000,0.76600,0.88000,"
        "0.81000,0.70000,0.75500,"
    )


def test_parse_inverts_render_including_flags():
    rows = [
        ReportRow("bert-base", "a.csv", 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5),
        ReportRow("bert-large", "b.csv", 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.5,
                  flags=("precision undefined (no positive predictions)",
                         "f1 undefined")),
    ]
    text = render_report_csv(rows)
    parsed = parse_report_csv(text)
    assert [r.dataset_id for r in parsed] == ["a.csv", "b.csv"]
    assert parsed[1].flags == rows[1].flags
    assert render_report_csv(parsed) == text


def test_parse_rejects_wrong_header():
    with pytest.raises(ValueError, match="unexpected report header"):
        parse_report_csv("Method,Dataset\nx,y\n")


def test_parse_rejects_short_rows():
    header = ",".join(REPORT_COLUMNS)
    with pytest.raises(ValueError, match="cells"):
        parse_report_csv(header + "\nm,d,0.1\n")


def test_rows_match_the_companion_metrics_exactly():
    wsmetrics = pytest.importorskip("wsdetect.metrics")
    rng = np.random.default_rng(42)
    tie_grid = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    for case in range(50):
        n = int(rng.integers(2, 400))
        labels = rng.integers(0, 2, size=n).tolist()
        if case % 2 == 0:
            scores = rng.choice(tie_grid, size=n).tolist()
        else:
            scores = rng.random(n).tolist()
        ours = evaluate_scores("m", "d", scores, labels)
        theirs = wsmetrics.build_report("m", "d", scores, labels)
        for name in ("precision", "recall", "f1", "auc",
                     "accuracy_hate", "accuracy_nonhate", "accuracy"):
            assert getattr(ours, name) == getattr(theirs, name), f"case {case}: {name}"
        assert ours.flags == theirs.flags


def test_report_bytes_match_the_companion_renderer():
    wsmetrics = pytest.importorskip("wsdetect.metrics")
    rng = np.random.default_rng(7)
    labels = rng.integers(0, 2, size=40).tolist()
    labels[0], labels[1] = 0, 1
    scores = rng.random(40).tolist()
    ours = evaluate_scores("bert-base", "shared.csv", scores, labels)
    theirs = wsmetrics.build_report("bert-base", "shared.csv", scores, labels)
    assert render_report_csv([ours]) == wsmetrics.render_report([theirs])
