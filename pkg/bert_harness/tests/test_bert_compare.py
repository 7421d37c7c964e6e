"""Merged comparison tables from two report CSVs."""

from pathlib import Path

import pytest

from bert_harness.compare import compare_reports
from bert_harness.cli import main
from bert_harness.reporting import ReportRow, render_report_csv


def write_report(path: Path, rows) -> Path:
    path.write_text(render_report_csv(rows), encoding="utf-8")
    return path


def row(model, dataset, f1):
    return ReportRow(model, dataset, 0.5, 0.5, f1, 0.5, 0.5, 0.5, 0.5)


def test_two_fixture_rows_merge_into_two_lines(tmp_path):
    a = write_report(tmp_path / "a.csv", [row("bilstm", "forum.csv", 0.72),
                                          row("bilstm", "tweets.csv", 0.65)])
    b = write_report(tmp_path / "b.csv", [row("bert-base", "forum.csv", 0.80),
                                          row("bert-base", "tweets.csv", 0.71)])
    table = compare_reports(a, b)
    lines = table.splitlines()
    assert lines[0].startswith("| Dataset | Method (primary)")
    assert "| forum.csv | bilstm | 0.72000 | bert-base | 0.80000 | 0.08000 |" in lines
    assert "| tweets.csv | bilstm | 0.65000 | bert-base | 0.71000 | 0.06000 |" in lines
    assert len(lines) == 4


def test_identical_inputs_give_zero_deltas(tmp_path):
    rows = [row("bilstm", "x.csv", 0.7134), row("bilstm", "y.csv", 0.551)]
    a = write_report(tmp_path / "a.csv", rows)
    b = write_report(tmp_path / "b.csv", rows)
    for line in compare_reports(a, b).splitlines()[2:]:
        assert line.endswith("| 0.00000 |")


def test_missing_dataset_becomes_na_and_is_listed(tmp_path):
    a = write_report(tmp_path / "a.csv", [row("bilstm", "shared.csv", 0.7),
                                          row("lr", "only_a.csv", 0.6)])
    b = write_report(tmp_path / "b.csv", [row("bert-base", "shared.csv", 0.75),
                                          row("bert-base", "only_b.csv", 0.8)])
    table = compare_reports(a, b)
    assert "| only_a.csv | lr | 0.60000 | n/a | n/a | n/a |" in table.splitlines()
    assert "| only_b.csv | n/a | n/a | bert-base | 0.80000 | n/a |" in table.splitlines()
    assert "only in primary report: only_a.csv" in table
    assert "only in secondary report: only_b.csv" in table


def test_duplicate_dataset_rows_first_one_wins(tmp_path):
    a = write_report(tmp_path / "a.csv", [row("bilstm", "d.csv", 0.7),
                                          row("lr", "d.csv", 0.6)])
    b = write_report(tmp_path / "b.csv", [row("bert-base", "d.csv", 0.7)])
    table = compare_reports(a, b)
    assert "bilstm" in table and "| lr |" not in table


def test_bad_header_raises(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("not,a,report\n", encoding="utf-8")
    good = write_report(tmp_path / "good.csv", [row("m", "d.csv", 0.5)])
    with pytest.raises(ValueError, match="unexpected report header"):
        compare_reports(bad, good)


def test_cli_compare_prints_the_table(tmp_path, capsys):
    a = write_report(tmp_path / "a.csv", [row("bilstm", "d.csv", 0.70)])
    b = write_report(tmp_path / "b.csv", [row("bert-base", "d.csv", 0.75)])
    code = main(["compare-reports", "--primary", str(a), "--secondary", str(b)])
    assert code == 0
    out = capsys.readouterr().out
    assert "| d.csv | bilstm | 0.70000 | bert-base | 0.75000 | 0.05000 |" in out


def test_cli_compare_writes_a_file(tmp_path, capsys):
    a = write_report(tmp_path / "a.csv", [row("bilstm", "d.csv", 0.70)])
    b = write_report(tmp_path / "b.csv", [row("bert-base", "d.csv", 0.75)])
    out_path = tmp_path / "table.md"
    code = main(["compare-reports", "--primary", str(a), "--secondary", str(b),
                 "--out", str(out_path)])
    assert code == 0
    assert compare_reports(a, b) == out_path.read_text(encoding="utf-8")


def test_cli_compare_missing_file_exits_2(tmp_path, capsys):
    good = write_report(tmp_path / "good.csv", [row("m", "d.csv", 0.5)])
    code = main(["compare-reports", "--primary", str(tmp_path / "nope.csv"),
                 "--secondary", str(good)])
    assert code == 2
    assert "not found" in capsys.readouterr().err
