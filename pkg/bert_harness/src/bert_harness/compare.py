"""Side-by-side comparison of two report CSVs, keyed by dataset id.

Typical use: one report from the companion wsdetect models, one from
this harness, both over the same dataset files. Datasets present in
only one report still get a row, with "n/a" standing in for the absent
side, and are listed below the table. If a report carries several rows
for one dataset, the first row wins.
"""

from __future__ import annotations

from pathlib import Path

from bert_harness.reporting import ReportRow, read_report_file

_TABLE_COLUMNS = [
    "Dataset",
    "Method (primary)",
    "F1 (primary)",
    "Method (secondary)",
    "F1 (secondary)",
    "F1 delta",
]


def compare_reports(primary_csv: str | Path, secondary_csv: str | Path) -> str:
    primary = _first_row_per_dataset(read_report_file(primary_csv))
    secondary = _first_row_per_dataset(read_report_file(secondary_csv))
    keys = list(primary)
    keys += [k for k in secondary if k not in primary]

    lines = [
        "| " + " | ".join(_TABLE_COLUMNS) + " |",
        "|" + "|".join(["---"] * len(_TABLE_COLUMNS)) + "|",
    ]
    for k in keys:
        a = primary.get(k)
        b = secondary.get(k)
        cells = [k]
        cells += [a.model_id, f"{a.f1:.5f}"] if a is not None else ["n/a", "n/a"]
        cells += [b.model_id, f"{b.f1:.5f}"] if b is not None else ["n/a", "n/a"]
        cells.append(f"{b.f1 - a.f1:.5f}" if a is not None and b is not None else "n/a")
        lines.append("| " + " | ".join(cells) + " |")

    only_a = [k for k in keys if k not in secondary]
    only_b = [k for k in keys if k not in primary]
    if only_a:
        lines.append("")
        lines.append("only in primary report: " + ", ".join(only_a))
    if only_b:
        if not only_a:
            lines.append("")
        lines.append("only in secondary report: " + ", ".join(only_b))
    return "\n".join(lines) + "\n"


def _first_row_per_dataset(rows: list[ReportRow]) -> dict[str, ReportRow]:
    out: dict[str, ReportRow] = {}
    for r in rows:
        out.setdefault(r.dataset_id, r)
    return out
