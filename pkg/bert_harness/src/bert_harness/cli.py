"""Command-line front end: finetune and compare-reports.

Exit codes follow the companion wsdetect CLI where they overlap:
0 success, 2 I/O error, 1 anything else (including missing pretrained
weights, whose message explains how to fetch them).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from bert_harness import __version__
from bert_harness.compare import compare_reports
from bert_harness.config import FinetuneConfig
from bert_harness.finetune import FinetuneError, finetune_and_eval

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_IO = 2


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(sys.argv[1:] if argv is None else argv)
    if args.command is None:
        parser.print_help()
        return EXIT_OTHER
    try:
        return _HANDLERS[args.command](args)
    except FinetuneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER


def entrypoint() -> None:
    sys.exit(main())


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bert-harness")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("finetune", help="fine-tune a classifier and write one report row")
    p.add_argument("--dataset", required=True, help="text,label CSV")
    p.add_argument("--size", choices=["base", "large"], default="base")
    p.add_argument("--out", required=True, help="report CSV to write")
    p.add_argument("--lr", type=float, default=2e-5)
    p.add_argument("--epochs", type=float, default=3.0)
    p.add_argument("--batch", type=int, default=None,
                   help="batch size (default: 32 for base, 16 for large)")
    p.add_argument("--max-seq-len", type=int, default=64)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--model-path", default=None,
                   help="local save_pretrained() directory instead of the named size")

    p = sub.add_parser("compare-reports", help="merge two report CSVs into a markdown table")
    p.add_argument("--primary", required=True)
    p.add_argument("--secondary", required=True)
    p.add_argument("--out", default=None, help="write the table here instead of stdout")
    return parser


def _cmd_finetune(args: argparse.Namespace) -> int:
    if not Path(args.dataset).exists():
        print(f"error: dataset not found: {args.dataset}", file=sys.stderr)
        return EXIT_IO
    cfg = FinetuneConfig(
        model_size=args.size,
        learning_rate=args.lr,
        epochs=args.epochs,
        batch_size=args.batch,
        max_seq_len=args.max_seq_len,
        seed=args.seed,
    )
    row = finetune_and_eval(args.dataset, cfg, args.out, model_path=args.model_path)
    print(f"wrote {args.out}: {row.model_id} on {row.dataset_id} "
          f"F1 {row.f1:.5f} accuracy {row.accuracy:.5f}")
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    for p in (args.primary, args.secondary):
        if not Path(p).exists():
            print(f"error: report not found: {p}", file=sys.stderr)
            return EXIT_IO
    table = compare_reports(args.primary, args.secondary)
    if args.out is None:
        print(table, end="")
    else:
        Path(args.out).write_text(table, encoding="utf-8")
        print(f"wrote {args.out}")
    return EXIT_OK


_HANDLERS = {
    "finetune": _cmd_finetune,
    "compare-reports": _cmd_compare,
}
