"""Command-line front end: one binary, six subcommands.

Subcommands: train-embeddings, nearest, prepare-data, train, evaluate,
kappa. Every successful run writes a flat key=value manifest recording
the effective configuration, so a run can be reproduced exactly.

Configuration precedence is flags > --config file > built-in defaults.
The config file uses the same key=value lines as manifests, keyed by the
flag destination names (e.g. ``batch_size=128``).

Exit codes: 0 success, 2 I/O error, 3 query error, 4 compatibility
error, 1 anything else.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .baseline import lr_predict_batch, lr_train
from .cbow import CbowConfig, train_cbow
from .checkpoint import (
    CompatibilityError,
    load_bilstm,
    load_checkpoint,
    load_logreg,
    save_bilstm,
    save_logreg,
)
from .datasets import (
    STORMFRONT_LABEL_MAP,
    UNDECIDABLE,
    AnnotationRecord,
    FourLabel,
    cohen_kappa,
    collapse_labels,
    combine_and_balance,
    load_labeled_csv,
    majority_vote,
    save_labeled_csv,
    stratified_split,
    stratified_split_indices,
)
from .embeddings import (
    average_embedding,
    load_embeddings,
    most_similar,
    save_embeddings,
    vocab_fingerprint,
)
from .metrics import build_report, render_report
from .model import encode_tokens, init_bilstm
from .optim import AdamHyper
from .preprocess import preprocess
from .training import TrainConfig, predict_ids, train

ENV_OUT_DIR = "WSDETECT_OUT_DIR"

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_IO = 2
EXIT_QUERY = 3
EXIT_COMPAT = 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_OTHER):
        super().__init__(message)
        self.code = code


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        config = _peek_config(argv)
        parser, subparsers = _build_parser()
        for sub in subparsers.values():
            _apply_config_defaults(sub, config)
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help()
            return EXIT_OTHER
        if args.deterministic:
            for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
                os.environ.setdefault(var, "1")
        return _HANDLERS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except CompatibilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPAT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER


def entrypoint() -> None:
    sys.exit(main())


def _build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--out-dir", default=None,
                        help=f"output directory (default ${ENV_OUT_DIR} or .)")
    common.add_argument("--config", default=None,
                        help="key=value file of flag defaults")
    common.add_argument("--deterministic", action="store_true",
                        help="single-threaded numerics and fixed context windows")

    parser = argparse.ArgumentParser(prog="wsdetect")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")
    parsers: dict[str, argparse.ArgumentParser] = {}

    p = sub.add_parser("train-embeddings", parents=[common],
                       help="train CBOW word vectors on a one-text-per-line corpus")
    p.add_argument("corpus")
    p.add_argument("--out", default=None)
    p.add_argument("--dim", type=int, default=300)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--negative-samples", type=int, default=5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--learning-rate", type=float, default=0.025)
    p.add_argument("--min-count", type=int, default=5)
    p.add_argument("--subsample-threshold", type=float, default=1e-3)
    parsers["train-embeddings"] = p

    p = sub.add_parser("nearest", parents=[common],
                       help="print the nearest neighbors of a word")
    p.add_argument("embeddings")
    p.add_argument("word")
    p.add_argument("--k", type=int, default=10)
    parsers["nearest"] = p

    p = sub.add_parser("prepare-data", parents=[common],
                       help="aggregate annotations, balance classes, or split")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--mode", required=True,
                   choices=["aggregate", "combine_balance", "split"])
    p.add_argument("--out", default=None)
    p.add_argument("--no-collapse", action="store_true",
                   help="aggregate over the four-way labels (ties rejected)")
    p.add_argument("--label-map", choices=["binary", "stormfront"], default="binary")
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--no-stratify", action="store_true")
    parsers["prepare-data"] = p

    p = sub.add_parser("train", parents=[common],
                       help="train a classifier on a text,label CSV")
    p.add_argument("dataset")
    p.add_argument("embeddings")
    p.add_argument("--model", choices=["bilstm", "lr"], default="bilstm")
    p.add_argument("--out", default=None)
    p.add_argument("--epochs", type=int, default=None,
                   help="default 10 for bilstm, 500 for lr")
    p.add_argument("--batch-size", type=int, default=256)
    p.add_argument("--learning-rate", type=float, default=None,
                   help="default 1e-3 (Adam) for bilstm, 0.5 for lr")
    p.add_argument("--l2", type=float, default=1e-4)
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--hidden-size", type=int, default=64)
    p.add_argument("--dense1-size", type=int, default=16)
    p.add_argument("--max-seq-len", type=int, default=64)
    p.add_argument("--freeze-embeddings", action="store_true")
    p.add_argument("--no-stratify", action="store_true")
    p.add_argument("--threshold", type=float, default=0.5)
    parsers["train"] = p

    p = sub.add_parser("evaluate", parents=[common],
                       help="evaluate a checkpoint on a text,label CSV")
    p.add_argument("checkpoint")
    p.add_argument("dataset")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--threshold", type=float, default=0.5)
    parsers["evaluate"] = p

    p = sub.add_parser("kappa", parents=[common],
                       help="pairwise annotator agreement on an annotations CSV")
    p.add_argument("annotations")
    p.add_argument("--binary", action="store_true",
                   help="collapse the four-way labels before scoring")
    parsers["kappa"] = p

    return parser, parsers


def _peek_config(argv: list[str]) -> dict[str, str]:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    ns, _ = pre.parse_known_args(argv)
    if ns.config is None:
        return {}
    return load_config_file(ns.config)


def load_config_file(path: str | Path) -> dict[str, str]:
    path = Path(path)
    if not path.exists():
        raise CliError(f"config file not found: {path}", EXIT_IO)
    out: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key=value, got {line!r}", EXIT_IO)
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


_TRUTHY = {"1", "true", "yes", "on"}
_FALSY = {"0", "false", "no", "off"}


def _apply_config_defaults(sub: argparse.ArgumentParser, config: dict[str, str]) -> None:
    for action in sub._actions:
        if action.dest not in config:
            continue
        raw = config[action.dest]
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            low = raw.lower()
            if low in _TRUTHY:
                value: object = isinstance(action, argparse._StoreTrueAction)
            elif low in _FALSY:
                value = not isinstance(action, argparse._StoreTrueAction)
            else:
                raise CliError(f"config key {action.dest!r}: not a boolean: {raw!r}")
        elif action.type is not None:
            try:
                value = action.type(raw)
            except ValueError:
                raise CliError(f"config key {action.dest!r}: bad value {raw!r}") from None
        else:
            value = raw
        sub.set_defaults(**{action.dest: value})


def _out_dir(args: argparse.Namespace) -> Path:
    d = Path(args.out_dir or os.environ.get(ENV_OUT_DIR) or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


def _resolve_out(args: argparse.Namespace, default_name: str) -> Path:
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        return out
    return _out_dir(args) / default_name


def write_manifest(path: str | Path, args: argparse.Namespace, extra: dict) -> None:
    """Flat sorted key=value lines; no timestamps, so reruns match bytes."""
    data = {k: v for k, v in vars(args).items() if k not in ("config",)}
    data.update(extra)
    data["version"] = __version__
    lines = []
    for key in sorted(data):
        value = data[key]
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif value is None:
            value = ""
        lines.append(f"{key}={value}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _read_corpus(path: str | Path) -> list[list[str]]:
    with open(path, encoding="utf-8") as fh:
        return [preprocess(line) for line in fh.read().splitlines()]


def cmd_train_embeddings(args: argparse.Namespace) -> int:
    sentences = _read_corpus(args.corpus)
    cfg = CbowConfig(
        dim=args.dim,
        window=args.window,
        negative_samples=args.negative_samples,
        epochs=args.epochs,
        initial_lr=args.learning_rate,
        min_count=args.min_count,
        subsample_threshold=args.subsample_threshold,
        seed=args.seed,
    )
    emb = train_cbow(sentences, cfg, deterministic=args.deterministic)
    out = _resolve_out(args, "embeddings.txt")
    save_embeddings(emb, str(out))
    write_manifest(f"{out}.manifest", args, {"output": out})
    print(f"wrote {out}: {len(emb.vocab)} words, dim {emb.dim}")
    return EXIT_OK


def cmd_nearest(args: argparse.Namespace) -> int:
    emb = load_embeddings(args.embeddings)
    try:
        neighbors = most_similar(emb, args.word, k=args.k)
    except KeyError as exc:
        raise CliError(str(exc).strip('"'), EXIT_QUERY) from None
    for token, sim in neighbors:
        print(f"{token}\t{sim:.6f}")
    write_manifest(_out_dir(args) / "nearest.manifest", args, {})
    return EXIT_OK


def _parse_annotation_row(row: list[str], lineno: int) -> AnnotationRecord | str:
    """Returns a record, or a human-readable reason string for rejects."""
    if len(row) != 4:
        return f"line {lineno}: expected 4 columns, got {len(row)}"
    token_map = {l.value: l for l in FourLabel}
    labels = []
    for token in row[1:]:
        if token not in token_map:
            return f"line {lineno}: unknown label token {token!r}"
        labels.append(token_map[token])
    return AnnotationRecord(text=row[0], labels=tuple(labels))


def cmd_prepare_data(args: argparse.Namespace) -> int:
    if args.mode == "aggregate":
        out = _resolve_out(args, "labeled.csv")
        rejects_path = Path(f"{out}.rejects.csv")
        examples = []
        rejects: list[tuple[list[str], str]] = []
        for inp in args.inputs:
            with open(inp, encoding="utf-8", newline="") as fh:
                rows = list(csv.reader(fh))
            if rows and rows[0] != ["text", "ann1", "ann2", "ann3"]:
                raise CliError(
                    f"{inp}: expected header text,ann1,ann2,ann3, got {rows[0]}", EXIT_IO
                )
            for lineno, row in enumerate(rows[1:], start=2):
                if not row:
                    continue
                parsed = _parse_annotation_row(row, lineno)
                if isinstance(parsed, str):
                    rejects.append((row, parsed))
                    continue
                voted = majority_vote(parsed, collapse=not args.no_collapse)
                if voted is UNDECIDABLE:
                    rejects.append((row, "three-way tie"))
                else:
                    examples.append(voted)
        save_labeled_csv(out, examples)
        with open(rejects_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["text", "ann1", "ann2", "ann3", "reason"])
            for row, reason in rejects:
                writer.writerow((row + ["", "", ""])[:4] + [reason])
        write_manifest(f"{out}.manifest", args,
                       {"output": out, "rejects": rejects_path,
                        "n_examples": len(examples), "n_rejects": len(rejects)})
        print(f"wrote {out}: {len(examples)} examples, {len(rejects)} rejects")
        return EXIT_OK

    if args.mode == "combine_balance":
        label_map = STORMFRONT_LABEL_MAP if args.label_map == "stormfront" else None
        loaded = [load_labeled_csv(p, schema="labeled", label_map=label_map)
                  for p in args.inputs]
        balanced = combine_and_balance(loaded, seed=args.seed)
        out = _resolve_out(args, "balanced.csv")
        save_labeled_csv(out, balanced)
        write_manifest(f"{out}.manifest", args,
                       {"output": out, "n_examples": len(balanced)})
        print(f"wrote {out}: {len(balanced)} examples ({len(balanced) // 2} per class)")
        return EXIT_OK

    if len(args.inputs) != 1:
        raise CliError("split mode takes exactly one input", EXIT_OTHER)
    data = load_labeled_csv(args.inputs[0], schema="labeled")
    train_part, test_part = stratified_split(
        data, args.test_fraction, seed=args.seed, stratify=not args.no_stratify
    )
    out = _resolve_out(args, "split.csv")
    base = str(out)[: -len(out.suffix)] if out.suffix else str(out)
    train_path, test_path = Path(base + ".train.csv"), Path(base + ".test.csv")
    save_labeled_csv(train_path, train_part)
    save_labeled_csv(test_path, test_part)
    write_manifest(f"{out}.manifest", args,
                   {"output_train": train_path, "output_test": test_path,
                    "n_train": len(train_part), "n_test": len(test_part)})
    print(f"wrote {train_path} ({len(train_part)}) and {test_path} ({len(test_part)})")
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    examples = load_labeled_csv(args.dataset, schema="labeled")
    if not examples:
        raise CliError(f"empty dataset: {args.dataset}", EXIT_IO)
    emb = load_embeddings(args.embeddings)
    tokenized = [(preprocess(ex.text), ex.label) for ex in examples]
    labels = [ex.label for ex in examples]
    out = _resolve_out(args, f"{args.model}.ckpt")
    testset_path = Path(f"{out}.testset.csv")
    report_path = Path(f"{out}.report.csv")
    dataset_id = testset_path.name

    train_idx, test_idx = stratified_split_indices(
        labels, args.test_fraction, seed=args.seed, stratify=not args.no_stratify
    )
    save_labeled_csv(testset_path, [examples[i] for i in test_idx])

    default_epochs = 10 if args.model == "bilstm" else 500
    epochs = default_epochs if args.epochs is None else args.epochs
    if args.model == "bilstm":
        cfg = TrainConfig(
            epochs=epochs,
            batch_size=args.batch_size,
            adam=AdamHyper(lr=1e-3 if args.learning_rate is None else args.learning_rate),
            test_fraction=args.test_fraction,
            seed=args.seed,
            hidden_size=args.hidden_size,
            dense1_size=args.dense1_size,
            stratify=not args.no_stratify,
        )
        model = init_bilstm(
            emb,
            hidden_size=cfg.hidden_size,
            dense1_size=cfg.dense1_size,
            max_sequence_length=args.max_seq_len,
            seed=args.seed,
            embedding_trainable=not args.freeze_embeddings,
        )
        model, history, report = train(
            model, tokenized, cfg, model_id="bilstm", dataset_id=dataset_id
        )
        save_bilstm(out, model)
        final_loss = history[-1] if history else float("nan")
    else:
        lr_rate = 0.5 if args.learning_rate is None else args.learning_rate
        features = [(average_embedding(emb, toks), label) for toks, label in tokenized]
        train_feats = [features[i] for i in train_idx]
        lr_model = lr_train(
            train_feats, l2=args.l2, epochs=epochs, lr=lr_rate,
            seed=args.seed, trained_on=Path(args.dataset).name,
        )
        test_x = np.stack([features[i][0] for i in test_idx])
        scores = lr_predict_batch(lr_model, test_x)
        report = build_report(
            "lr", dataset_id, scores.tolist(),
            [labels[i] for i in test_idx], threshold=args.threshold,
        )
        save_logreg(out, lr_model, vocab_fingerprint(emb.vocab, emb.dim))
        final_loss = float("nan")
    report_text = render_report([report])
    report_path.write_text(report_text, encoding="utf-8")
    write_manifest(f"{out}.manifest", args,
                   {"checkpoint": out, "report": report_path, "testset": testset_path,
                    "effective_epochs": epochs})
    print(report_text, end="")
    if not np.isnan(final_loss):
        print(f"final training loss {final_loss:.5f}")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    examples = load_labeled_csv(args.dataset, schema="labeled")
    if not examples:
        raise CliError(f"empty dataset: {args.dataset}", EXIT_IO)
    emb = load_embeddings(args.embeddings)
    meta, _ = load_checkpoint(args.checkpoint)
    kind = meta.get("kind")
    tokenized = [preprocess(ex.text) for ex in examples]
    labels = [ex.label for ex in examples]
    if kind == "bilstm":
        model = load_bilstm(args.checkpoint, emb)
        encoded = [encode_tokens(model.vocab, toks, model.max_sequence_length)
                   for toks in tokenized]
        scores = predict_ids(model, encoded)
    elif kind == "logreg":
        lr_model = load_logreg(args.checkpoint, embeddings=emb)
        feats = np.stack([average_embedding(emb, toks) for toks in tokenized])
        scores = lr_predict_batch(lr_model, feats)
    else:
        raise CliError(f"{args.checkpoint}: unknown checkpoint kind {kind!r}", EXIT_COMPAT)
    model_id = "bilstm" if kind == "bilstm" else "lr"
    report = build_report(
        model_id, Path(args.dataset).name, scores.tolist(), labels,
        threshold=args.threshold,
    )
    report_text = render_report([report])
    out = _resolve_out(args, "report.csv")
    out.write_text(report_text, encoding="utf-8")
    write_manifest(f"{out}.manifest", args, {"report": out})
    print(report_text, end="")
    return EXIT_OK


def cmd_kappa(args: argparse.Namespace) -> int:
    records = load_labeled_csv(args.annotations, schema="annotations")
    if not records:
        raise CliError(f"empty annotations file: {args.annotations}", EXIT_IO)
    columns: list[list] = [[], [], []]
    for r in records:
        for i in range(3):
            value = collapse_labels(r.labels[i]) if args.binary else r.labels[i]
            columns[i].append(value)
    pairs = [(0, 1), (1, 2), (0, 2)]
    kappas = []
    for i, j in pairs:
        k = cohen_kappa(columns[i], columns[j]).kappa
        kappas.append(k)
        print(f"kappa(ann{i + 1},ann{j + 1}) = {k:.6f}")
    print(f"mean = {float(np.mean(kappas)):.6f}")
    write_manifest(_out_dir(args) / "kappa.manifest", args, {})
    return EXIT_OK


_HANDLERS = {
    "train-embeddings": cmd_train_embeddings,
    "nearest": cmd_nearest,
    "prepare-data": cmd_prepare_data,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "kappa": cmd_kappa,
}
