"""Command-line pipeline: filter, preprocess, split, train, eval,
experiment, synth, annotate-serve.

Stages talk through files so any step can be inspected or substituted.
Exit codes: 0 success, 1 user error, 2 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import zlib
from pathlib import Path

from . import __version__
from .annotation import AnnotationStore, LabeledDataset, load_labeled, \
    save_labeled
from .corpus import Dataset, atomic_write, dedup, load_glossary, load_tweets, \
    save_dataset
from .errors import MisinfoError, ValidationError
from .evaluate import confusion, render_grid, report_from_confusion
from .features import build_feature_space, label_counts, method_from_name, \
    split_train_test, vectorize
from .filtering import filter_corpus
from .models import ModelConfig, train as train_model
from .models.io import load_model, load_space, save_model, save_space
from .preprocess import load_stopwords, load_token_sequences, \
    preprocess_tweet, save_token_sequences
from .resources import default_glossary_path
from .server import make_server
from .synth import SynthSpec, generate, save_spec

log = logging.getLogger("misinfo")

BINARY = ("M", "T")


class _Parser(argparse.ArgumentParser):
    # usage problems are user errors (exit 1), not internal ones
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _require(path, stage: str) -> Path:
    path = Path(path)
    if not path.exists():
        raise MisinfoError(
            f"missing input {path}; run the {stage} stage first")
    return path


def _is_labeled(path) -> bool:
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                return "label" in json.loads(line)
    return False


def _load_any_corpus(path):
    """Labeled or unlabeled JSONL -> list of (TweetRecord, label-or-None)."""
    path = Path(path)
    if _is_labeled(path):
        return [(rec, lab) for rec, lab in load_labeled(path).entries]
    dataset, _ = load_tweets(path, "jsonl")
    return [(rec, None) for rec in dataset.records]


def _write_csv(path, header, rows) -> None:
    def write(f):
        writer = csv.writer(f)
        writer.writerow(header)
        writer.writerows(rows)

    atomic_write(path, write)


# -- commands ------------------------------------------------------------


def cmd_filter(args) -> int:
    fmt = args.format or ("csv" if str(args.input).endswith(".csv")
                          else "jsonl")
    path = _require(args.input, "collection")
    labels = {}
    if fmt == "jsonl" and _is_labeled(path):
        # already-labeled corpora pass their labels through the filter
        entries = load_labeled(path).entries
        dataset = Dataset(records=tuple(rec for rec, _ in entries),
                          provenance=str(path))
        labels = {rec.id: lab for rec, lab in entries}
        total, rejected = len(entries), 0
    else:
        dataset, load_report = load_tweets(path, fmt)
        total, rejected = load_report.total_rows, load_report.rejected
    if args.dedup:
        before = len(dataset)
        dataset = dedup(dataset)
        log.info("dedup removed %d duplicate texts", before - len(dataset))
    glossary = load_glossary(args.glossary)
    kept, report = filter_corpus(dataset, glossary)
    if labels:
        save_labeled(LabeledDataset.from_entries(
            (rec, labels[rec.id]) for rec in kept.records), args.output)
    else:
        save_dataset(kept, args.output, "jsonl")
    if args.report:
        _write_csv(args.report, ("keyword", "theme", "hits"), report.rows())
    log.info("filter: %d rows read, %d rejected, %d matched glossary",
             total, rejected, len(kept))
    return 0


def cmd_preprocess(args) -> int:
    pairs = _load_any_corpus(_require(args.input, "filter"))
    sw = load_stopwords(args.stopwords_english, args.stopwords_trivial)
    seqs = [preprocess_tweet(rec, sw, label=lab) for rec, lab in pairs]
    save_token_sequences(seqs, args.output)
    empty = sum(1 for s in seqs if not s.tokens)
    total_tokens = sum(len(s.tokens) for s in seqs)
    unique = len({t for s in seqs for t in s.tokens})
    log.info("preprocess: %d docs, %d tokens (%d unique), %d empty docs",
             len(seqs), total_tokens, unique, empty)
    return 0


def cmd_split(args) -> int:
    seqs = load_token_sequences(_require(args.input, "preprocess"))
    if any(s.label is None for s in seqs):
        raise ValidationError("split requires a labeled token file")
    result = split_train_test(seqs, args.ratio, args.seed)
    save_token_sequences(result.train, args.train_output)
    save_token_sequences(result.test, args.test_output)
    log.info("split: train %d %s / test %d %s (seed %d)",
             len(result.train), label_counts(result.train),
             len(result.test), label_counts(result.test), args.seed)
    return 0


def _binary_sequences(seqs, stage: str):
    kept = [s for s in seqs if s.label in BINARY]
    dropped = len(seqs) - len(kept)
    if dropped:
        log.info("%s: ignoring %d docs without M/T labels", stage, dropped)
    return kept


def _drop_empty_for_training(seqs):
    kept = [s for s in seqs if s.tokens]
    if len(kept) != len(seqs):
        log.warning("excluding %d empty docs from training",
                    len(seqs) - len(kept))
    return kept


def _parse_hyper(pairs) -> dict:
    hyper = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep:
            raise ValidationError(f"--hyper wants KEY=VALUE, got {pair!r}")
        try:
            hyper[key] = json.loads(value)
        except json.JSONDecodeError:
            hyper[key] = value
    return hyper


def cmd_train(args) -> int:
    seqs = load_token_sequences(_require(args.train, "split"))
    if any(s.label is None for s in seqs):
        raise ValidationError("train requires a labeled token file")
    seqs = _drop_empty_for_training(_binary_sequences(seqs, "train"))
    method = method_from_name(args.method)
    space = build_feature_space(seqs, method)
    data = [(vectorize(s, space), s.label) for s in seqs]
    config = ModelConfig(model_type=args.model,
                         hyperparameters=_parse_hyper(args.hyper),
                         seed=args.seed)
    model = train_model(config, data)
    save_space(space, args.output_space)
    save_model(model, args.output_model)
    log.info("train: %s on %s, %d docs, vocabulary %d",
             args.model, method.name, len(data), len(space))
    return 0


def cmd_eval(args) -> int:
    seqs = load_token_sequences(_require(args.test, "split"))
    if any(s.label is None for s in seqs):
        raise ValidationError("eval requires a labeled token file")
    seqs = _binary_sequences(seqs, "eval")
    space = load_space(_require(args.space, "train"))
    model = load_model(_require(args.model, "train"), space)
    preds = [model.predict(vectorize(s, space)).label for s in seqs]
    cm = confusion(preds, [s.label for s in seqs])
    report = report_from_confusion(cm)
    text, csv_text = render_grid(
        {(model.model_type, space.method.name): report})
    if args.output:
        atomic_write(args.output, lambda f: f.write(csv_text))
    print(text, end="")
    log.info("eval: %d test docs, accuracy %.3f, macro-f1 %.3f",
             len(seqs), report.accuracy, report.macro_f1)
    return 0


def cmd_synth(args) -> int:
    spec = SynthSpec(seed=args.seed, n_m=args.n_m, n_t=args.n_t,
                     vocab_shared=args.vocab_shared, vocab_m=args.vocab_m,
                     vocab_t=args.vocab_t, signal=args.signal,
                     length_range=(args.min_len, args.max_len))
    labeled = generate(spec)
    save_labeled(labeled, args.output)
    save_spec(spec, str(args.output) + ".spec.json")
    log.info("synth: %d docs (%s) -> %s", len(labeled.entries),
             {k: v for k, v in labeled.class_counts.items() if v},
             args.output)
    return 0


def cmd_experiment(args) -> int:
    labeled = load_labeled(_require(args.corpus, "synth or finalize"))
    pairs = [(rec, lab) for rec, lab in labeled.entries if lab in BINARY]
    if len(pairs) < 2:
        raise ValidationError("corpus has fewer than 2 M/T-labeled tweets")
    sw = load_stopwords(args.stopwords_english, args.stopwords_trivial)
    seqs = [preprocess_tweet(rec, sw, label=lab) for rec, lab in pairs]

    model_types = [m.strip() for m in args.models.split(",") if m.strip()]
    methods = [method_from_name(m.strip())
               for m in args.methods.split(",") if m.strip()]
    if not model_types or not methods:
        raise ValidationError("need at least one model and one method")

    results = {}
    failures = 0
    for method in methods:
        if args.resplit_per_method:
            seed = zlib.crc32(f"{args.seed}:{method.name}".encode())
        else:
            seed = args.seed
        split = split_train_test(seqs, args.ratio, seed)
        train_docs = _drop_empty_for_training(list(split.train))
        space = build_feature_space(train_docs, method)
        train_data = [(vectorize(s, space), s.label) for s in train_docs]
        test_data = [(vectorize(s, space), s.label) for s in split.test]
        log.info("experiment: %s split %d/%d, vocabulary %d", method.name,
                 len(train_docs), len(split.test), len(space))
        for model_type in model_types:
            try:
                config = ModelConfig(model_type=model_type, seed=args.seed)
                model = train_model(config, train_data)
                preds = [model.predict(v).label for v, _ in test_data]
                cm = confusion(preds, [lab for _, lab in test_data])
                results[(model_type, method.name)] = report_from_confusion(cm)
            except Exception as exc:
                log.error("experiment cell (%s, %s) failed: %s", model_type,
                          method.name, exc)
                results[(model_type, method.name)] = None
                failures += 1

    # render grouped by model, methods in the requested order
    ordered = {(m, meth.name): results[(m, meth.name)]
               for m in model_types for meth in methods}
    text, csv_text = render_grid(ordered)
    outdir = Path(args.output_dir)
    atomic_write(outdir / "grid.csv", lambda f: f.write(csv_text))
    atomic_write(outdir / "grid.txt", lambda f: f.write(text))
    print(text, end="")
    if failures:
        log.error("experiment: %d of %d cells failed", failures,
                  len(ordered))
        return 1
    return 0


def cmd_annotate_serve(args) -> int:
    pairs = _load_any_corpus(_require(args.dataset, "filter"))
    dataset = Dataset(records=tuple(rec for rec, _ in pairs),
                      provenance=str(args.dataset))
    store = AnnotationStore(dataset, args.journal)
    server = make_server(store, args.output, host=args.host, port=args.port,
                         ui_dir=args.ui_dir)
    log.info("annotation service on http://%s:%d/ (journal %s)",
             args.host, server.port, args.journal)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        log.info("shutting down")
    finally:
        server.server_close()
        store.close()
    return 0


# -- parser ----------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="misinfo",
                     description="tweet misinformation pipeline workbench")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter", help="keep tweets matching the glossary")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("jsonl", "csv"))
    p.add_argument("--glossary", default=default_glossary_path())
    p.add_argument("--output", required=True)
    p.add_argument("--report", help="per-keyword hit counts CSV")
    p.add_argument("--dedup", action="store_true",
                   help="drop duplicate texts first")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("preprocess", help="clean, tokenize, stem")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--stopwords-english")
    p.add_argument("--stopwords-trivial")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("split", help="seeded train/test split")
    p.add_argument("--input", required=True)
    p.add_argument("--ratio", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--train-output", required=True)
    p.add_argument("--test-output", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("train", help="fit one model on a token file")
    p.add_argument("--train", required=True)
    p.add_argument("--model", required=True,
                   choices=("nb", "dt", "rf", "svm", "mem"))
    p.add_argument("--method", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--hyper", action="append", metavar="KEY=VALUE")
    p.add_argument("--output-model", required=True)
    p.add_argument("--output-space", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score a model on a token file")
    p.add_argument("--test", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--space", required=True)
    p.add_argument("--output", help="one-row grid CSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    p.add_argument("--output", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--n-m", type=int, default=210)
    p.add_argument("--n-t", type=int, default=314)
    p.add_argument("--vocab-shared", type=int, default=200)
    p.add_argument("--vocab-m", type=int, default=80)
    p.add_argument("--vocab-t", type=int, default=80)
    p.add_argument("--signal", type=float, default=0.7)
    p.add_argument("--min-len", type=int, default=2)
    p.add_argument("--max-len", type=int, default=32)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("experiment", help="full model-by-method grid")
    p.add_argument("--corpus", required=True, help="labeled JSONL")
    p.add_argument("--ratio", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--models", default="nb,dt,rf,svm,mem")
    p.add_argument("--methods", default="bow,unigram,bigram,trigram")
    p.add_argument("--resplit-per-method", action="store_true",
                   help="draw a fresh split per feature method")
    p.add_argument("--stopwords-english")
    p.add_argument("--stopwords-trivial")
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("annotate-serve", help="run the annotation service")
    p.add_argument("--dataset", required=True)
    p.add_argument("--journal", required=True)
    p.add_argument("--output", required=True,
                   help="finalized labeled JSONL path")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--ui-dir", help="serve this static UI directory")
    p.set_defaults(func=cmd_annotate_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except MisinfoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - internal failure path
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
