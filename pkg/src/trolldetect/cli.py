"""Command-line entry point for the whole pipeline.

Subcommands: train-seg, segment, train-w2v, train-sentiment,
train-emotion, extract-features, train-troll, evaluate, rfe, score,
serve.  A --config file supplies defaults for any long option; command
line flags win.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bundle as bundle_mod
from . import classify, embedding, emotion, evaluation, seg_hmm, sentiment, service
from .config import load_config
from .corpus import (
    EmotionDocument,
    RejectedText,
    load_emotion_corpus,
    load_polarity_corpus,
    parse_comment_csv,
    parse_comment_packet,
    parse_sighan_corpus,
    preprocess_text,
)
from .features import read_features_csv, to_arrays, write_features_csv
from .gbdt import BoostConfig
from .svm import SvmConfig


def _say(message: str, data_on_stdout: bool = False) -> None:
    # one-line summary; moved to stderr when stdout carries data
    print(message, file=sys.stderr if data_on_stdout else sys.stdout)


def cmd_train_seg(args) -> int:
    corpus = parse_sighan_corpus(args.corpus)
    model = seg_hmm.train_segmenter(corpus, smoothing=args.smoothing)
    seg_hmm.save_segmenter(model, args.out)
    _say(f"trained segmenter on {len(corpus)} sentences, vocab {len(model.vocab)} -> {args.out}")
    return 0


def cmd_segment(args) -> int:
    model = seg_hmm.load_segmenter(args.model)
    lines = Path(args.input).read_text(encoding="utf-8").splitlines()
    out = sys.stdout if args.out is None else open(args.out, "w", encoding="utf-8")
    count = 0
    try:
        for line in lines:
            line = line.strip()
            if line:
                print(" ".join(seg_hmm.segment(model, line)), file=out)
                count += 1
    finally:
        if out is not sys.stdout:
            out.close()
    _say(f"segmented {count} line(s)", data_on_stdout=args.out is None)
    return 0


def _segmented_corpus(path):
    return [line.split() for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]


def cmd_train_w2v(args) -> int:
    corpus = _segmented_corpus(args.corpus)
    config = embedding.EmbeddingConfig(
        dimension=args.dimension,
        window=args.window,
        epochs=args.epochs,
        negative_samples=args.negative_samples,
        learning_rate=args.learning_rate,
        min_count=args.min_count,
        seed=args.seed,
    )
    model = embedding.train_embeddings(corpus, config)
    embedding.save_embeddings(model, args.out)
    _say(
        f"trained {model.dimension}-d embeddings for {len(model.words)} words "
        f"(loss {model.epoch_losses[0]:.4f} -> {model.epoch_losses[-1]:.4f}) -> {args.out}"
    )
    return 0


def _clean_and_segment(segmenter, text):
    return seg_hmm.segment_text(segmenter, preprocess_text(text))


def cmd_train_sentiment(args) -> int:
    segmenter = seg_hmm.load_segmenter(args.seg_model)
    docs = load_polarity_corpus(args.positive, args.negative)
    corpus = []
    rejected = 0
    for doc in docs:
        try:
            corpus.append((_clean_and_segment(segmenter, doc.text), doc.label))
        except RejectedText:
            rejected += 1
    model = sentiment.train_polarity(corpus, smoothing=args.smoothing)
    sentiment.save_polarity(model, args.out)
    _say(f"trained polarity model on {len(corpus)} docs ({rejected} rejected) -> {args.out}")
    return 0


def cmd_train_emotion(args) -> int:
    segmenter = seg_hmm.load_segmenter(args.seg_model)
    docs = load_emotion_corpus(args.corpus)
    cleaned = []
    rejected = 0
    for doc in docs:
        try:
            cleaned.append(EmotionDocument(preprocess_text(doc.text), doc.emotion))
        except RejectedText:
            rejected += 1
    model_set = emotion.train_emotion_models(cleaned, lambda text: seg_hmm.segment_text(segmenter, text))
    emotion.save_emotion_models(model_set, args.out)
    if args.table_csv:
        emotion.write_feature_table_csv(model_set.table, args.table_csv)
    _say(f"trained 6 emotion models on {len(cleaned)} docs ({rejected} rejected) -> {args.out}")
    return 0


def _read_original_text(args) -> str:
    if args.original_file:
        return Path(args.original_file).read_text(encoding="utf-8").strip()
    return args.original_text or ""


def cmd_extract_features(args) -> int:
    models = bundle_mod.load_bundle(args.models, require_troll=False)
    records = parse_comment_csv(args.comments)
    original = _read_original_text(args)
    try:
        original_score = bundle_mod.score_text(models, original).sentiment
    except RejectedText:
        original_score = 0.5

    from .features import build_feature_matrix

    def scorer(text):
        scores = bundle_mod.score_text(models, text)
        return scores.sentiment, scores.emotion_scores

    result = build_feature_matrix(records, scorer, original_score)
    write_features_csv(result.vectors, args.out)
    _say(f"extracted {len(result.vectors)} vectors ({len(result.dropped)} dropped) -> {args.out}")
    return 0


def _parse_indices(text):
    if not text:
        return None
    return tuple(int(x) for x in text.replace(",", " ").split())


def _classifier_config(args):
    if args.classifier == "boosted":
        return BoostConfig(
            rounds=args.rounds,
            depth=args.depth,
            learning_rate=args.learning_rate,
            min_child_weight=args.min_child_weight,
            seed=args.seed,
        )
    return SvmConfig(
        kernel=args.kernel,
        C=args.C,
        gamma=args.gamma,
        tolerance=args.tolerance,
        max_passes=args.max_passes,
        seed=args.seed,
    )


def cmd_train_troll(args) -> int:
    X, y = to_arrays(read_features_csv(args.features))
    indices = _parse_indices(args.feature_indices)
    model = classify.fit_troll_model(
        X, y,
        kind=args.classifier,
        feature_indices=indices,
        config=_classifier_config(args),
        threshold=args.threshold,
    )
    classify.save_troll_model(model, args.out)
    used = "all" if indices is None else ",".join(map(str, indices))
    _say(f"trained {args.classifier} troll model on {len(y)} rows (features {used}) -> {args.out}")
    return 0


def _trainer(args):
    if args.classifier == "boosted":
        return classify.boosted_trainer(_classifier_config(args), threshold=args.threshold)
    return classify.svm_trainer(_classifier_config(args))


def cmd_evaluate(args) -> int:
    X, y = to_arrays(read_features_csv(args.features))
    indices = _parse_indices(args.feature_indices)
    if indices is not None:
        X = X[:, list(indices)]
    report = evaluation.cross_validate(X, y, _trainer(args), k=args.k, seed=args.seed, feature_set=indices)
    if args.report:
        evaluation.write_report_csv(report, args.report)
    print(evaluation.format_report(report))
    _say(f"mean accuracy {report.mean_accuracy:.4f} over {args.k} folds")
    return 0


def cmd_rfe(args) -> int:
    X, y = to_arrays(read_features_csv(args.features))
    config = BoostConfig(
        rounds=args.rounds,
        depth=args.depth,
        learning_rate=args.learning_rate,
        min_child_weight=args.min_child_weight,
        seed=args.seed,
    )
    curve = classify.recursive_feature_elimination(X, y, config, k=args.k, seed=args.seed)
    classify.write_rfe_csv(curve, args.out)
    best = max(curve, key=lambda entry: entry[1])
    _say(
        f"rfe curve with {len(curve)} points -> {args.out}; "
        f"best {best[1]:.4f} with {len(best[0])} features"
    )
    return 0


def cmd_score(args) -> int:
    models = bundle_mod.load_bundle(args.models, require_troll=True)
    payload = Path(args.packet).read_bytes()
    result = parse_comment_packet(payload)
    outcome = bundle_mod.score_comments(
        models, result.records, _read_original_text(args), comment_ids=result.ids
    )

    import csv as _csv

    with open(args.out, "w", newline="", encoding="utf-8") as f:
        writer = _csv.writer(f)
        writer.writerow(["id", "sentiment", "emotion", "troll_probability", "troll_flag"])
        for s in outcome.scored:
            writer.writerow([s.comment_id, repr(s.sentiment), s.emotion, repr(s.troll_probability), int(s.troll_flag)])
        for r in outcome.rejected:
            writer.writerow([r.comment_id, "", "rejected:" + r.reason, "", ""])
    if args.histogram:
        hist = sentiment.score_histogram([s.sentiment for s in outcome.scored], args.hist_width)
        sentiment.write_histogram_csv(hist, args.histogram)
    flagged = sum(1 for s in outcome.scored if s.troll_flag)
    _say(
        f"scored {len(outcome.scored)} comment(s), rejected {len(outcome.rejected)}, "
        f"flagged {flagged} ({result.skipped} packet element(s) skipped) -> {args.out}"
    )
    return 0


def cmd_serve(args) -> int:
    models = bundle_mod.load_bundle(args.models, require_troll=True)
    service.serve(models, host=args.host, port=args.port)
    return 0


def build_parser() -> tuple[argparse.ArgumentParser, list[argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="trolldetect", description=__doc__)
    parser.add_argument("--config", help="key=value file supplying option defaults")
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers: list[argparse.ArgumentParser] = []

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--seed", type=int, default=0)
        subparsers.append(p)
        return p

    p = add("train-seg", cmd_train_seg, help="train the segmentation model")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--smoothing", type=float, default=1.0)

    p = add("segment", cmd_segment, help="segment text, one sentence per line")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--out")

    p = add("train-w2v", cmd_train_w2v, help="train word embeddings on a segmented corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dimension", type=int, default=100)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--negative-samples", type=int, default=5)
    p.add_argument("--learning-rate", type=float, default=0.025)
    p.add_argument("--min-count", type=int, default=2)

    p = add("train-sentiment", cmd_train_sentiment, help="train the polarity model")
    p.add_argument("--positive", required=True)
    p.add_argument("--negative", required=True)
    p.add_argument("--seg-model", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--smoothing", type=float, default=1.0)

    p = add("train-emotion", cmd_train_emotion, help="train the six emotion models")
    p.add_argument("--corpus", required=True)
    p.add_argument("--seg-model", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--table-csv", help="also export the feature table")

    p = add("extract-features", cmd_extract_features, help="build feature vectors from a comment CSV")
    p.add_argument("--models", required=True, help="model bundle directory")
    p.add_argument("--comments", required=True)
    p.add_argument("--original-text")
    p.add_argument("--original-file")
    p.add_argument("--out", required=True)

    def classifier_options(p, include_svm=True):
        p.add_argument("--rounds", type=int, default=100)
        p.add_argument("--depth", type=int, default=3)
        p.add_argument("--learning-rate", type=float, default=0.1)
        p.add_argument("--min-child-weight", type=float, default=1.0)
        if include_svm:
            p.add_argument("--classifier", choices=["boosted", "svm"], default="boosted")
            p.add_argument("--kernel", choices=["linear", "rbf"], default="rbf")
            p.add_argument("--C", type=float, default=1.0)
            p.add_argument("--gamma", type=float, default=None)
            p.add_argument("--tolerance", type=float, default=1e-3)
            p.add_argument("--max-passes", type=int, default=100)
        p.add_argument("--threshold", type=float, default=0.5)

    p = add("train-troll", cmd_train_troll, help="train a troll classifier on a feature CSV")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--feature-indices", help="e.g. '9,10,11'; default all")
    classifier_options(p)

    p = add("evaluate", cmd_evaluate, help="cross-validate a classifier on a feature CSV")
    p.add_argument("--features", required=True)
    p.add_argument("--feature-indices")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--report", help="write the per-fold report CSV here")
    classifier_options(p)

    p = add("rfe", cmd_rfe, help="recursive feature elimination curve")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--k", type=int, default=5)
    classifier_options(p, include_svm=False)

    p = add("score", cmd_score, help="score a recorded comment packet")
    p.add_argument("--models", required=True)
    p.add_argument("--packet", required=True)
    p.add_argument("--original-text")
    p.add_argument("--original-file")
    p.add_argument("--out", required=True)
    p.add_argument("--histogram", help="write the sentiment histogram CSV here")
    p.add_argument("--hist-width", type=float, default=0.02)

    p = add("serve", cmd_serve, help="run the HTTP scoring service")
    p.add_argument("--models", required=True)
    p.add_argument("--host", default=service.DEFAULT_HOST)
    p.add_argument("--port", type=int, default=service.DEFAULT_PORT)

    return parser, subparsers


def _apply_config(subparsers, config: dict[str, str]) -> None:
    # config values become subcommand defaults, cast with each option's
    # declared type; explicit command-line flags still win
    for p in subparsers:
        for action in p._actions:
            if action.dest in config:
                value = config[action.dest]
                if action.type is not None:
                    value = action.type(value)
                p.set_defaults(**{action.dest: value})
                action.required = False


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser, subparsers = build_parser()
    # first pass just to find --config; its values become option defaults
    config_path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            config_path = argv[i + 1]
        elif token.startswith("--config="):
            config_path = token.split("=", 1)[1]
    if config_path:
        try:
            _apply_config(subparsers, load_config(config_path))
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BrokenPipeError:
        return 1
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # uniform one-line diagnostics, exit 1
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
