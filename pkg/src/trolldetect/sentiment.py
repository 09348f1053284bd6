"""Comment polarity scoring.

A naive-Bayes posterior over positive/negative classes is multiplied
by a word-similarity factor from the embedding model; the result is a
score in [0, 1] where 0 is extremely negative and 1 extremely
positive.  The similarity factor is the mean, over in-vocabulary
words, of the rescaled cosine between each word and the centroid of
the comment's word vectors; comments with no known words fall back to
the bare posterior.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .embedding import EmbeddingModel, cosine

FORMAT_NAME = "trolldetect-polarity"
FORMAT_VERSION = 1

POSITIVE, NEGATIVE = "positive", "negative"


class TrainingError(ValueError):
    pass


@dataclass
class PolarityModel:
    """Smoothed per-class word log-likelihoods plus class priors."""

    log_prior_pos: float
    log_prior_neg: float
    log_like_pos: dict[str, float]
    log_like_neg: dict[str, float]
    log_unseen_pos: float
    log_unseen_neg: float
    smoothing: float
    embedding: EmbeddingModel | None = None


def train_polarity(
    corpus: Iterable[tuple[Sequence[str], str]],
    embedding: EmbeddingModel | None = None,
    smoothing: float = 1.0,
) -> PolarityModel:
    """Count class priors and additively smoothed word likelihoods.

    ``corpus`` yields (word list, label) pairs with labels "positive"
    or "negative"; both classes must be present.
    """
    n_docs = {POSITIVE: 0, NEGATIVE: 0}
    counts = {POSITIVE: {}, NEGATIVE: {}}
    for words, label in corpus:
        if label not in n_docs:
            raise ValueError(f"bad polarity label {label!r}")
        n_docs[label] += 1
        bag = counts[label]
        for word in words:
            bag[word] = bag.get(word, 0) + 1
    if n_docs[POSITIVE] == 0 or n_docs[NEGATIVE] == 0:
        raise TrainingError("both polarity classes must be present")

    total_docs = n_docs[POSITIVE] + n_docs[NEGATIVE]
    vocab = sorted(set(counts[POSITIVE]) | set(counts[NEGATIVE]))
    k = float(smoothing)

    def log_table(bag):
        total = sum(bag.values())
        denom = total + k * (len(vocab) + 1)
        table = {w: math.log((bag.get(w, 0) + k) / denom) for w in vocab}
        return table, math.log(k / denom)

    log_like_pos, log_unseen_pos = log_table(counts[POSITIVE])
    log_like_neg, log_unseen_neg = log_table(counts[NEGATIVE])
    return PolarityModel(
        log_prior_pos=math.log(n_docs[POSITIVE] / total_docs),
        log_prior_neg=math.log(n_docs[NEGATIVE] / total_docs),
        log_like_pos=log_like_pos,
        log_like_neg=log_like_neg,
        log_unseen_pos=log_unseen_pos,
        log_unseen_neg=log_unseen_neg,
        smoothing=k,
        embedding=embedding,
    )


def class_log_scores(model: PolarityModel, words: Sequence[str]) -> tuple[float, float]:
    """Unnormalized log posterior of each class under conditional
    independence; unseen words use the smoothed unseen-bucket mass."""
    if not words:
        raise ValueError("posterior of an empty word list is undefined")
    pos = model.log_prior_pos
    neg = model.log_prior_neg
    for word in words:
        pos += model.log_like_pos.get(word, model.log_unseen_pos)
        neg += model.log_like_neg.get(word, model.log_unseen_neg)
    return pos, neg


def _logistic_of_gap(delta: float) -> float:
    # 1 / (1 + exp(delta)), safe against exp overflow on long comments
    if delta > 700.0:
        return 0.0
    if delta < -700.0:
        return 1.0
    return 1.0 / (1.0 + math.exp(delta))


def posterior_positive(model: PolarityModel, words: Sequence[str]) -> float:
    pos, neg = class_log_scores(model, words)
    return _logistic_of_gap(neg - pos)


def posterior_negative(model: PolarityModel, words: Sequence[str]) -> float:
    pos, neg = class_log_scores(model, words)
    return _logistic_of_gap(pos - neg)


def similarity_factor(model: PolarityModel, words: Sequence[str]) -> float:
    """Mean rescaled cosine between each in-vocabulary word and the
    centroid of the comment's word vectors; 1.0 when nothing is known."""
    if model.embedding is None:
        return 1.0
    vectors = [model.embedding.vector(w) for w in words if w in model.embedding]
    if not vectors:
        return 1.0
    centroid = np.mean(vectors, axis=0)
    return float(np.mean([(cosine(v, centroid) + 1.0) / 2.0 for v in vectors]))


def combine_score(posterior: float, factor: float) -> float:
    return min(1.0, max(0.0, posterior * factor))


def sentiment_score(model: PolarityModel, words: Sequence[str]) -> float:
    """Polarity score in [0, 1]: posterior times similarity factor."""
    return combine_score(posterior_positive(model, words), similarity_factor(model, words))


def score_histogram(scores: Sequence[float], width: float) -> list[tuple[float, int]]:
    """Fixed-width bins over [0, 1]; the last bin is closed at 1.0.

    Returns (bin lower edge, count) pairs covering the whole range, so
    counts always sum to len(scores).
    """
    if not (0.0 < width <= 1.0):
        raise ValueError(f"bin width must be in (0, 1], got {width}")
    n_bins = math.ceil(1.0 / width - 1e-9)
    counts = [0] * n_bins
    for s in scores:
        if not (0.0 <= s <= 1.0):
            raise ValueError(f"score {s} outside [0, 1]")
        counts[min(int(s / width + 1e-9), n_bins - 1)] += 1
    return [(i * width, c) for i, c in enumerate(counts)]


def write_histogram_csv(histogram: Sequence[tuple[float, int]], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["bin_lower", "count"])
        for lower, count in histogram:
            writer.writerow([f"{lower:.10g}", count])


def save_polarity(model: PolarityModel, path) -> None:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "log_prior_pos": model.log_prior_pos,
        "log_prior_neg": model.log_prior_neg,
        "log_like_pos": model.log_like_pos,
        "log_like_neg": model.log_like_neg,
        "log_unseen_pos": model.log_unseen_pos,
        "log_unseen_neg": model.log_unseen_neg,
        "smoothing": model.smoothing,
    }
    Path(path).write_text(json.dumps(doc, ensure_ascii=False, sort_keys=True), encoding="utf-8")


def load_polarity(path, embedding: EmbeddingModel | None = None) -> PolarityModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != FORMAT_NAME or doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"{path}: not a {FORMAT_NAME} v{FORMAT_VERSION} file")
    return PolarityModel(
        log_prior_pos=doc["log_prior_pos"],
        log_prior_neg=doc["log_prior_neg"],
        log_like_pos=doc["log_like_pos"],
        log_like_neg=doc["log_like_neg"],
        log_unseen_pos=doc["log_unseen_pos"],
        log_unseen_neg=doc["log_unseen_neg"],
        smoothing=doc["smoothing"],
        embedding=embedding,
    )
