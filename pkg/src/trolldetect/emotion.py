"""Six-way emotion classification.

Each (word, emotion) pair carries three association features: mutual
information, a chi-square dependence statistic, and TF-IDF.  One model
per emotion scores a comment by walking the deterministic three-state
chain MI -> CHI -> TF-IDF and multiplying Jaccard emission
probabilities; the winning emotion is the argmax.

Feature values are quantized to two decimals before Jaccard matching:
exact real-valued matching would never fire, the grid makes the
M11/M10/M01 overlap counts well-defined.  A word's quantized triple at
classification time therefore matches training exactly whenever the
word was seen in training.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .corpus import EMOTIONS

FORMAT_NAME = "trolldetect-emotion"
FORMAT_VERSION = 1

STATE_FEATURES = ("mi", "chi", "tfidf")
UNKNOWN = "unknown"

# Deterministic chain: state q hands off to q+1 with probability 1.
CHAIN_TRANSITION = np.array([
    [0.0, 1.0, 0.0],
    [0.0, 0.0, 1.0],
    [0.0, 0.0, 0.0],
])

# Zero Jaccard overlap contributes this floor instead of -inf so models
# stay comparable; see classify_feature_rows.
EMISSION_FLOOR = 1e-12


class TrainingError(ValueError):
    pass


# --- association formulas ---------------------------------------------------


def mutual_information(p_t_given_e: float, p_e: float) -> float:
    """ln(P(t|e) / P(e)); both probabilities must be positive."""
    if p_t_given_e <= 0.0 or p_e <= 0.0:
        raise ValueError("mutual information needs positive smoothed probabilities")
    return math.log(p_t_given_e / p_e)


def chi_square(a: float, b: float, c: float, d: float, n: float) -> float:
    """n(ad - bc)^2 / ((a+b)(c+d)(a+c)(b+d)) over a 2x2 contingency
    table: word presence/absence against one emotion vs the rest."""
    for name, marginal in (("A+B", a + b), ("C+D", c + d), ("A+C", a + c), ("B+D", b + d)):
        if marginal <= 0:
            raise ValueError(f"chi-square marginal {name} must be positive")
    return n * (a * d - b * c) ** 2 / ((a + b) * (c + d) * (a + c) * (b + d))


def tf_idf(n_et: float, n_t_total: float, n_docs: float, n_e: float) -> float:
    """(N_et / sum_k N_kt) * ln(N / n_e + 0.01)."""
    if n_t_total <= 0:
        raise ValueError("word was never observed")
    if n_e <= 0:
        raise ValueError("emotion has no documents")
    return (n_et / n_t_total) * math.log(n_docs / n_e + 0.01)


def jaccard_emission(m11: float, m10: float, m01: float) -> float:
    """M11 / (M11 + M10 + M01)."""
    total = m11 + m10 + m01
    if total <= 0:
        raise ValueError("all Jaccard counts are zero")
    return m11 / total


def quantize(x: float) -> str:
    v = round(float(x), 2)
    if v == 0.0:
        v = 0.0  # fold -0.0
    return f"{v:.2f}"


# --- feature table ----------------------------------------------------------


@dataclass
class EmotionFeatureTable:
    """(word, emotion) -> (mi, chi, tfidf), with corpus totals."""

    vocabulary: list[str]
    n_docs: int
    docs_per_emotion: dict[str, int]
    entries: dict[str, dict[str, tuple[float, float, float]]]  # word -> emotion -> triple

    def triple(self, word: str, emotion: str) -> tuple[float, float, float] | None:
        by_emotion = self.entries.get(word)
        return by_emotion[emotion] if by_emotion else None


def build_feature_table(segmented_docs: Sequence[tuple[Sequence[str], str]]) -> EmotionFeatureTable:
    """Single pass over (word list, emotion) pairs.

    MI uses add-one smoothed document frequency for P(t|e) and the raw
    class frequency for P(e).  Degenerate chi-square marginals (a word
    present in every document) record 0.0 rather than failing.
    """
    n_e = {e: 0 for e in EMOTIONS}
    doc_freq: dict[str, dict[str, int]] = {}
    term_freq: dict[str, dict[str, int]] = {}
    for words, emotion in segmented_docs:
        if emotion not in n_e:
            raise TrainingError(f"unknown emotion {emotion!r}")
        n_e[emotion] += 1
        for word in set(words):
            doc_freq.setdefault(word, {e: 0 for e in EMOTIONS})[emotion] += 1
        for word in words:
            term_freq.setdefault(word, {e: 0 for e in EMOTIONS})[emotion] += 1

    missing = [e for e in EMOTIONS if n_e[e] == 0]
    if missing:
        raise TrainingError(f"no documents for emotion(s): {', '.join(missing)}")

    n_docs = sum(n_e.values())
    vocabulary = sorted(doc_freq)
    entries: dict[str, dict[str, tuple[float, float, float]]] = {}
    for word in vocabulary:
        df = doc_freq[word]
        tf = term_freq[word]
        total_tf = sum(tf.values())
        per_emotion = {}
        for emotion in EMOTIONS:
            a = df[emotion]
            b = sum(df[e] for e in EMOTIONS if e != emotion)
            c = n_e[emotion] - a
            d = (n_docs - n_e[emotion]) - b
            mi = mutual_information((a + 1) / (n_e[emotion] + 2), n_e[emotion] / n_docs)
            try:
                chi = chi_square(a, b, c, d, n_docs)
            except ValueError:
                chi = 0.0
            tfidf = tf_idf(tf[emotion], total_tf, n_docs, n_e[emotion])
            per_emotion[emotion] = (mi, chi, tfidf)
        entries[word] = per_emotion
    return EmotionFeatureTable(vocabulary, n_docs, n_e, entries)


def write_feature_table_csv(table: EmotionFeatureTable, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["word", "emotion", "mi", "chi", "tfidf"])
        for word in table.vocabulary:
            for emotion in EMOTIONS:
                mi, chi, tfidf = table.entries[word][emotion]
                writer.writerow([word, emotion, repr(mi), repr(chi), repr(tfidf)])


# --- per-emotion models -----------------------------------------------------


@dataclass
class EmotionHmm:
    """Three-state chain for one emotion.

    ``jaccard[k]`` maps a quantized feature value to its
    (M11, M10, M01) overlap counts between the set of training tweets
    containing that value at state k and the set containing the
    state's characteristic (mean) value.
    """

    emotion: str
    means: tuple[float, float, float]
    jaccard: tuple[dict[str, tuple[int, int, int]], ...]

    def emission(self, state: int, value: float) -> float:
        counts = self.jaccard[state].get(quantize(value))
        if counts is None:
            return 0.0
        m11, m10, m01 = counts
        return jaccard_emission(m11, m10, m01) if (m11 + m10 + m01) > 0 else 0.0


@dataclass
class EmotionModelSet:
    table: EmotionFeatureTable
    models: dict[str, EmotionHmm]


def _fit_emotion(emotion: str, docs: list[Sequence[str]], table: EmotionFeatureTable) -> EmotionHmm:
    triples_per_doc = [
        [table.entries[w][emotion] for w in words if w in table.entries]
        for words in docs
    ]
    all_triples = [t for doc in triples_per_doc for t in doc]
    if not all_triples:
        raise TrainingError(f"emotion {emotion!r} has no in-vocabulary words")
    means = tuple(float(np.mean([t[k] for t in all_triples])) for k in range(3))

    jaccard = []
    for k in range(3):
        state_key = quantize(means[k])
        docs_with_state = [
            any(quantize(t[k]) == state_key for t in doc) for doc in triples_per_doc
        ]
        observed = sorted({quantize(t[k]) for doc in triples_per_doc for t in doc})
        counts: dict[str, tuple[int, int, int]] = {}
        for value in observed:
            m11 = m10 = m01 = 0
            for doc, has_state in zip(triples_per_doc, docs_with_state):
                has_value = any(quantize(t[k]) == value for t in doc)
                if has_value and has_state:
                    m11 += 1
                elif has_state:
                    m10 += 1
                elif has_value:
                    m01 += 1
            counts[value] = (m11, m10, m01)
        jaccard.append(counts)
    return EmotionHmm(emotion=emotion, means=means, jaccard=tuple(jaccard))


def train_emotion_models(
    corpus: Iterable,
    segment_fn: Callable[[str], Sequence[str]],
    table_builder: Callable[[Sequence[tuple[Sequence[str], str]]], EmotionFeatureTable] = build_feature_table,
) -> EmotionModelSet:
    """Fit one chain model per emotion.

    ``corpus`` yields EmotionDocument-like objects (.text, .emotion);
    ``segment_fn`` turns text into words.  Every emotion needs at
    least one document.
    """
    segmented = [(list(segment_fn(doc.text)), doc.emotion) for doc in corpus]
    present = {emotion for _, emotion in segmented}
    missing = [e for e in EMOTIONS if e not in present]
    if missing:
        raise TrainingError(f"no documents for emotion(s): {', '.join(missing)}")

    table = table_builder(segmented)
    models = {}
    for emotion in EMOTIONS:
        docs = [words for words, e in segmented if e == emotion]
        models[emotion] = _fit_emotion(emotion, docs, table)
    return EmotionModelSet(table=table, models=models)


# --- classification ---------------------------------------------------------


def model_log_scores(models: dict[str, EmotionHmm], rows: Sequence[dict[str, Sequence[float]]]) -> tuple[np.ndarray, bool]:
    """Per-model log score for per-word feature rows.

    ``rows`` is one entry per word mapping emotion -> (mi, chi, tfidf),
    the shape of the per-word feature listing.  Each word's triple
    walks the chain; zero emissions contribute log(EMISSION_FLOOR).
    Returns (six log scores in fixed emotion order, whether any
    emission anywhere was positive).
    """
    scores = np.zeros(len(EMOTIONS))
    any_positive = False
    for i, emotion in enumerate(EMOTIONS):
        model = models[emotion]
        total = 0.0
        for row in rows:
            triple = row.get(emotion)
            if triple is None:
                continue
            for k in range(3):
                p = model.emission(k, triple[k])
                if p > 0.0:
                    any_positive = True
                total += math.log(p if p > 0.0 else EMISSION_FLOOR)
        scores[i] = total
    return scores, any_positive


def winner_from_scores(scores: np.ndarray) -> str:
    return EMOTIONS[int(np.argmax(scores))]


def classify_feature_rows(
    models: dict[str, EmotionHmm], rows: Sequence[dict[str, Sequence[float]]]
) -> tuple[str, dict[str, float]]:
    """Classify from precomputed per-word feature rows."""
    if not rows:
        return UNKNOWN, {e: 0.0 for e in EMOTIONS}
    scores, any_positive = model_log_scores(models, rows)
    if not any_positive:
        return UNKNOWN, {e: 0.0 for e in EMOTIONS}
    shifted = np.exp(scores - scores.max())
    probabilities = shifted / shifted.sum()
    return winner_from_scores(scores), {e: float(p) for e, p in zip(EMOTIONS, probabilities)}


def classify_emotion(model_set: EmotionModelSet, words: Sequence[str]) -> tuple[str, dict[str, float]]:
    """Assign the argmax emotion to a segmented comment.

    Out-of-vocabulary words carry no features and are skipped; if
    nothing matches any model the outcome is UNKNOWN with zero scores.
    """
    if not words:
        raise ValueError("cannot classify an empty word list")
    rows = []
    for word in words:
        by_emotion = model_set.table.entries.get(word)
        if by_emotion is not None:
            rows.append(by_emotion)
    return classify_feature_rows(model_set.models, rows)


# --- persistence ------------------------------------------------------------


def save_emotion_models(model_set: EmotionModelSet, path) -> None:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "n_docs": model_set.table.n_docs,
        "docs_per_emotion": model_set.table.docs_per_emotion,
        "vocabulary": model_set.table.vocabulary,
        "entries": {
            word: {e: list(t) for e, t in by_emotion.items()}
            for word, by_emotion in model_set.table.entries.items()
        },
        "models": {
            emotion: {
                "means": list(model.means),
                "jaccard": [dict(sorted(table.items())) for table in model.jaccard],
            }
            for emotion, model in model_set.models.items()
        },
    }
    Path(path).write_text(json.dumps(doc, ensure_ascii=False, sort_keys=True), encoding="utf-8")


def load_emotion_models(path) -> EmotionModelSet:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != FORMAT_NAME or doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"{path}: not a {FORMAT_NAME} v{FORMAT_VERSION} file")
    table = EmotionFeatureTable(
        vocabulary=doc["vocabulary"],
        n_docs=doc["n_docs"],
        docs_per_emotion=doc["docs_per_emotion"],
        entries={
            word: {e: tuple(t) for e, t in by_emotion.items()}
            for word, by_emotion in doc["entries"].items()
        },
    )
    models = {
        emotion: EmotionHmm(
            emotion=emotion,
            means=tuple(payload["means"]),
            jaccard=tuple({v: tuple(c) for v, c in table_.items()} for table_ in payload["jaccard"]),
        )
        for emotion, payload in doc["models"].items()
    }
    return EmotionModelSet(table=table, models=models)
