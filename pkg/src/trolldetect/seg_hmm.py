"""Supervised B/M/E/S hidden Markov model for Chinese word segmentation.

Characters are the observations and the four positional tags are the
hidden states.  Training is closed-form relative-frequency counting
over a tagged corpus; decoding is Viterbi in log space with structural
legality enforced as hard constraints, so the decoder can only emit
sequences of the form (S | B M* E)+ regardless of the parameters.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import LEGAL_END, LEGAL_NEXT, LEGAL_START, TAGS, TaggedSentence

STATE_INDEX = {tag: i for i, tag in enumerate(TAGS)}  # B < M < E < S

# trans_allowed[i, j] == True iff TAGS[i] -> TAGS[j] can occur inside a
# legal sequence.
TRANS_ALLOWED = np.zeros((4, 4), dtype=bool)
for _a, _succs in LEGAL_NEXT.items():
    for _b in _succs:
        TRANS_ALLOWED[STATE_INDEX[_a], STATE_INDEX[_b]] = True

START_ALLOWED = np.array([tag in LEGAL_START for tag in TAGS])
END_ALLOWED = np.array([tag in LEGAL_END for tag in TAGS])

# Fallback rows for tags never seen in training: close the current word
# (or stay single).  Such states are unreachable during decoding, but
# keeping every row stochastic keeps the model well-formed.
_UNSEEN_ROW_SUCCESSOR = {"B": "E", "M": "E", "E": "S", "S": "S"}

FORMAT_NAME = "trolldetect-seg-hmm"
FORMAT_VERSION = 1


class TrainingError(ValueError):
    pass


@dataclass
class SegmentationHmm:
    """Initial/transition/emission parameters over the four tags.

    ``emit[i]`` maps every vocabulary character to its probability
    under state i; ``smoothing_mass[i]`` is the probability reserved
    for any character outside the vocabulary, so each state's emission
    row sums to one.
    """

    pi: np.ndarray
    trans: np.ndarray
    emit: tuple[dict[str, float], ...]
    vocab: frozenset[str]
    smoothing_mass: np.ndarray

    def emission_log(self, state: int, char: str) -> float:
        p = self.emit[state].get(char)
        if p is None:
            p = float(self.smoothing_mass[state])
        return math.log(p) if p > 0.0 else -math.inf


def train_segmenter(corpus: Iterable[TaggedSentence], smoothing: float = 1.0) -> SegmentationHmm:
    """Count relative frequencies from a tagged corpus.

    Emissions get add-k smoothing (k = ``smoothing``) over the training
    vocabulary plus one unseen bucket.  Transitions are not smoothed:
    structurally impossible tag bigrams keep probability zero.
    """
    pi_counts = np.zeros(4)
    trans_counts = np.zeros((4, 4))
    emit_counts: tuple[dict[str, int], ...] = ({}, {}, {}, {})
    n_sentences = 0

    for sentence in corpus:
        n_sentences += 1
        prev = None
        for char, tag in zip(sentence.chars, sentence.tags):
            state = STATE_INDEX[tag]
            if prev is None:
                pi_counts[state] += 1
            else:
                trans_counts[prev, state] += 1
            counts = emit_counts[state]
            counts[char] = counts.get(char, 0) + 1
            prev = state

    if n_sentences == 0:
        raise TrainingError("empty training corpus")

    pi = pi_counts / n_sentences

    trans = np.zeros((4, 4))
    for i, tag in enumerate(TAGS):
        row_total = trans_counts[i].sum()
        if row_total > 0:
            trans[i] = trans_counts[i] / row_total
        else:
            trans[i, STATE_INDEX[_UNSEEN_ROW_SUCCESSOR[tag]]] = 1.0

    vocab = sorted(set().union(*(counts.keys() for counts in emit_counts)))
    k = float(smoothing)
    emit = []
    smoothing_mass = np.zeros(4)
    for i in range(4):
        total = sum(emit_counts[i].values())
        denom = total + k * (len(vocab) + 1)
        emit.append({c: (emit_counts[i].get(c, 0) + k) / denom for c in vocab})
        smoothing_mass[i] = k / denom

    return SegmentationHmm(
        pi=pi,
        trans=trans,
        emit=tuple(emit),
        vocab=frozenset(vocab),
        smoothing_mass=smoothing_mass,
    )


def viterbi_decode(model: SegmentationHmm, sentence: Sequence[str]) -> list[str]:
    """Maximum-probability legal tag sequence for ``sentence``.

    Illegal starts, transitions, and endings carry -inf log
    probability.  Ties break toward the fixed state order B, M, E, S.
    """
    if len(sentence) == 0:
        raise ValueError("cannot decode an empty sentence")
    T = len(sentence)

    with np.errstate(divide="ignore"):
        log_pi = np.log(model.pi)
        log_trans = np.log(model.trans)
    log_trans[~TRANS_ALLOWED] = -np.inf

    # Structural feasibility is tracked separately from probability so a
    # zero-probability legal path still beats any illegal one.
    delta = np.full((T, 4), -np.inf)
    feasible = np.zeros((T, 4), dtype=bool)
    psi = np.zeros((T, 4), dtype=int)
    for j in range(4):
        if START_ALLOWED[j]:
            feasible[0, j] = True
            delta[0, j] = log_pi[j] + model.emission_log(j, sentence[0])

    for t in range(1, T):
        for j in range(4):
            best, best_i = -np.inf, -1
            for i in range(4):
                if not TRANS_ALLOWED[i, j] or not feasible[t - 1, i]:
                    continue
                score = delta[t - 1, i] + log_trans[i, j]
                if best_i < 0 or score > best:
                    best, best_i = score, i
            if best_i >= 0:
                feasible[t, j] = True
                delta[t, j] = best + model.emission_log(j, sentence[t])
                psi[t, j] = best_i

    last, last_score = -1, -np.inf
    for j in range(4):
        if END_ALLOWED[j] and feasible[T - 1, j] and (last < 0 or delta[T - 1, j] > last_score):
            last, last_score = j, delta[T - 1, j]

    path = [last]
    for t in range(T - 1, 0, -1):
        path.append(psi[t, path[-1]])
    path.reverse()
    return [TAGS[i] for i in path]


def words_from_tags(chars: Sequence[str], tags: Sequence[str]) -> list[str]:
    """Split characters into words along the tags.

    B and S open a word; M and E extend the current one.  Tolerant of
    any tag sequence, and the output always concatenates back to the
    input.
    """
    words: list[str] = []
    for char, tag in zip(chars, tags):
        if tag in ("B", "S") or not words:
            words.append(char)
        else:
            words[-1] += char
    return words


def segment(model: SegmentationHmm, sentence: str) -> list[str]:
    """Segment a sentence into words; empty input yields no words."""
    if not sentence:
        return []
    return words_from_tags(sentence, viterbi_decode(model, sentence))


def segment_text(model: SegmentationHmm, text: str) -> list[str]:
    """Segment mixed text: whitespace runs are hard word boundaries,
    each run is decoded independently."""
    words: list[str] = []
    for chunk in text.split():
        words.extend(segment(model, chunk))
    return words


def save_segmenter(model: SegmentationHmm, path) -> None:
    vocab = sorted(model.vocab)
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "states": list(TAGS),
        "pi": model.pi.tolist(),
        "trans": model.trans.tolist(),
        "smoothing_mass": model.smoothing_mass.tolist(),
        "vocab": vocab,
        "emit": [[row[c] for c in vocab] for row in model.emit],
    }
    Path(path).write_text(json.dumps(doc, ensure_ascii=False, sort_keys=True), encoding="utf-8")


def load_segmenter(path) -> SegmentationHmm:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != FORMAT_NAME:
        raise ValueError(f"{path}: not a {FORMAT_NAME} file")
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported version {doc.get('version')!r}")
    vocab = doc["vocab"]
    return SegmentationHmm(
        pi=np.array(doc["pi"]),
        trans=np.array(doc["trans"]),
        emit=tuple(dict(zip(vocab, row)) for row in doc["emit"]),
        vocab=frozenset(vocab),
        smoothing_mass=np.array(doc["smoothing_mass"]),
    )
