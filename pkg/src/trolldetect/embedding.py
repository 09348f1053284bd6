"""Word embeddings trained from scratch with skip-gram and negative
sampling.

Training is single-threaded stochastic gradient descent, deterministic
for a fixed seed.  The embedding of a word is its input vector; output
vectors only shape the objective.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

FORMAT_FLOAT = "{:.17g}"


class OutOfVocabularyError(KeyError):
    def __init__(self, word: str):
        super().__init__(word)
        self.word = word

    def __str__(self):
        return f"word {self.word!r} is not in the embedding vocabulary"


class TrainingError(ValueError):
    pass


@dataclass
class EmbeddingConfig:
    dimension: int = 100
    window: int = 5
    epochs: int = 5
    negative_samples: int = 5
    learning_rate: float = 0.025
    min_count: int = 2
    seed: int = 1


@dataclass
class EmbeddingModel:
    dimension: int
    window: int
    words: list[str]
    vectors: np.ndarray          # shape (len(words), dimension)
    counts: dict[str, int] = field(default_factory=dict)
    epoch_losses: list[float] = field(default_factory=list)

    def __post_init__(self):
        self.index = {w: i for i, w in enumerate(self.words)}

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def vector(self, word: str) -> np.ndarray:
        try:
            return self.vectors[self.index[word]]
        except KeyError:
            raise OutOfVocabularyError(word) from None


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def sgns_loss_and_grads(center_vec, context_vec, negative_vecs):
    """Loss and analytic gradients for one positive pair plus its
    negative samples.

    loss = -log sigmoid(u_o . v_c) - sum_k log sigmoid(-u_k . v_c)

    Returns (loss, d_center, d_context, d_negatives); the gradient of
    the loss with respect to each input.
    """
    center_vec = np.asarray(center_vec, dtype=float)
    context_vec = np.asarray(context_vec, dtype=float)
    negative_vecs = np.asarray(negative_vecs, dtype=float).reshape(-1, center_vec.shape[0])

    pos_score = _sigmoid(context_vec @ center_vec)
    neg_scores = _sigmoid(negative_vecs @ center_vec)

    eps = 1e-12
    loss = -np.log(max(pos_score, eps)) - np.sum(np.log(np.maximum(1.0 - neg_scores, eps)))

    d_context = (pos_score - 1.0) * center_vec
    d_negatives = neg_scores[:, None] * center_vec[None, :]
    d_center = (pos_score - 1.0) * context_vec + neg_scores @ negative_vecs
    return float(loss), d_center, d_context, d_negatives


def _build_vocabulary(corpus, min_count):
    counts: dict[str, int] = {}
    for sentence in corpus:
        for word in sentence:
            counts[word] = counts.get(word, 0) + 1
    kept = {w: c for w, c in counts.items() if c >= min_count}
    # frequency-sorted order keeps training and the sampling table
    # independent of corpus iteration details
    words = sorted(kept, key=lambda w: (-kept[w], w))
    return words, kept


def train_embeddings(corpus: Sequence[Sequence[str]], config: EmbeddingConfig | None = None) -> EmbeddingModel:
    """Train skip-gram embeddings over segmented sentences.

    Negative samples follow the unigram^(3/4) distribution; the
    learning rate decays linearly over all updates.  Raises
    TrainingError if min-count filtering empties the corpus.
    """
    config = config or EmbeddingConfig()
    words, counts = _build_vocabulary(corpus, config.min_count)
    if not words:
        raise TrainingError("no words survive min-count filtering")
    index = {w: i for i, w in enumerate(words)}

    sentences = [[index[w] for w in sentence if w in index] for sentence in corpus]
    sentences = [s for s in sentences if len(s) >= 2]
    n_pairs_per_epoch = 0
    for s in sentences:
        for i in range(len(s)):
            lo, hi = max(0, i - config.window), min(len(s), i + config.window + 1)
            n_pairs_per_epoch += (hi - lo) - 1
    if n_pairs_per_epoch == 0:
        raise TrainingError("corpus has no word pairs within the window")

    rng = np.random.default_rng(config.seed)
    dim = config.dimension
    vocab_size = len(words)
    w_in = (rng.random((vocab_size, dim)) - 0.5) / dim
    w_out = np.zeros((vocab_size, dim))

    noise = np.array([counts[w] for w in words], dtype=float) ** 0.75
    noise_cum = np.cumsum(noise / noise.sum())

    total_updates = config.epochs * n_pairs_per_epoch
    min_lr = config.learning_rate * 1e-4
    done = 0
    epoch_losses = []
    for _ in range(config.epochs):
        epoch_loss = 0.0
        for sentence in sentences:
            for i, center in enumerate(sentence):
                lo, hi = max(0, i - config.window), min(len(sentence), i + config.window + 1)
                for j in range(lo, hi):
                    if j == i:
                        continue
                    context = sentence[j]
                    draws = np.searchsorted(noise_cum, rng.random(config.negative_samples))
                    negatives = draws[draws != context]
                    lr = max(min_lr, config.learning_rate * (1.0 - done / total_updates))

                    loss, d_center, d_context, d_negs = sgns_loss_and_grads(
                        w_in[center], w_out[context], w_out[negatives]
                    )
                    w_in[center] -= lr * d_center
                    w_out[context] -= lr * d_context
                    np.subtract.at(w_out, negatives, lr * d_negs)  # duplicates accumulate

                    epoch_loss += loss
                    done += 1
        epoch_losses.append(epoch_loss / n_pairs_per_epoch)

    return EmbeddingModel(
        dimension=dim,
        window=config.window,
        words=words,
        vectors=w_in,
        counts=counts,
        epoch_losses=epoch_losses,
    )


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def similarity(model: EmbeddingModel, w1: str, w2: str) -> float:
    """Cosine similarity of two vocabulary words."""
    return cosine(model.vector(w1), model.vector(w2))


def analogy(model: EmbeddingModel, a: str, b: str, c: str) -> list[tuple[str, float]]:
    """Vocabulary ranked by closeness to V(a) - V(b) + V(c), query
    words excluded."""
    target = model.vector(a) - model.vector(b) + model.vector(c)
    exclude = {a, b, c}
    ranked = [(w, cosine(target, model.vectors[i])) for i, w in enumerate(model.words) if w not in exclude]
    ranked.sort(key=lambda pair: (-pair[1], pair[0]))
    return ranked


def save_embeddings(model: EmbeddingModel, path) -> None:
    """Text format: header "<dimension> <vocab_size>", then one word
    and its vector components per line."""
    lines = [f"{model.dimension} {len(model.words)}"]
    for i, word in enumerate(model.words):
        floats = " ".join(FORMAT_FLOAT.format(x) for x in model.vectors[i])
        lines.append(f"{word} {floats}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_embeddings(path) -> EmbeddingModel:
    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text:
        raise ValueError(f"{path}: empty embedding file")
    try:
        dimension, vocab_size = (int(x) for x in text[0].split())
    except ValueError:
        raise ValueError(f"{path}: bad header {text[0]!r}") from None
    words = []
    vectors = np.zeros((vocab_size, dimension))
    rows = [line for line in text[1:] if line.strip()]
    if len(rows) != vocab_size:
        raise ValueError(f"{path}: header claims {vocab_size} words, found {len(rows)}")
    for i, line in enumerate(rows):
        parts = line.rsplit(" ", dimension)
        if len(parts) != dimension + 1:
            raise ValueError(f"{path}: line {i + 2}: expected {dimension} components")
        words.append(parts[0])
        vectors[i] = [float(x) for x in parts[1:]]
    return EmbeddingModel(dimension=dimension, window=0, words=words, vectors=vectors)
