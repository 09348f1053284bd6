"""Model bundle: every trained artifact the scoring pipeline needs,
stored under one directory with fixed file names, plus the per-comment
scoring pipeline shared by the CLI and the HTTP service.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import classify, embedding, emotion, seg_hmm, sentiment
from .corpus import CommentRecord, RejectedText, Translator, preprocess_text
from .features import build_feature_vector, freq_comment_flags

SEGMENTER_FILE = "segmenter.json"
EMBEDDINGS_FILE = "embeddings.txt"
POLARITY_FILE = "polarity.json"
EMOTION_FILE = "emotion.json"
TROLL_FILE = "troll.json"


@dataclass
class ModelBundle:
    segmenter: seg_hmm.SegmentationHmm
    embedding: embedding.EmbeddingModel
    polarity: sentiment.PolarityModel
    emotions: emotion.EmotionModelSet
    troll: classify.TrollModel | None = None

    def versions(self) -> dict[str, str]:
        doc = {
            "segmenter": f"{seg_hmm.FORMAT_NAME}/{seg_hmm.FORMAT_VERSION}",
            "embeddings": f"text-vectors/{self.embedding.dimension}d",
            "polarity": f"{sentiment.FORMAT_NAME}/{sentiment.FORMAT_VERSION}",
            "emotion": f"{emotion.FORMAT_NAME}/{emotion.FORMAT_VERSION}",
        }
        if self.troll is not None:
            doc["troll"] = f"{classify.FORMAT_NAME}/{classify.FORMAT_VERSION}:{self.troll.kind}"
        return doc


def load_bundle(directory, require_troll: bool = True) -> ModelBundle:
    directory = Path(directory)
    for name in (SEGMENTER_FILE, EMBEDDINGS_FILE, POLARITY_FILE, EMOTION_FILE):
        if not (directory / name).exists():
            raise FileNotFoundError(f"model bundle is missing {name} in {directory}")
    troll_path = directory / TROLL_FILE
    if require_troll and not troll_path.exists():
        raise FileNotFoundError(f"model bundle is missing {TROLL_FILE} in {directory}")

    vectors = embedding.load_embeddings(directory / EMBEDDINGS_FILE)
    return ModelBundle(
        segmenter=seg_hmm.load_segmenter(directory / SEGMENTER_FILE),
        embedding=vectors,
        polarity=sentiment.load_polarity(directory / POLARITY_FILE, embedding=vectors),
        emotions=emotion.load_emotion_models(directory / EMOTION_FILE),
        troll=classify.load_troll_model(troll_path) if troll_path.exists() else None,
    )


@dataclass
class TextScores:
    words: list[str]
    sentiment: float
    emotion: str
    emotion_scores: dict[str, float]


def score_text(bundle: ModelBundle, text: str, translator: Translator | None = None) -> TextScores:
    """preprocess -> segment -> polarity -> emotion for one comment.

    Raises RejectedText when preprocessing refuses the input.
    """
    cleaned = preprocess_text(text, translator=translator)
    words = seg_hmm.segment_text(bundle.segmenter, cleaned)
    polarity = sentiment.sentiment_score(bundle.polarity, words)
    label, scores = emotion.classify_emotion(bundle.emotions, words)
    return TextScores(words=words, sentiment=polarity, emotion=label, emotion_scores=scores)


@dataclass
class ScoredComment:
    index: int
    comment_id: str
    sentiment: float
    emotion: str
    troll_probability: float
    troll_flag: bool


@dataclass
class RejectedComment:
    index: int
    comment_id: str
    reason: str


@dataclass
class ScoreOutcome:
    scored: list[ScoredComment]
    rejected: list[RejectedComment]
    original_sentiment: float


def score_comments(
    bundle: ModelBundle,
    records: Sequence[CommentRecord],
    original_text: str,
    comment_ids: Sequence[str] | None = None,
    translator: Translator | None = None,
) -> ScoreOutcome:
    """Run the full pipeline over one tweet's comments.

    An unscoreable original tweet falls back to a neutral 0.5 before
    the difference feature is taken.  Frequent-comment flags are
    computed over all records, rejected ones included.
    """
    if bundle.troll is None:
        raise ValueError("bundle has no troll model loaded")
    if comment_ids is None:
        comment_ids = [str(i) for i in range(len(records))]
    try:
        original = score_text(bundle, original_text, translator).sentiment
    except RejectedText:
        original = 0.5

    flags = freq_comment_flags(records)
    scored: list[ScoredComment] = []
    rejected: list[RejectedComment] = []
    for i, (record, freq_flag) in enumerate(zip(records, flags)):
        try:
            scores = score_text(bundle, record.text, translator)
        except RejectedText as rejection:
            rejected.append(RejectedComment(index=i, comment_id=comment_ids[i], reason=rejection.reason))
            continue
        vector = build_feature_vector(record, freq_flag, scores.sentiment, scores.emotion_scores, original)
        probability, flag = classify.predict_one(bundle.troll, vector.to_array())
        if bundle.troll.kind == "svm":
            # the response wants [0, 1]; the logistic map keeps the
            # margin>0 flag at exactly probability>0.5
            probability = 1.0 / (1.0 + math.exp(-max(-700.0, min(700.0, probability))))
        scored.append(
            ScoredComment(
                index=i,
                comment_id=comment_ids[i],
                sentiment=scores.sentiment,
                emotion=scores.emotion,
                troll_probability=probability,
                troll_flag=flag,
            )
        )
    return ScoreOutcome(scored=scored, rejected=rejected, original_sentiment=original)
