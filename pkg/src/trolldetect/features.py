"""Troll-detection feature vectors.

Nineteen features per comment: seven raw profile/comment numbers, two
derived flags, the following/follower and posts/follower ratios, the
polarity score, its difference against the original tweet's score, and
six emotion scores.  The CSV layout indexes them F0..F18.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .corpus import TROLL_LABELS, CommentRecord, RejectedText

FEATURE_NAMES = (
    "follower",
    "following",
    "original_post",
    "urank",
    "verified",
    "like_count",
    "floor_number",
    "description",
    "freqComment",
    "ffRatio",
    "foRatio",
    "sentiment",
    "diffOriginalSenti",
    "happy",
    "sad",
    "anger",
    "disgust",
    "fear",
    "surprise",
)

# feature columns F13..F18 in emotion-key order
EMOTION_FEATURE_KEYS = ("happiness", "sadness", "anger", "disgust", "fear", "surprise")

RATIO_CAP = 1e6

# (sentiment score, emotion scores keyed like EMOTION_FEATURE_KEYS);
# raises RejectedText for unscoreable text
TextScorer = Callable[[str], tuple[float, dict[str, float]]]


@dataclass
class FeatureVector:
    follower: float
    following: float
    original_post: float
    urank: float
    verified: float
    like_count: float
    floor_number: float
    description: float
    freq_comment: float
    ff_ratio: float
    fo_ratio: float
    sentiment: float
    diff_original_senti: float
    happy: float
    sad: float
    anger: float
    disgust: float
    fear: float
    surprise: float
    label: str | None = None

    def to_array(self) -> np.ndarray:
        return np.array([
            self.follower,
            self.following,
            self.original_post,
            self.urank,
            self.verified,
            self.like_count,
            self.floor_number,
            self.description,
            self.freq_comment,
            self.ff_ratio,
            self.fo_ratio,
            self.sentiment,
            self.diff_original_senti,
            self.happy,
            self.sad,
            self.anger,
            self.disgust,
            self.fear,
            self.surprise,
        ])


def ff_ratio(following: float, follower: float, cap: float = RATIO_CAP) -> float:
    """following / follower, with zero-follower accounts capped rather
    than dropped: those are precisely the suspicious ones."""
    if follower > 0:
        return following / follower
    return 0.0 if following == 0 else cap


def fo_ratio(original_post: float, follower: float, cap: float = RATIO_CAP) -> float:
    if follower > 0:
        return original_post / follower
    return 0.0 if original_post == 0 else cap


def diff_original_senti(comment_score: float, original_score: float) -> float:
    return comment_score - original_score


def freq_comment_flags(records: Sequence[CommentRecord]) -> list[int]:
    """Flag users commenting more often than the median multi-commenter
    under one tweet.

    Users with a single comment always get 0; the median is taken over
    the comment counts of users with more than one comment, and the
    comparison is strict.
    """
    tweet_ids = {r.tweet_id for r in records}
    if len(tweet_ids) > 1:
        raise ValueError(f"records span several tweets: {sorted(tweet_ids)}")
    counts: dict[str, int] = {}
    for r in records:
        counts[r.uid] = counts.get(r.uid, 0) + 1
    multi = [c for c in counts.values() if c > 1]
    if not multi:
        return [0] * len(records)
    median = statistics.median(multi)
    return [1 if counts[r.uid] > 1 and counts[r.uid] > median else 0 for r in records]


@dataclass
class FeatureMatrixResult:
    vectors: list[FeatureVector]
    dropped: list[tuple[int, str]]  # (record index, rejection reason)


def build_feature_vector(
    record: CommentRecord,
    freq_flag: int,
    sentiment: float,
    emotion_scores: dict[str, float],
    original_score: float,
) -> FeatureVector:
    return FeatureVector(
        follower=float(record.followers_count),
        following=float(record.follow_count),
        original_post=float(record.status_count),
        urank=float(record.urank),
        verified=1.0 if record.verified else 0.0,
        like_count=float(record.like_count),
        floor_number=float(record.floor_number),
        description=1.0 if record.description.strip() else 0.0,
        freq_comment=float(freq_flag),
        ff_ratio=ff_ratio(record.follow_count, record.followers_count),
        fo_ratio=fo_ratio(record.status_count, record.followers_count),
        sentiment=sentiment,
        diff_original_senti=diff_original_senti(sentiment, original_score),
        happy=emotion_scores.get("happiness", 0.0),
        sad=emotion_scores.get("sadness", 0.0),
        anger=emotion_scores.get("anger", 0.0),
        disgust=emotion_scores.get("disgust", 0.0),
        fear=emotion_scores.get("fear", 0.0),
        surprise=emotion_scores.get("surprise", 0.0),
        label=record.label,
    )


def build_feature_matrix(
    records: Sequence[CommentRecord],
    score_text: TextScorer,
    original_score: float,
) -> FeatureMatrixResult:
    """One vector per scoreable record.

    Comments rejected by preprocessing are dropped and reported with
    their reasons.  The frequent-comment flags are computed over all
    records of the tweet, including ones later dropped, since the
    behavioral signal does not depend on text scoreability.
    """
    flags = freq_comment_flags(records)
    vectors: list[FeatureVector] = []
    dropped: list[tuple[int, str]] = []
    for i, (record, flag) in enumerate(zip(records, flags)):
        try:
            sentiment, emotion_scores = score_text(record.text)
        except RejectedText as rejection:
            dropped.append((i, rejection.reason))
            continue
        vectors.append(build_feature_vector(record, flag, sentiment, emotion_scores, original_score))
    return FeatureMatrixResult(vectors=vectors, dropped=dropped)


def to_arrays(vectors: Sequence[FeatureVector]) -> tuple[np.ndarray, np.ndarray]:
    """Stack vectors into (X, y); y holds 1 for troll, 0 for non-troll.

    All vectors must be labeled.
    """
    unlabeled = [i for i, v in enumerate(vectors) if v.label is None]
    if unlabeled:
        raise ValueError(f"unlabeled vectors at indices {unlabeled[:5]}")
    X = np.array([v.to_array() for v in vectors])
    y = np.array([1 if v.label == "troll" else 0 for v in vectors])
    return X, y


def write_features_csv(vectors: Sequence[FeatureVector], path) -> None:
    header = [f"F{i}" for i in range(len(FEATURE_NAMES))] + ["label"]
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for v in vectors:
            writer.writerow([repr(float(x)) for x in v.to_array()] + [v.label or ""])


def read_features_csv(path) -> list[FeatureVector]:
    expected = [f"F{i}" for i in range(len(FEATURE_NAMES))] + ["label"]
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != expected:
            raise ValueError(f"{path}: expected header {','.join(expected)}")
        vectors = []
        for i, row in enumerate(reader):
            if len(row) != len(expected):
                raise ValueError(f"{path}: row {i}: expected {len(expected)} fields")
            values = [float(x) for x in row[:-1]]
            label = row[-1] or None
            if label is not None and label not in TROLL_LABELS:
                raise ValueError(f"{path}: row {i}: bad label {label!r}")
            vectors.append(FeatureVector(*values, label=label))
    return vectors
