"""Synthetic datasets for desk-scale experiments.

The real labeled Weibo data behind the original accuracy numbers is
not redistributable, so the experiment harnesses run on generated
data: troll rows get the qualitative signature described for hired
accounts (inflated following/follower and posts/follower ratios,
polarized sentiment), normal rows look like ordinary commenters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import FEATURE_NAMES, ff_ratio, fo_ratio

F_FFRATIO = FEATURE_NAMES.index("ffRatio")        # 9
F_FORATIO = FEATURE_NAMES.index("foRatio")        # 10
F_SENTIMENT = FEATURE_NAMES.index("sentiment")    # 11


@dataclass
class DetectionDataConfig:
    n_samples: int = 750
    troll_fraction: float = 0.10
    original_sentiment: float = 0.6
    seed: int = 0


def _emotion_scores(rng, n):
    raw = rng.gamma(1.0, 1.0, size=(n, 6))
    return raw / raw.sum(axis=1, keepdims=True)


def generate_detection_dataset(config: DetectionDataConfig | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Feature matrix (n, 19) and 0/1 labels (1 = troll).

    Ratios are derived from generated integer profile counts, so the
    ffRatio * follower == following identity holds exactly.
    """
    cfg = config or DetectionDataConfig()
    rng = np.random.default_rng(cfg.seed)
    n_troll = int(round(cfg.n_samples * cfg.troll_fraction))
    n_normal = cfg.n_samples - n_troll

    rows = []
    labels = []
    for is_troll in [0] * n_normal + [1] * n_troll:
        # some trolls are camouflaged and some normal users look
        # suspicious, so the classes overlap instead of separating
        # perfectly
        looks_troll = (is_troll and rng.random() > 0.15) or (not is_troll and rng.random() < 0.05)
        if looks_troll:
            follower = int(rng.integers(0, 60))
            following = int(rng.integers(200, 2500))
            posts = int(rng.integers(100, 3000))
        else:
            follower = int(rng.integers(40, 3000))
            following = int(rng.integers(10, follower + 60))
            posts = int(rng.integers(0, max(2, follower // 2)))
        if is_troll:
            urank = int(rng.integers(0, 16))
            verified = 0.0
            description = float(rng.random() < 0.25)
            freq = float(rng.random() < 0.45)
            # hired accounts push extremes in either direction
            if rng.random() < 0.5:
                sentiment = float(rng.beta(9.0, 1.2))
            else:
                sentiment = float(rng.beta(1.2, 9.0))
        else:
            urank = int(rng.integers(4, 48))
            verified = float(rng.random() < 0.08)
            description = float(rng.random() < 0.7)
            freq = float(rng.random() < 0.12)
            sentiment = float(rng.beta(5.0, 4.0))
        like_count = float(rng.integers(0, 300))
        floor_number = float(rng.integers(1, 2000))
        emotions = _emotion_scores(rng, 1)[0]
        rows.append([
            float(follower),
            float(following),
            float(posts),
            float(urank),
            verified,
            like_count,
            floor_number,
            description,
            freq,
            ff_ratio(following, follower),
            fo_ratio(posts, follower),
            sentiment,
            sentiment - cfg.original_sentiment,
            *emotions.tolist(),
        ])
        labels.append(is_troll)

    X = np.array(rows)
    y = np.array(labels, dtype=int)
    order = rng.permutation(len(y))
    return X[order], y[order]


@dataclass
class RfeDataConfig:
    n_samples: int = 400
    n_features: int = 13
    informative: tuple[int, ...] = (2, 5, 9)
    constant: int = 7
    constant_value: float = 2.0
    seed: int = 0


def generate_rfe_dataset(config: RfeDataConfig | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Noise matrix with exactly three informative columns and one
    constant column.

    The label is a 2-of-3 vote over the informative columns: dropping
    any one of them costs measurable accuracy, while noise columns are
    free to remove.
    """
    cfg = config or RfeDataConfig()
    rng = np.random.default_rng(cfg.seed)
    X = rng.random((cfg.n_samples, cfg.n_features))
    X[:, cfg.constant] = cfg.constant_value
    votes = sum((X[:, i] > 0.5).astype(int) for i in cfg.informative)
    y = (votes >= 2).astype(int)
    return X, y


def shifted_copy_dataset(n: int = 300, seed: int = 0) -> tuple[np.ndarray, np.ndarray, int]:
    """Dataset whose last column is the first column minus a constant.

    The copy is conditionally uninformative: every split it offers is
    already offered by the original at equal gain, and gain ties
    resolve to the lower feature index.  Returns (X, y, copy_index).
    """
    rng = np.random.default_rng(seed)
    signal = rng.random(n)
    noise = rng.random((n, 2))
    X = np.column_stack([signal, noise, signal - 0.6])
    y = (signal > 0.5).astype(int)
    return X, y, X.shape[1] - 1
