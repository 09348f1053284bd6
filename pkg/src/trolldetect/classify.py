"""Troll classifiers: model wrapper, ranking, and feature elimination.

A TrollModel binds a trained classifier (boosted ensemble or SVM) to
the feature columns it consumes and a decision threshold.  Feature
importance is the split count ("weight"); recursive elimination drops
the lowest-weight feature and retrains until one feature remains.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import evaluation
from .gbdt import BoostConfig, BoostedEnsemble, ensemble_from_doc, ensemble_to_doc, train_boosted
from .svm import SvmConfig, SvmModel, svm_from_doc, svm_to_doc, train_svm

FORMAT_NAME = "trolldetect-troll-model"
FORMAT_VERSION = 1


@dataclass
class TrollModel:
    classifier: BoostedEnsemble | SvmModel
    feature_indices: tuple[int, ...]
    threshold: float = 0.5
    metadata: dict = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return "boosted" if isinstance(self.classifier, BoostedEnsemble) else "svm"


def _select_columns(model: TrollModel, X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    needed = max(model.feature_indices)
    if X.shape[1] <= needed:
        missing = [i for i in model.feature_indices if i >= X.shape[1]]
        raise ValueError(f"input is missing active feature index(es) {missing}")
    return X[:, list(model.feature_indices)]


def predict(model: TrollModel, vectors) -> tuple[np.ndarray, np.ndarray]:
    """Scores and troll flags for one vector or a matrix.

    Boosted models emit logistic probabilities and flag at
    score >= threshold; SVMs emit margins and flag at margin > 0.
    """
    columns = _select_columns(model, vectors)
    if model.kind == "boosted":
        scores = model.classifier.predict_proba(columns)
        flags = scores >= model.threshold
    else:
        scores = model.classifier.decision_function(columns)
        flags = scores > 0.0
    return scores, flags


def predict_one(model: TrollModel, vector) -> tuple[float, bool]:
    scores, flags = predict(model, np.atleast_2d(vector))
    return float(scores[0]), bool(flags[0])


def fit_troll_model(
    X,
    y,
    kind: str = "boosted",
    feature_indices: Sequence[int] | None = None,
    config=None,
    threshold: float = 0.5,
) -> TrollModel:
    """Train a classifier on the selected feature columns."""
    X = np.asarray(X, dtype=float)
    indices = tuple(range(X.shape[1])) if feature_indices is None else tuple(feature_indices)
    columns = X[:, list(indices)]
    if kind == "boosted":
        classifier = train_boosted(columns, y, config)
        seed = (config or BoostConfig()).seed
    elif kind == "svm":
        classifier = train_svm(columns, y, config)
        seed = (config or SvmConfig()).seed
    else:
        raise ValueError(f"unknown classifier kind {kind!r}")
    return TrollModel(
        classifier=classifier,
        feature_indices=indices,
        threshold=threshold,
        metadata={"kind": kind, "seed": seed},
    )


def boosted_trainer(config: BoostConfig | None = None, threshold: float = 0.5) -> evaluation.Trainer:
    def fit(X, y):
        model = train_boosted(X, y, config)
        return lambda X_test: model.predict_proba(np.asarray(X_test, dtype=float)) >= threshold

    return fit


def svm_trainer(config: SvmConfig | None = None) -> evaluation.Trainer:
    def fit(X, y):
        model = train_svm(X, y, config)
        return model.predict_flags

    return fit


def rank_features(model: BoostedEnsemble, names: Sequence[str] | None = None) -> list[tuple[str, int]]:
    """Features sorted by descending split count; zero-weight features
    stay in the list.  Ties keep index order."""
    if names is None:
        names = [f"F{i}" for i in range(model.n_features)]
    ranked = sorted(
        zip(names, (int(w) for w in model.importance)),
        key=lambda pair: -pair[1],
    )
    return ranked


def recursive_feature_elimination(
    X,
    y,
    config: BoostConfig | None = None,
    k: int = 5,
    seed: int = 0,
) -> list[tuple[tuple[int, ...], float]]:
    """Drop the lowest-ranked feature and retrain, recording k-fold CV
    accuracy at each feature-set size down to a single feature.

    Ties on minimum weight drop the highest feature index first.
    """
    X = np.asarray(X, dtype=float)
    if X.shape[1] < 2:
        raise ValueError("need at least two features to eliminate")
    current = list(range(X.shape[1]))
    curve = []
    while True:
        columns = X[:, current]
        report = evaluation.cross_validate(columns, y, boosted_trainer(config), k=k, seed=seed)
        curve.append((tuple(current), report.mean_accuracy))
        if len(current) == 1:
            return curve
        full = train_boosted(columns, y, config)
        weights = full.importance
        lowest = min(range(len(current)), key=lambda pos: (weights[pos], -current[pos]))
        current.pop(lowest)


def write_rfe_csv(curve, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["num_features", "features", "accuracy"])
        for features, acc in curve:
            writer.writerow([len(features), " ".join(map(str, features)), f"{acc:.6f}"])


# --- persistence -------------------------------------------------------------


def save_troll_model(model: TrollModel, path) -> None:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "feature_indices": list(model.feature_indices),
        "threshold": model.threshold,
        "metadata": model.metadata,
        "classifier": ensemble_to_doc(model.classifier)
        if model.kind == "boosted"
        else svm_to_doc(model.classifier),
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")


def load_troll_model(path) -> TrollModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != FORMAT_NAME or doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"{path}: not a {FORMAT_NAME} v{FORMAT_VERSION} file")
    payload = doc["classifier"]
    classifier = ensemble_from_doc(payload) if payload["kind"] == "boosted" else svm_from_doc(payload)
    return TrollModel(
        classifier=classifier,
        feature_indices=tuple(doc["feature_indices"]),
        threshold=doc["threshold"],
        metadata=doc["metadata"],
    )
