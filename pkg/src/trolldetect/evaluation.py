"""Accuracy, k-fold cross-validation, and experiment reports.

Folds are stratified by label by default: with the troll/normal
imbalance of real comment data, unstratified folds go degenerate at
small scale.  A trainer is any callable (X_train, y_train) -> predict,
where predict maps X_test to 0/1 flags.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

Trainer = Callable[[np.ndarray, np.ndarray], Callable[[np.ndarray], np.ndarray]]


def accuracy(tp: int, tn: int, fp: int, fn: int) -> float:
    """(TP + TN) / (TP + TN + FP + FN)."""
    total = tp + tn + fp + fn
    if total <= 0:
        raise ValueError("accuracy of zero classifications is undefined")
    return (tp + tn) / total


def kfold_split(n: int, k: int, seed: int = 0) -> list[np.ndarray]:
    """Shuffled partition of range(n) into k folds, sizes within 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < k:
        raise ValueError(f"cannot split {n} samples into {k} folds")
    permutation = np.random.default_rng(seed).permutation(n)
    return [np.sort(fold) for fold in np.array_split(permutation, k)]


def stratified_kfold(y: Sequence[int], k: int, seed: int = 0) -> list[np.ndarray]:
    """Label-stratified partition; fold sizes still differ by at most
    one because the round-robin pointer carries across classes."""
    y = np.asarray(y)
    if len(y) < k:
        raise ValueError(f"cannot split {len(y)} samples into {k} folds")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    pointer = 0
    for label in np.unique(y):
        indices = np.flatnonzero(y == label)
        for i in rng.permutation(indices):
            folds[pointer % k].append(int(i))
            pointer += 1
    return [np.sort(np.array(fold, dtype=int)) for fold in folds]


@dataclass
class FoldResult:
    tp: int
    tn: int
    fp: int
    fn: int
    degenerate: bool = False

    @property
    def accuracy(self) -> float:
        return accuracy(self.tp, self.tn, self.fp, self.fn)

    @property
    def test_size(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass
class EvaluationReport:
    folds: list[FoldResult]
    seed: int
    feature_set: tuple[int, ...] | None = None
    config: dict = field(default_factory=dict)

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean([f.accuracy for f in self.folds]))


def _confusion(y_true, flags):
    flags = np.asarray(flags).astype(int)
    tp = int(np.sum((y_true == 1) & (flags == 1)))
    tn = int(np.sum((y_true == 0) & (flags == 0)))
    fp = int(np.sum((y_true == 0) & (flags == 1)))
    fn = int(np.sum((y_true == 1) & (flags == 0)))
    return tp, tn, fp, fn


def cross_validate(
    X,
    y,
    trainer: Trainer,
    k: int = 5,
    seed: int = 0,
    stratified: bool = True,
    feature_set: tuple[int, ...] | None = None,
    config: dict | None = None,
) -> EvaluationReport:
    """k-fold evaluation; every sample is tested exactly once.

    A fold whose training complement holds a single class is marked
    degenerate and scored as constant prediction of that class.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if len(np.unique(y)) < 2:
        raise ValueError("need both classes overall")
    folds = stratified_kfold(y, k, seed) if stratified else kfold_split(len(y), k, seed)

    results = []
    for test_idx in folds:
        test_mask = np.zeros(len(y), dtype=bool)
        test_mask[test_idx] = True
        X_train, y_train = X[~test_mask], y[~test_mask]
        X_test, y_test = X[test_mask], y[test_mask]
        if len(np.unique(y_train)) < 2:
            flags = np.full(len(y_test), int(y_train[0]))
            results.append(FoldResult(*_confusion(y_test, flags), degenerate=True))
            continue
        predict = trainer(X_train, y_train)
        results.append(FoldResult(*_confusion(y_test, predict(X_test))))
    return EvaluationReport(folds=results, seed=seed, feature_set=feature_set, config=config or {})


@dataclass
class ModelSpec:
    name: str
    trainer: Trainer
    features: tuple[int, ...] | None = None  # None means all columns


def compare_models(X, y, specs: Sequence[ModelSpec], k: int = 5, seed: int = 0) -> list[tuple[ModelSpec, EvaluationReport]]:
    """One cross-validated report per (classifier, feature set) pair."""
    if len(specs) < 2:
        raise ValueError("need at least two configurations to compare")
    X = np.asarray(X, dtype=float)
    rows = []
    for spec in specs:
        columns = X if spec.features is None else X[:, list(spec.features)]
        report = cross_validate(columns, y, spec.trainer, k=k, seed=seed, feature_set=spec.features)
        rows.append((spec, report))
    return rows


def write_comparison_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["name", "features", "mean_accuracy"])
        for spec, report in rows:
            features = "all" if spec.features is None else " ".join(map(str, spec.features))
            writer.writerow([spec.name, features, f"{report.mean_accuracy:.6f}"])


def format_comparison_table(rows) -> str:
    lines = [f"{'model':<24} {'features':<20} accuracy"]
    for spec, report in rows:
        features = "all" if spec.features is None else ",".join(map(str, spec.features))
        lines.append(f"{spec.name:<24} {features:<20} {report.mean_accuracy:.4f}")
    return "\n".join(lines)


def format_report(report: EvaluationReport) -> str:
    lines = []
    for i, fold in enumerate(report.folds):
        suffix = " (degenerate)" if fold.degenerate else ""
        lines.append(
            f"fold {i}: tp={fold.tp} tn={fold.tn} fp={fold.fp} fn={fold.fn} "
            f"accuracy={fold.accuracy:.4f}{suffix}"
        )
    lines.append(f"mean accuracy: {report.mean_accuracy:.4f}")
    return "\n".join(lines)


def write_report_csv(report: EvaluationReport, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["fold", "tp", "tn", "fp", "fn", "accuracy", "degenerate"])
        for i, fold in enumerate(report.folds):
            writer.writerow([i, fold.tp, fold.tn, fold.fp, fold.fn, f"{fold.accuracy:.6f}", int(fold.degenerate)])
        writer.writerow(["mean", "", "", "", "", f"{report.mean_accuracy:.6f}", ""])
