"""Soft-margin SVM trained with a sequential-minimal-optimization
style pair solver.

Features are standardized internally (kernels are scale sensitive;
the trees elsewhere are not).  The solver sweeps for KKT violators,
pairs each with a seeded random partner, and performs the closed-form
two-variable update; convergence is a full pass with no alpha change.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class TrainingError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    """Raised when the pass budget runs out; carries the best-so-far
    model in ``model``."""

    def __init__(self, message, model):
        super().__init__(message)
        self.model = model


@dataclass
class SvmConfig:
    kernel: str = "rbf"  # "linear" or "rbf"
    C: float = 1.0
    gamma: float | None = None  # rbf width; defaults to 1/n_features
    tolerance: float = 1e-3
    max_passes: int = 100
    seed: int = 0


@dataclass
class SvmModel:
    config: SvmConfig
    gamma: float
    support_vectors: np.ndarray  # standardized coordinates
    dual_coef: np.ndarray        # alpha_i * y_i for each support vector
    alphas: np.ndarray
    sv_labels: np.ndarray        # +-1
    bias: float
    feature_mean: np.ndarray
    feature_scale: np.ndarray
    train_kkt_violations: int = -1  # -1 when unknown (e.g. legacy files)

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        Z = (X - self.feature_mean) / self.feature_scale
        K = _kernel_matrix(Z, self.support_vectors, self.config.kernel, self.gamma)
        return K @ self.dual_coef + self.bias

    def predict_flags(self, X: np.ndarray) -> np.ndarray:
        return self.decision_function(X) > 0.0


def _kernel_matrix(A, B, kernel, gamma):
    if kernel == "linear":
        return A @ B.T
    if kernel == "rbf":
        sq = np.sum(A**2, axis=1)[:, None] + np.sum(B**2, axis=1)[None, :] - 2.0 * (A @ B.T)
        return np.exp(-gamma * np.maximum(sq, 0.0))
    raise ValueError(f"unknown kernel {kernel!r}")


def kkt_violations(alphas, y, decision, C, tolerance) -> int:
    """Count training points violating the KKT conditions beyond
    tolerance."""
    margin = y * decision
    violations = 0
    for a, m in zip(alphas, margin):
        if a <= 1e-12:
            ok = m >= 1.0 - tolerance
        elif a >= C - 1e-12:
            ok = m <= 1.0 + tolerance
        else:
            ok = abs(m - 1.0) <= tolerance
        violations += 0 if ok else 1
    return violations


def train_svm(X, y, config: SvmConfig | None = None) -> SvmModel:
    """Fit on a binary-labeled matrix (y in {0, 1}).

    Raises ConvergenceError (carrying the best-so-far model) if the
    solver still changes alphas after ``max_passes`` full passes.
    """
    cfg = config or SvmConfig()
    X = np.asarray(X, dtype=float)
    y01 = np.asarray(y, dtype=int)
    if len(np.unique(y01)) < 2:
        raise TrainingError("training data contains a single class")
    y = np.where(y01 == 1, 1.0, -1.0)
    n = len(y)

    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale == 0.0] = 1.0
    Z = (X - mean) / scale

    gamma = cfg.gamma if cfg.gamma is not None else 1.0 / X.shape[1]
    K = _kernel_matrix(Z, Z, cfg.kernel, gamma)

    rng = np.random.default_rng(cfg.seed)
    alphas = np.zeros(n)
    b = 0.0
    C, tol = cfg.C, cfg.tolerance

    def errors():
        return (alphas * y) @ K + b - y

    def take_step(i, j, E):
        # closed-form two-variable update; returns (new bias, True) on
        # progress
        ai_old, aj_old = alphas[i], alphas[j]
        if y[i] != y[j]:
            lo, hi = max(0.0, aj_old - ai_old), min(C, C + aj_old - ai_old)
        else:
            lo, hi = max(0.0, ai_old + aj_old - C), min(C, ai_old + aj_old)
        if lo == hi:
            return b, False
        eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
        if eta >= 0:
            return b, False
        aj = aj_old - y[j] * (E[i] - E[j]) / eta
        aj = min(hi, max(lo, aj))
        if abs(aj - aj_old) < 1e-7:
            return b, False
        ai = ai_old + y[i] * y[j] * (aj_old - aj)
        alphas[i], alphas[j] = ai, aj
        b1 = b - E[i] - y[i] * (ai - ai_old) * K[i, i] - y[j] * (aj - aj_old) * K[i, j]
        b2 = b - E[j] - y[i] * (ai - ai_old) * K[i, j] - y[j] * (aj - aj_old) * K[j, j]
        if 0 < ai < C:
            return b1, True
        if 0 < aj < C:
            return b2, True
        return (b1 + b2) / 2.0, True

    for _ in range(cfg.max_passes):
        violators = 0
        changed = 0
        for i in range(n):
            E = errors()
            r = y[i] * E[i]
            if not ((r < -tol and alphas[i] < C) or (r > tol and alphas[i] > 0)):
                continue
            violators += 1
            # second-choice heuristic: largest error gap first, then the
            # remaining partners in seeded random order
            gaps = np.abs(E - E[i])
            gaps[i] = -1.0
            candidates = [int(np.argmax(gaps))]
            rest = rng.permutation(n)
            candidates += [int(j) for j in rest if j != i and j != candidates[0]]
            for j in candidates:
                b, ok = take_step(i, j, E)
                if ok:
                    changed += 1
                    break
        if violators == 0 or changed == 0:
            break  # either KKT holds or no pair can make progress

    sv = alphas > 1e-12
    decision = (alphas * y) @ K + b
    kkt = kkt_violations(alphas, y, decision, C, tol)
    model = SvmModel(
        config=cfg,
        gamma=gamma,
        support_vectors=Z[sv],
        dual_coef=(alphas * y)[sv],
        alphas=alphas[sv],
        sv_labels=y[sv],
        bias=float(b),
        feature_mean=mean,
        feature_scale=scale,
        train_kkt_violations=kkt,
    )
    if kkt > 0:
        raise ConvergenceError(
            f"{kkt} KKT violation(s) remain after {cfg.max_passes} passes", model
        )
    return model


# --- persistence -------------------------------------------------------------


def svm_to_doc(model: SvmModel) -> dict:
    return {
        "kind": "svm",
        "config": vars(model.config),
        "gamma": model.gamma,
        "support_vectors": model.support_vectors.tolist(),
        "dual_coef": model.dual_coef.tolist(),
        "alphas": model.alphas.tolist(),
        "sv_labels": model.sv_labels.tolist(),
        "bias": model.bias,
        "feature_mean": model.feature_mean.tolist(),
        "feature_scale": model.feature_scale.tolist(),
        "train_kkt_violations": model.train_kkt_violations,
    }


def svm_from_doc(doc) -> SvmModel:
    mean = np.array(doc["feature_mean"], dtype=float)
    sv = np.array(doc["support_vectors"], dtype=float)
    if sv.size == 0:
        sv = np.zeros((0, len(mean)))
    return SvmModel(
        config=SvmConfig(**doc["config"]),
        gamma=doc["gamma"],
        support_vectors=sv,
        dual_coef=np.array(doc["dual_coef"], dtype=float),
        alphas=np.array(doc["alphas"], dtype=float),
        sv_labels=np.array(doc["sv_labels"], dtype=float),
        bias=doc["bias"],
        feature_mean=mean,
        feature_scale=np.array(doc["feature_scale"], dtype=float),
        train_kkt_violations=doc.get("train_kkt_violations", -1),
    )


def save_svm(model: SvmModel, path) -> None:
    Path(path).write_text(json.dumps(svm_to_doc(model), sort_keys=True), encoding="utf-8")


def load_svm(path) -> SvmModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("kind") != "svm":
        raise ValueError(f"{path}: not an svm model file")
    return svm_from_doc(doc)
