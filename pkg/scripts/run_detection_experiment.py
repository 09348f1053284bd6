#!/usr/bin/env python3
"""Scaled-down troll-detection experiment on synthetic data.

Trains the boosted ensemble and the SVM on the generated 750-sample
dataset (10% trolls), both on all 19 features and on the
ffRatio/foRatio/sentiment triple, and reports stratified 5-fold
cross-validation accuracy for each combination.
"""

import argparse
from pathlib import Path

from trolldetect.classify import boosted_trainer, svm_trainer
from trolldetect.evaluation import ModelSpec, compare_models, format_comparison_table, write_comparison_csv
from trolldetect.gbdt import BoostConfig
from trolldetect.svm import SvmConfig
from trolldetect.synthetic import DetectionDataConfig, generate_detection_dataset

THREE_FEATURES = (9, 10, 11)  # ffRatio, foRatio, sentiment


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=750)
    parser.add_argument("--troll-fraction", type=float, default=0.10)
    parser.add_argument("--seed", type=int, default=20)
    parser.add_argument("--out", default="detection_comparison.csv")
    args = parser.parse_args()

    X, y = generate_detection_dataset(
        DetectionDataConfig(n_samples=args.samples, troll_fraction=args.troll_fraction, seed=args.seed)
    )
    print(f"dataset: {len(y)} samples, {int(y.sum())} trolls, seed {args.seed}")

    boost = BoostConfig(rounds=50, depth=3, seed=args.seed)
    svm = SvmConfig(kernel="rbf", C=1.0, seed=args.seed, max_passes=300)
    specs = [
        ModelSpec("boosted/all", boosted_trainer(boost)),
        ModelSpec("boosted/3-feature", boosted_trainer(boost), features=THREE_FEATURES),
        ModelSpec("svm-rbf/all", svm_trainer(svm)),
        ModelSpec("svm-rbf/3-feature", svm_trainer(svm), features=THREE_FEATURES),
    ]
    rows = compare_models(X, y, specs, k=5, seed=args.seed)
    print(format_comparison_table(rows))
    write_comparison_csv(rows, args.out)
    print(f"wrote {Path(args.out).resolve()}")


if __name__ == "__main__":
    main()
