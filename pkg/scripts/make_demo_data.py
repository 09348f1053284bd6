#!/usr/bin/env python3
"""Build a self-contained demo directory: tiny corpora, a trained
model bundle, and a recorded comment packet, ready for `trolldetect
score` and `trolldetect serve`.

Everything is generated from the small built-in corpora, so the demo
needs no external data.
"""

import argparse
import json
from pathlib import Path

from trolldetect.cli import main as cli
from trolldetect.features import FeatureVector, write_features_csv
from trolldetect.synthetic import DetectionDataConfig, generate_detection_dataset

SEG_SENTENCES = [
    "马克 硕士 毕业于 加州 理工 学院 呀",
    "天气 真 不错",
    "我们 一起 去 看海",
    "产品 质量 很 好",
    "产品 质量 差 极 差",
    "非常 开心 喜欢",
    "讨厌 生气 愤怒",
    "水军 评论 刷屏",
    "客服 态度 好",
    "物流 太 慢",
    "评论 内容 很 好",
]

POSITIVE = ["产品 质量 很 好", "非常 开心 喜欢", "客服 态度 好", "天气 真 不错", "质量 好 喜欢"]
NEGATIVE = ["产品 质量 差", "物流 太 慢", "讨厌 生气", "质量 极 差", "态度 差 讨厌"]

EMOTIONS = {
    "happiness": ["非常 开心 喜欢", "开心 好"],
    "surprise": ["真 意外 惊讶", "惊讶 突然"],
    "fear": ["害怕 恐惧", "恐惧 发抖"],
    "anger": ["生气 愤怒", "愤怒 火大"],
    "disgust": ["讨厌 恶心", "恶心 嫌弃"],
    "sadness": ["伤心 难过", "难过 哭"],
}

PACKET_COMMENTS = [
    ("评论内容很好非常开心", 120, 80, 15),
    ("产品质量差极差讨厌", 300, 50, 8),
    ("水军评论刷屏生气", 2, 900, 700),
    ("天气真不错我们一起去看海", 500, 200, 40),
    ("转发微博", 1, 1200, 950),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="demo")
    parser.add_argument("--seed", type=int, default=20)
    args = parser.parse_args()

    out = Path(args.out_dir)
    data = out / "data"
    models = out / "models"
    data.mkdir(parents=True, exist_ok=True)
    models.mkdir(parents=True, exist_ok=True)

    (data / "segmentation.utf8").write_text("\n".join(SEG_SENTENCES) + "\n", encoding="utf-8")
    (data / "positive.txt").write_text("\n".join(POSITIVE) + "\n", encoding="utf-8")
    (data / "negative.txt").write_text("\n".join(NEGATIVE) + "\n", encoding="utf-8")
    (data / "emotions.tsv").write_text(
        "\n".join(f"{label}\t{text}" for label, texts in EMOTIONS.items() for text in texts) + "\n",
        encoding="utf-8",
    )
    (data / "w2v_corpus.txt").write_text("\n".join(POSITIVE + NEGATIVE) + "\n", encoding="utf-8")

    elements = []
    for i, (text, followers, following, posts) in enumerate(PACKET_COMMENTS):
        elements.append(
            {
                "id": f"demo{i}",
                "text": text,
                "like_count": i * 3,
                "floor_number": i + 1,
                "user": {
                    "id": 5000 + i,
                    "screen_name": f"demo_user_{i}",
                    "followers_count": followers,
                    "follow_count": following,
                    "statuses_count": posts,
                    "urank": 5,
                    "verified": False,
                    "description": "" if i % 2 else "日常分享",
                },
            }
        )
    (data / "packet.json").write_text(
        json.dumps({"ok": 1, "data": {"data": elements}}, ensure_ascii=False, indent=2), encoding="utf-8"
    )

    X, y = generate_detection_dataset(DetectionDataConfig(n_samples=400, seed=args.seed))
    vectors = [
        FeatureVector(*row.tolist(), label="troll" if label else "non-troll")
        for row, label in zip(X, y)
    ]
    write_features_csv(vectors, data / "features.csv")

    seed = str(args.seed)
    steps = [
        ["train-seg", "--corpus", str(data / "segmentation.utf8"), "--out", str(models / "segmenter.json")],
        ["train-w2v", "--corpus", str(data / "w2v_corpus.txt"), "--out", str(models / "embeddings.txt"),
         "--dimension", "16", "--epochs", "4", "--min-count", "1", "--seed", seed],
        ["train-sentiment", "--positive", str(data / "positive.txt"), "--negative", str(data / "negative.txt"),
         "--seg-model", str(models / "segmenter.json"), "--out", str(models / "polarity.json")],
        ["train-emotion", "--corpus", str(data / "emotions.tsv"), "--seg-model", str(models / "segmenter.json"),
         "--out", str(models / "emotion.json"), "--table-csv", str(data / "emotion_table.csv")],
        ["train-troll", "--features", str(data / "features.csv"), "--out", str(models / "troll.json"),
         "--classifier", "boosted", "--rounds", "40", "--seed", seed],
    ]
    for argv in steps:
        status = cli(argv)
        if status != 0:
            raise SystemExit(f"step failed: {argv}")

    print(f"\ndemo ready under {out.resolve()}")
    print("try:")
    print(f"  trolldetect score --models {models} --packet {data / 'packet.json'} "
          f"--original-text 天气真不错 --out scores.csv --histogram hist.csv")
    print(f"  trolldetect serve --models {models}")


if __name__ == "__main__":
    main()
