"""Shared fixtures: a small trained model bundle and comment data.

The corpora are tiny but real enough to drive every pipeline stage;
bundle training is session-scoped because several suites reuse it.
"""

import json

import pytest

from trolldetect import classify, embedding, emotion, seg_hmm, sentiment
from trolldetect.bundle import (
    EMBEDDINGS_FILE,
    EMOTION_FILE,
    POLARITY_FILE,
    SEGMENTER_FILE,
    TROLL_FILE,
    ModelBundle,
    load_bundle,
)
from trolldetect.corpus import EmotionDocument, sentence_from_words
from trolldetect.gbdt import BoostConfig
from trolldetect.synthetic import DetectionDataConfig, generate_detection_dataset

SEG_SENTENCES = [
    ["马克", "硕士", "毕业于", "加州", "理工", "学院", "呀"],
    ["天气", "真", "不错"],
    ["我们", "一起", "去", "看海"],
    ["评论", "内容", "很", "好"],
    ["产品", "质量", "差", "极", "差"],
    ["非常", "开心", "喜欢"],
    ["讨厌", "生气", "愤怒"],
    ["水军", "评论", "刷屏"],
    ["客服", "态度", "好"],
    ["物流", "太", "慢"],
]

POSITIVE_DOCS = [
    "产品 质量 很 好",
    "非常 开心 喜欢",
    "客服 态度 好",
    "天气 真 不错",
    "质量 好 喜欢",
]
NEGATIVE_DOCS = [
    "产品 质量 差",
    "物流 太 慢",
    "讨厌 生气",
    "质量 极 差",
    "态度 差 讨厌",
]

EMOTION_DOCS = {
    "happiness": ["非常 开心 喜欢", "开心 好"],
    "surprise": ["真 意外 惊讶", "惊讶 突然"],
    "fear": ["害怕 恐惧", "恐惧 发抖"],
    "anger": ["生气 愤怒", "愤怒 火大"],
    "disgust": ["讨厌 恶心", "恶心 嫌弃"],
    "sadness": ["伤心 难过", "难过 哭"],
}


def train_tiny_bundle() -> ModelBundle:
    seg_corpus = [sentence_from_words(words) for words in SEG_SENTENCES]
    segmenter = seg_hmm.train_segmenter(seg_corpus)

    segmented_reviews = [doc.split() for doc in POSITIVE_DOCS + NEGATIVE_DOCS]
    vectors = embedding.train_embeddings(
        segmented_reviews,
        embedding.EmbeddingConfig(dimension=12, window=3, epochs=3, min_count=1, seed=2),
    )

    polarity_corpus = [(doc.split(), "positive") for doc in POSITIVE_DOCS]
    polarity_corpus += [(doc.split(), "negative") for doc in NEGATIVE_DOCS]
    polarity = sentiment.train_polarity(polarity_corpus, embedding=vectors)

    emotion_corpus = [
        EmotionDocument(text, label) for label, texts in EMOTION_DOCS.items() for text in texts
    ]
    emotions = emotion.train_emotion_models(emotion_corpus, segment_fn=str.split)

    X, y = generate_detection_dataset(DetectionDataConfig(n_samples=300, seed=5))
    troll = classify.fit_troll_model(
        X, y, kind="boosted", config=BoostConfig(rounds=20, depth=3, min_child_weight=0.5, seed=5)
    )
    return ModelBundle(
        segmenter=segmenter, embedding=vectors, polarity=polarity, emotions=emotions, troll=troll
    )


def save_tiny_bundle(bundle: ModelBundle, directory) -> None:
    seg_hmm.save_segmenter(bundle.segmenter, directory / SEGMENTER_FILE)
    embedding.save_embeddings(bundle.embedding, directory / EMBEDDINGS_FILE)
    sentiment.save_polarity(bundle.polarity, directory / POLARITY_FILE)
    emotion.save_emotion_models(bundle.emotions, directory / EMOTION_FILE)
    classify.save_troll_model(bundle.troll, directory / TROLL_FILE)


@pytest.fixture(scope="session")
def tiny_bundle():
    return train_tiny_bundle()


@pytest.fixture(scope="session")
def bundle_dir(tiny_bundle, tmp_path_factory):
    directory = tmp_path_factory.mktemp("bundle")
    save_tiny_bundle(tiny_bundle, directory)
    return directory


def packet_element(i, text="评论 内容 很 好", followers=100, following=50, posts=10, **user_overrides):
    user = {
        "id": 9000 + i,
        "screen_name": f"user{i}",
        "followers_count": followers,
        "follow_count": following,
        "statuses_count": posts,
        "urank": 6,
        "verified": False,
        "description": "简介",
    }
    user.update(user_overrides)
    return {
        "id": f"c{i}",
        "text": text,
        "like_count": i,
        "floor_number": i + 1,
        "user": user,
    }


def make_score_payload(n_comments=3, texts=None) -> bytes:
    comments = []
    for i in range(n_comments):
        text = texts[i] if texts else "评论 内容 很 好"
        comments.append(packet_element(i, text=text))
    return json.dumps({"original_text": "天气 真 不错", "comments": comments}).encode("utf-8")
