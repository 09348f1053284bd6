import csv
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trolldetect.corpus import EMOTIONS, EmotionDocument
from trolldetect.emotion import (
    CHAIN_TRANSITION,
    UNKNOWN,
    EmotionHmm,
    TrainingError,
    build_feature_table,
    chi_square,
    classify_emotion,
    classify_feature_rows,
    jaccard_emission,
    load_emotion_models,
    model_log_scores,
    mutual_information,
    quantize,
    save_emotion_models,
    tf_idf,
    train_emotion_models,
    winner_from_scores,
    write_feature_table_csv,
)

WORDS_BY_EMOTION = {
    "happiness": ["开心 高兴 笑", "开心 舒服"],
    "surprise": ["惊讶 意外", "惊讶 突然 意外"],
    "fear": ["害怕 恐惧", "害怕 发抖"],
    "anger": ["生气 愤怒", "生气 火大 愤怒"],
    "disgust": ["恶心 讨厌", "讨厌 嫌弃"],
    "sadness": ["伤心 难过", "难过 哭"],
}


def toy_corpus():
    return [
        EmotionDocument(text, emotion)
        for emotion, texts in WORDS_BY_EMOTION.items()
        for text in texts
    ]


def train_toy():
    return train_emotion_models(toy_corpus(), segment_fn=str.split)


# --- formulas against direct arithmetic --------------------------------------


def test_mutual_information_examples():
    assert mutual_information(0.5, 0.5) == 0.0
    assert mutual_information(0.2, 0.5) == pytest.approx(math.log(0.4), abs=1e-12)
    # P(t|e) = P(e) for every emotion: identical MI regardless of magnitude
    assert mutual_information(0.25, 0.25) == mutual_information(0.7, 0.7) == 0.0


def test_mutual_information_contract():
    with pytest.raises(ValueError):
        mutual_information(0.0, 0.5)
    with pytest.raises(ValueError):
        mutual_information(0.5, 0.0)


def test_chi_square_examples():
    assert chi_square(10, 20, 30, 40, 100) == pytest.approx(
        100 * (10 * 40 - 20 * 30) ** 2 / (30 * 70 * 40 * 60), abs=1e-12
    )
    # AD == BC means independence
    assert chi_square(10, 20, 20, 40, 90) == 0.0
    # swapping (A,B) with (C,D) preserves the value
    assert chi_square(3, 7, 11, 13, 34) == pytest.approx(chi_square(11, 13, 3, 7, 34), abs=1e-12)


def test_chi_square_zero_marginal():
    with pytest.raises(ValueError):
        chi_square(0, 0, 5, 5, 10)


@given(
    st.integers(0, 40), st.integers(0, 40), st.integers(0, 40), st.integers(0, 40)
)
def test_chi_square_nonnegative_and_zero_iff_independent(a, b, c, d):
    n = a + b + c + d
    marginals_ok = (a + b) > 0 and (c + d) > 0 and (a + c) > 0 and (b + d) > 0
    if not marginals_ok:
        return
    value = chi_square(a, b, c, d, n)
    assert value >= 0.0
    if a * d == b * c:
        assert value == 0.0
    else:
        assert value > 0.0


def test_tf_idf_examples():
    assert tf_idf(0, 10, 100, 10) == 0.0
    assert tf_idf(3, 10, 100, 10) == pytest.approx(0.3 * math.log(10.01), abs=1e-12)
    # N == n_e keeps a small positive factor ln(1.01)
    assert tf_idf(2, 4, 10, 10) == pytest.approx(0.5 * math.log(1.01), abs=1e-12)
    assert tf_idf(2, 4, 10, 10) > 0.0


def test_tf_idf_contract():
    with pytest.raises(ValueError):
        tf_idf(1, 0, 10, 5)
    with pytest.raises(ValueError):
        tf_idf(1, 2, 10, 0)


def test_jaccard_examples():
    assert jaccard_emission(2, 1, 1) == 0.5
    assert jaccard_emission(5, 0, 0) == 1.0
    assert jaccard_emission(0, 3, 4) == 0.0
    with pytest.raises(ValueError):
        jaccard_emission(0, 0, 0)


@given(st.integers(0, 100), st.integers(0, 100), st.integers(0, 100))
def test_jaccard_in_unit_interval(m11, m10, m01):
    if m11 + m10 + m01 == 0:
        return
    assert 0.0 <= jaccard_emission(m11, m10, m01) <= 1.0


def test_quantize_folds_negative_zero():
    assert quantize(-0.0001) == "0.00"
    assert quantize(0.0) == "0.00"
    assert quantize(-0.005) == "-0.01" or quantize(-0.005) == "0.00"  # banker's rounding boundary
    assert quantize(1.234) == "1.23"


# --- feature table -----------------------------------------------------------


def feature_table_oracle(segmented_docs):
    """Independent recount: nested loops, direct formula evaluation."""
    docs = list(segmented_docs)
    n_docs = len(docs)
    n_e = {e: sum(1 for _, emo in docs if emo == e) for e in EMOTIONS}
    vocab = sorted({w for words, _ in docs for w in words})
    table = {}
    for word in vocab:
        for emotion in EMOTIONS:
            a = sum(1 for words, emo in docs if emo == emotion and word in words)
            b = sum(1 for words, emo in docs if emo != emotion and word in words)
            c = sum(1 for words, emo in docs if emo == emotion and word not in words)
            d = sum(1 for words, emo in docs if emo != emotion and word not in words)
            mi = math.log(((a + 1) / (n_e[emotion] + 2)) / (n_e[emotion] / n_docs))
            denom = (a + b) * (c + d) * (a + c) * (b + d)
            chi = n_docs * (a * d - b * c) ** 2 / denom if denom > 0 else 0.0
            n_et = sum(words.count(word) for words, emo in docs if emo == emotion)
            n_t = sum(words.count(word) for words, _ in docs)
            tfidf = (n_et / n_t) * math.log(n_docs / n_e[emotion] + 0.01)
            table[(word, emotion)] = (mi, chi, tfidf)
    return table


def test_feature_table_matches_oracle():
    segmented = [(text.split(), emotion) for emotion, texts in WORDS_BY_EMOTION.items() for text in texts]
    # widen overlap: one shared word across three emotions
    segmented.append((["共用", "开心"], "happiness"))
    segmented.append((["共用"], "anger"))
    segmented.append((["共用", "哭"], "sadness"))
    table = build_feature_table(segmented)
    oracle = feature_table_oracle(segmented)
    assert len(table.vocabulary) * len(EMOTIONS) == len(oracle)
    for (word, emotion), expected in oracle.items():
        got = table.entries[word][emotion]
        for x, y in zip(got, expected):
            assert x == pytest.approx(y, abs=1e-9)


def test_feature_table_missing_emotion():
    segmented = [(["a"], "happiness")]
    with pytest.raises(TrainingError, match="surprise"):
        build_feature_table(segmented)


def test_feature_table_csv_layout(tmp_path):
    model_set = train_toy()
    path = tmp_path / "table.csv"
    write_feature_table_csv(model_set.table, path)
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["word", "emotion", "mi", "chi", "tfidf"]
    assert len(rows) - 1 == len(model_set.table.vocabulary) * len(EMOTIONS)


# --- training ----------------------------------------------------------------


def test_chain_transition_is_deterministic_chain():
    for q in range(3):
        for p in range(3):
            assert CHAIN_TRANSITION[q, p] == (1.0 if p == q + 1 else 0.0)


def test_single_document_classes_mean_equals_lone_doc():
    corpus = [EmotionDocument(text, e) for e, texts in WORDS_BY_EMOTION.items() for text in texts[:1]]
    model_set = train_emotion_models(corpus, segment_fn=str.split)
    for emotion, model in model_set.models.items():
        words = WORDS_BY_EMOTION[emotion][0].split()
        triples = [model_set.table.entries[w][emotion] for w in words]
        for k in range(3):
            assert model.means[k] == pytest.approx(float(np.mean([t[k] for t in triples])), abs=1e-12)


def test_doubling_documents_keeps_means_with_fixed_table():
    base = toy_corpus()
    fixed_table = build_feature_table([(d.text.split(), d.emotion) for d in base])
    once = train_emotion_models(base, str.split, table_builder=lambda _: fixed_table)
    twice = train_emotion_models(base + base, str.split, table_builder=lambda _: fixed_table)
    for emotion in EMOTIONS:
        assert once.models[emotion].means == pytest.approx(twice.models[emotion].means, abs=1e-12)


def test_missing_emotion_is_named():
    corpus = [EmotionDocument("开心", "happiness")]
    with pytest.raises(TrainingError, match="sadness"):
        train_emotion_models(corpus, str.split)


def test_means_match_recount():
    model_set = train_toy()
    segmented = [(d.text.split(), d.emotion) for d in toy_corpus()]
    for emotion in EMOTIONS:
        triples = [
            model_set.table.entries[w][emotion]
            for words, e in segmented
            if e == emotion
            for w in words
        ]
        expected = [float(np.mean([t[k] for t in triples])) for k in range(3)]
        assert list(model_set.models[emotion].means) == pytest.approx(expected, abs=1e-9)


# --- classification ----------------------------------------------------------


def test_happiness_words_classify_as_happiness():
    model_set = train_toy()
    emotion, scores = classify_emotion(model_set, ["开心", "高兴"])
    assert emotion == "happiness"
    assert scores["happiness"] == max(scores.values())
    assert sum(scores.values()) == pytest.approx(1.0, abs=1e-9)


def test_all_oov_words_are_unknown():
    model_set = train_toy()
    emotion, scores = classify_emotion(model_set, ["毫无", "关联"])
    assert emotion == UNKNOWN
    assert all(v == 0.0 for v in scores.values())


def test_identical_models_tie_breaks_to_happiness():
    model = EmotionHmm(
        emotion="any",
        means=(0.1, 0.2, 0.3),
        jaccard=({"0.10": (2, 1, 1)}, {"0.20": (2, 1, 1)}, {"0.30": (2, 1, 1)}),
    )
    models = {e: model for e in EMOTIONS}
    rows = [{e: (0.1, 0.2, 0.3) for e in EMOTIONS}]
    emotion, scores = classify_feature_rows(models, rows)
    assert emotion == "happiness"
    assert len(set(scores.values())) == 1


def test_per_word_feature_rows_are_legal_input():
    # three words x six emotions x three features
    rows_raw = {
        "w0": {
            "happiness": (0.0012, 0.0247, 0.0009),
            "anger": (0.0012, 0.0247, 0.0070),
            "sadness": (0.0015, 0.0100, 0.0450),
            "surprise": (0.0080, -0.0050, 0.0220),
            "disgust": (0.0020, 0.0470, 0.0117),
            "fear": (0.2200, 0.0700, 0.0009),
        },
        "w1": {
            "happiness": (0.0167, 0.0064, 0.1045),
            "anger": (-0.0012, 0.0247, 0.0009),
            "sadness": (0.0200, -0.1416, 0.0009),
            "surprise": (0.0012, -0.0247, -0.0009),
            "disgust": (-0.0012, 0.0247, 0.0009),
            "fear": (0.0012, 0.0247, -0.0009),
        },
        "w2": {
            "happiness": (0.0012, 0.0247, 0.0009),
            "anger": (0.0012, 0.0247, 0.0070),
            "sadness": (0.0015, 0.0100, 0.0450),
            "surprise": (0.3693, 0.0820, -0.0119),
            "disgust": (0.0526, 0.0247, 0.0008),
            "fear": (0.0012, 0.0247, 0.0007),
        },
    }
    rows = [rows_raw["w0"], rows_raw["w1"], rows_raw["w2"]]
    model_set = train_toy()
    emotion, scores = classify_feature_rows(model_set.models, rows)
    assert emotion in EMOTIONS + (UNKNOWN,)
    assert set(scores) == set(EMOTIONS)


def test_winner_invariant_under_uniform_log_shift():
    model_set = train_toy()
    rows = [model_set.table.entries["开心"]]
    scores, _ = model_log_scores(model_set.models, rows)
    # adding a constant in log space is a positive rescaling of scores
    assert winner_from_scores(scores) == winner_from_scores(scores + 123.45)
    assert winner_from_scores(scores) == winner_from_scores(scores - 7.0)


def test_empty_word_list_is_error():
    model_set = train_toy()
    with pytest.raises(ValueError):
        classify_emotion(model_set, [])


# --- persistence -------------------------------------------------------------


def test_save_load_round_trip(tmp_path):
    model_set = train_toy()
    path = tmp_path / "emotion.json"
    save_emotion_models(model_set, path)
    loaded = load_emotion_models(path)
    assert loaded.table.vocabulary == model_set.table.vocabulary
    assert loaded.table.entries == model_set.table.entries
    for emotion in EMOTIONS:
        assert loaded.models[emotion].means == model_set.models[emotion].means
        assert loaded.models[emotion].jaccard == model_set.models[emotion].jaccard
    assert classify_emotion(loaded, ["开心", "高兴"]) == classify_emotion(model_set, ["开心", "高兴"])
