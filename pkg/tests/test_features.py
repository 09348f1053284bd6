import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trolldetect.corpus import CommentRecord, RejectedText
from trolldetect.features import (
    FEATURE_NAMES,
    RATIO_CAP,
    build_feature_matrix,
    diff_original_senti,
    ff_ratio,
    fo_ratio,
    freq_comment_flags,
    read_features_csv,
    to_arrays,
    write_features_csv,
)


def record(uid="u1", floor=1, **overrides):
    fields = dict(
        uid=uid,
        screen_name=uid,
        followers_count=100,
        follow_count=50,
        status_count=10,
        urank=4,
        verified=False,
        description="个人简介",
        like_count=3,
        floor_number=floor,
        text="这条评论内容不错",
        tweet_id="t1",
        label=None,
    )
    fields.update(overrides)
    return CommentRecord(**fields)


NEUTRAL_EMOTIONS = {e: 0.0 for e in ("happiness", "sadness", "anger", "disgust", "fear", "surprise")}


def constant_scorer(sentiment=0.8, emotions=None):
    def score(text):
        return sentiment, dict(emotions or NEUTRAL_EMOTIONS)

    return score


# --- ratios -------------------------------------------------------------------


def test_ff_ratio_examples():
    assert ff_ratio(100, 50) == 2.0
    assert ff_ratio(0, 50) == 0.0
    assert ff_ratio(0, 0) == 0.0
    assert ff_ratio(10, 0) == RATIO_CAP


def test_fo_ratio_examples():
    assert fo_ratio(200, 50) == 4.0
    assert fo_ratio(0, 123) == 0.0
    assert fo_ratio(7, 0) == RATIO_CAP


def test_diff_original_senti_examples():
    assert diff_original_senti(0.9, 0.4) == pytest.approx(0.5)
    assert diff_original_senti(0.3, 0.3) == 0.0
    assert diff_original_senti(0.0, 1.0) == -1.0


# --- frequent-comment flags ---------------------------------------------------


def records_with_counts(counts):
    out = []
    floor = 1
    for uid, n in counts.items():
        for _ in range(n):
            out.append(record(uid=uid, floor=floor))
            floor += 1
    return out


def test_freq_flags_median_rule():
    # multi-commenter counts {2, 3, 5}: median 3, only the 5-count user flagged
    recs = records_with_counts({"a": 2, "b": 3, "c": 5, "lurker": 1})
    flags = dict(zip((r.uid for r in recs), freq_comment_flags(recs)))
    assert flags == {"a": 0, "b": 0, "c": 1, "lurker": 0}


def test_freq_flags_all_single_commenters():
    recs = records_with_counts({"a": 1, "b": 1, "c": 1})
    assert freq_comment_flags(recs) == [0, 0, 0]


def test_freq_flags_single_multi_user_not_flagged():
    recs = records_with_counts({"a": 10})
    assert freq_comment_flags(recs) == [0] * 10


def test_freq_flags_strictly_above_median():
    # counts {2, 3, 4, 5}: median 3.5, users with 4 and 5 are flagged
    recs = records_with_counts({"a": 2, "b": 3, "c": 4, "d": 5})
    flags = dict(zip((r.uid for r in recs), freq_comment_flags(recs)))
    assert flags == {"a": 0, "b": 0, "c": 1, "d": 1}


def test_freq_flags_reject_mixed_tweets():
    recs = [record(uid="a"), record(uid="b", tweet_id="other")]
    with pytest.raises(ValueError):
        freq_comment_flags(recs)


@given(st.permutations(list(range(8))))
def test_freq_flags_permutation_invariant(order):
    recs = records_with_counts({"a": 3, "b": 2, "c": 2, "d": 1})
    shuffled = [recs[i] for i in order]
    flags = dict(zip((r.uid for r in shuffled), freq_comment_flags(shuffled)))
    baseline = dict(zip((r.uid for r in recs), freq_comment_flags(recs)))
    assert flags == baseline


# --- matrix building ----------------------------------------------------------


def test_description_and_verified_flags():
    recs = [
        record(uid="a", description="  "),
        record(uid="b", description="真实简介"),
        record(uid="c", verified=True),
    ]
    result = build_feature_matrix(recs, constant_scorer(), original_score=0.5)
    by_uid = {r.uid: v for r, v in zip(recs, result.vectors)}
    assert by_uid["a"].description == 0.0
    assert by_uid["b"].description == 1.0
    assert by_uid["c"].verified == 1.0
    assert by_uid["a"].verified == 0.0


def test_rejected_records_are_dropped_and_counted():
    def picky(text):
        if "烂" in text:
            raise RejectedText("too-short")
        return 0.5, dict(NEUTRAL_EMOTIONS)

    recs = [record(uid="a"), record(uid="b", text="烂"), record(uid="c")]
    result = build_feature_matrix(recs, picky, original_score=0.5)
    assert len(result.vectors) == 2
    assert result.dropped == [(1, "too-short")]


def test_ratio_identities_hold():
    recs = [
        record(uid="a", followers_count=7, follow_count=3, status_count=11),
        record(uid="b", followers_count=123, follow_count=456, status_count=0),
    ]
    result = build_feature_matrix(recs, constant_scorer(), original_score=0.2)
    for rec, vec in zip(recs, result.vectors):
        assert vec.ff_ratio * rec.followers_count == pytest.approx(rec.follow_count, abs=1e-9)
        assert vec.fo_ratio * rec.followers_count == pytest.approx(rec.status_count, abs=1e-9)
        assert vec.diff_original_senti + 0.2 == pytest.approx(vec.sentiment, abs=1e-12)


def test_five_record_fixture_matches_hand_built_matrix():
    sentiments = {"甲": 0.9, "乙": 0.1, "丙": 0.5, "丁": 0.7, "戊": 0.3}
    emotions = {
        "甲": {"happiness": 0.8, "sadness": 0.05, "anger": 0.05, "disgust": 0.04, "fear": 0.03, "surprise": 0.03},
        "乙": {"happiness": 0.1, "sadness": 0.6, "anger": 0.1, "disgust": 0.1, "fear": 0.05, "surprise": 0.05},
        "丙": dict(NEUTRAL_EMOTIONS),
        "丁": {"happiness": 0.5, "sadness": 0.1, "anger": 0.1, "disgust": 0.1, "fear": 0.1, "surprise": 0.1},
        "戊": {"happiness": 0.0, "sadness": 0.2, "anger": 0.5, "disgust": 0.2, "fear": 0.05, "surprise": 0.05},
    }

    def scorer(text):
        return sentiments[text], emotions[text]

    recs = [
        record(uid="a", text="甲", followers_count=10, follow_count=30, status_count=5, floor=1, label="troll"),
        record(uid="a", text="乙", followers_count=10, follow_count=30, status_count=5, floor=2),
        record(uid="b", text="丙", followers_count=0, follow_count=8, status_count=0, floor=3, verified=True),
        record(uid="c", text="丁", followers_count=200, follow_count=100, status_count=400, floor=4, description=""),
        record(uid="d", text="戊", followers_count=50, follow_count=0, status_count=25, floor=5, label="non-troll"),
    ]
    original = 0.6
    result = build_feature_matrix(recs, scorer, original_score=original)
    assert result.dropped == []

    # only user "a" comments more than once -> median 2, not exceeded
    expected_freq = [0, 0, 0, 0, 0]
    expected_rows = []
    for rec, freq in zip(recs, expected_freq):
        senti = sentiments[rec.text]
        emo = emotions[rec.text]
        expected_rows.append([
            rec.followers_count,
            rec.follow_count,
            rec.status_count,
            rec.urank,
            1.0 if rec.verified else 0.0,
            rec.like_count,
            rec.floor_number,
            1.0 if rec.description.strip() else 0.0,
            freq,
            (rec.follow_count / rec.followers_count) if rec.followers_count else (0.0 if rec.follow_count == 0 else RATIO_CAP),
            (rec.status_count / rec.followers_count) if rec.followers_count else (0.0 if rec.status_count == 0 else RATIO_CAP),
            senti,
            senti - original,
            emo["happiness"],
            emo["sadness"],
            emo["anger"],
            emo["disgust"],
            emo["fear"],
            emo["surprise"],
        ])
    got = np.array([v.to_array() for v in result.vectors])
    assert np.array_equal(got, np.array(expected_rows, dtype=float))
    assert [v.label for v in result.vectors] == ["troll", None, None, None, "non-troll"]


# --- CSV ----------------------------------------------------------------------


def test_feature_csv_round_trip(tmp_path):
    recs = [
        record(uid="a", label="troll"),
        record(uid="b", followers_count=0, follow_count=5, label="non-troll"),
    ]
    result = build_feature_matrix(recs, constant_scorer(0.37), original_score=0.21)
    for v, r in zip(result.vectors, recs):
        v.label = r.label
    path = tmp_path / "features.csv"
    write_features_csv(result.vectors, path)
    parsed = read_features_csv(path)
    assert parsed == result.vectors
    header = path.read_text(encoding="utf-8").splitlines()[0]
    assert header == ",".join([f"F{i}" for i in range(19)] + ["label"])


def test_to_arrays_labels():
    recs = [record(uid="a", label="troll"), record(uid="b", label="non-troll")]
    result = build_feature_matrix(recs, constant_scorer(), original_score=0.5)
    X, y = to_arrays(result.vectors)
    assert X.shape == (2, len(FEATURE_NAMES))
    assert y.tolist() == [1, 0]


def test_to_arrays_rejects_unlabeled():
    recs = [record(uid="a")]
    result = build_feature_matrix(recs, constant_scorer(), original_score=0.5)
    with pytest.raises(ValueError):
        to_arrays(result.vectors)
