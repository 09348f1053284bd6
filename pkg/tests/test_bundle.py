import pytest

from trolldetect.bundle import load_bundle, score_comments, score_text
from trolldetect.corpus import RejectedText

from conftest import packet_element


def records_from_elements(elements):
    from trolldetect.corpus import comment_from_packet_element

    records = []
    for element in elements:
        record, problem = comment_from_packet_element(element)
        assert record is not None, problem
        records.append(record)
    return records


def test_score_text_pipeline(tiny_bundle):
    scores = score_text(tiny_bundle, "产品质量很好123")
    assert 0.0 <= scores.sentiment <= 1.0
    assert scores.words
    assert set(scores.emotion_scores) | {"unknown"} >= {"happiness"} or scores.emotion == "unknown"


def test_score_text_rejects_empty(tiny_bundle):
    with pytest.raises(RejectedText):
        score_text(tiny_bundle, "")


def test_score_comments_counts(tiny_bundle):
    elements = [packet_element(i) for i in range(4)]
    elements[2]["text"] = "转发微博"  # pure repost gets rejected
    records = records_from_elements(elements)
    outcome = score_comments(tiny_bundle, records, "天气真不错", comment_ids=[e["id"] for e in elements])
    assert len(outcome.scored) + len(outcome.rejected) == 4
    assert [r.comment_id for r in outcome.rejected] == ["c2"]
    assert outcome.rejected[0].reason == "pure-repost"
    for s in outcome.scored:
        assert 0.0 <= s.sentiment <= 1.0
        assert 0.0 <= s.troll_probability <= 1.0
        assert s.troll_flag == (s.troll_probability >= tiny_bundle.troll.threshold)


def test_score_comments_deterministic(tiny_bundle):
    elements = [packet_element(i) for i in range(3)]
    records = records_from_elements(elements)
    a = score_comments(tiny_bundle, records, "天气真不错")
    b = score_comments(tiny_bundle, records, "天气真不错")
    assert a == b


def test_unscoreable_original_falls_back_neutral(tiny_bundle):
    records = records_from_elements([packet_element(0)])
    outcome = score_comments(tiny_bundle, records, "12345")
    assert outcome.original_sentiment == 0.5


def test_bundle_round_trip(tiny_bundle, bundle_dir):
    loaded = load_bundle(bundle_dir)
    records = records_from_elements([packet_element(i) for i in range(3)])
    a = score_comments(tiny_bundle, records, "天气真不错")
    b = score_comments(loaded, records, "天气真不错")
    assert a == b
    assert loaded.versions() == tiny_bundle.versions()


def test_bundle_missing_file_is_fatal(tmp_path):
    with pytest.raises(FileNotFoundError, match="segmenter.json"):
        load_bundle(tmp_path)


def test_bundle_requires_troll_when_asked(bundle_dir, tmp_path):
    import shutil

    partial = tmp_path / "partial"
    shutil.copytree(bundle_dir, partial)
    (partial / "troll.json").unlink()
    with pytest.raises(FileNotFoundError, match="troll.json"):
        load_bundle(partial, require_troll=True)
    loaded = load_bundle(partial, require_troll=False)
    assert loaded.troll is None
