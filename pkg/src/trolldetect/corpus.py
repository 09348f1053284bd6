"""Parsing and normalization of external data.

Handles four input shapes: whitespace-segmented Chinese corpora (one
sentence per line), polarity/emotion labeled text corpora, per-tweet
comment CSV files, and recorded comment JSON packets from the mobile
comments endpoint.
"""

from __future__ import annotations

import csv
import json
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

TAGS = ("B", "M", "E", "S")

EMOTIONS = ("happiness", "surprise", "fear", "anger", "disgust", "sadness")

# Successors allowed inside a legal tag sequence.  A sequence must start
# with B or S and end with E or S: every legal sequence spells a
# concatenation of S and B M* E word blocks.
LEGAL_NEXT = {
    "B": ("M", "E"),
    "M": ("M", "E"),
    "E": ("B", "S"),
    "S": ("B", "S"),
}
LEGAL_START = ("B", "S")
LEGAL_END = ("E", "S")


class CorpusError(Exception):
    """Base class for data-ingestion failures."""


class DecodeError(CorpusError):
    def __init__(self, path, line_number, cause):
        super().__init__(f"{path}: line {line_number}: not valid UTF-8 ({cause})")
        self.line_number = line_number


class EmptyCorpusError(CorpusError):
    pass


class SchemaError(CorpusError):
    pass


class RowError(CorpusError):
    def __init__(self, row_index: int, message: str):
        super().__init__(f"row {row_index}: {message}")
        self.row_index = row_index


class PacketShapeError(CorpusError):
    pass


class RejectedText(Exception):
    """Raised by preprocess_text when a comment cannot be scored."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def legal_tag_sequence(tags: Sequence[str]) -> bool:
    """True iff ``tags`` spells a concatenation of S and B M* E blocks."""
    if not tags:
        return False
    if tags[0] not in LEGAL_START or tags[-1] not in LEGAL_END:
        return False
    for a, b in zip(tags, tags[1:]):
        if b not in LEGAL_NEXT[a]:
            return False
    return True


@dataclass(frozen=True)
class TaggedSentence:
    """A sentence as aligned characters and B/M/E/S tags."""

    chars: tuple[str, ...]
    tags: tuple[str, ...]

    def __post_init__(self):
        if len(self.chars) != len(self.tags):
            raise ValueError("chars and tags must have equal length")
        if not legal_tag_sequence(self.tags):
            raise ValueError(f"illegal tag sequence {''.join(self.tags)}")

    def words(self) -> list[str]:
        words: list[str] = []
        for ch, tag in zip(self.chars, self.tags):
            if tag in ("B", "S"):
                words.append(ch)
            else:
                words[-1] += ch
        return words

    def text(self) -> str:
        return "".join(self.chars)


def tags_for_word(word: str) -> tuple[str, ...]:
    """BMES tags for one word: S, BE, or B M...M E by length."""
    n = len(word)
    if n == 1:
        return ("S",)
    return ("B",) + ("M",) * (n - 2) + ("E",)


def sentence_from_words(words: Sequence[str]) -> TaggedSentence:
    chars: list[str] = []
    tags: list[str] = []
    for word in words:
        chars.extend(word)
        tags.extend(tags_for_word(word))
    return TaggedSentence(tuple(chars), tuple(tags))


def parse_sighan_corpus(path) -> list[TaggedSentence]:
    """Parse a segmentation corpus: one sentence per line, words
    separated by whitespace.  Blank lines are skipped.
    """
    raw = Path(path).read_bytes()
    sentences = []
    for i, line in enumerate(raw.split(b"\n"), start=1):
        try:
            text = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DecodeError(path, i, exc) from exc
        words = text.split()
        if words:
            sentences.append(sentence_from_words(words))
    if not sentences:
        raise EmptyCorpusError(f"{path}: no sentences")
    return sentences


def write_sighan_corpus(sentences: Iterable[TaggedSentence], path) -> None:
    lines = [" ".join(s.words()) for s in sentences]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class SentimentDocument:
    text: str
    label: str  # "positive" | "negative"

    def __post_init__(self):
        if self.label not in ("positive", "negative"):
            raise ValueError(f"bad polarity label {self.label!r}")


@dataclass(frozen=True)
class EmotionDocument:
    text: str
    emotion: str

    def __post_init__(self):
        if self.emotion not in EMOTIONS:
            raise ValueError(f"unknown emotion {self.emotion!r}")


def load_polarity_corpus(positive_path, negative_path) -> list[SentimentDocument]:
    """One document per line, one file per polarity."""
    docs = []
    for path, label in ((positive_path, "positive"), (negative_path, "negative")):
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if line:
                docs.append(SentimentDocument(line, label))
    if not docs:
        raise EmptyCorpusError("no sentiment documents")
    return docs


def load_emotion_corpus(path) -> list[EmotionDocument]:
    """Tab-separated lines: ``emotion<TAB>text``."""
    docs = []
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            emotion, text = line.split("\t", 1)
        except ValueError:
            raise RowError(i, "expected 'emotion<TAB>text'") from None
        docs.append(EmotionDocument(text.strip(), emotion.strip()))
    if not docs:
        raise EmptyCorpusError(f"{path}: no emotion documents")
    return docs


# --- comment records -------------------------------------------------------

CSV_COLUMNS = (
    "uid",
    "screen_name",
    "followers_count",
    "follow_count",
    "status_count",
    "urank",
    "verified",
    "description",
    "like_count",
    "floor_number",
    "text",
)

TROLL_LABELS = ("troll", "non-troll")


@dataclass(frozen=True)
class CommentRecord:
    """One comment plus the commenting user's profile fields."""

    uid: str
    screen_name: str
    followers_count: int
    follow_count: int
    status_count: int
    urank: int
    verified: bool
    description: str
    like_count: int
    floor_number: int
    text: str
    tweet_id: str = ""
    label: str | None = None

    def __post_init__(self):
        for name in ("followers_count", "follow_count", "status_count", "urank", "like_count"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.floor_number < 1:
            raise ValueError("floor_number must be >= 1")
        if self.label is not None and self.label not in TROLL_LABELS:
            raise ValueError(f"bad label {self.label!r}")


def _parse_count(value: str, column: str, row_index: int) -> int:
    try:
        n = int(value)
    except ValueError:
        raise RowError(row_index, f"column {column!r}: {value!r} is not an integer") from None
    if n < 0:
        raise RowError(row_index, f"column {column!r}: {n} is negative")
    return n


def _parse_verified(value, row_index: int) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true"):
        return True
    if text in ("0", "false"):
        return False
    raise RowError(row_index, f"column 'verified': {value!r} not in {{0,1,true,false}}")


def parse_comment_csv(path, tweet_id: str | None = None) -> list[CommentRecord]:
    """Parse one per-tweet comment CSV.

    The header must carry exactly the documented column names, with an
    optional trailing ``label`` column.  ``tweet_id`` defaults to the
    file name stem, which is how per-tweet files are written.
    """
    path = Path(path)
    if tweet_id is None:
        tweet_id = path.stem
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected a header row") from None
        expected = set(CSV_COLUMNS)
        got = set(header)
        missing = expected - got
        unexpected = got - expected - {"label"}
        if missing:
            raise SchemaError(f"{path}: missing column(s) {sorted(missing)}")
        if unexpected:
            raise SchemaError(f"{path}: unexpected column(s) {sorted(unexpected)}")
        if len(header) != len(got):
            raise SchemaError(f"{path}: duplicate column in header")
        col = {name: header.index(name) for name in header}
        has_label = "label" in col

        records = []
        for i, row in enumerate(reader):
            if len(row) != len(header):
                raise RowError(i, f"expected {len(header)} fields, got {len(row)}")
            label = None
            if has_label and row[col["label"]].strip():
                value = row[col["label"]].strip()
                if value not in TROLL_LABELS:
                    raise RowError(i, f"column 'label': {value!r}")
                label = value
            try:
                record = CommentRecord(
                    uid=row[col["uid"]],
                    screen_name=row[col["screen_name"]],
                    followers_count=_parse_count(row[col["followers_count"]], "followers_count", i),
                    follow_count=_parse_count(row[col["follow_count"]], "follow_count", i),
                    status_count=_parse_count(row[col["status_count"]], "status_count", i),
                    urank=_parse_count(row[col["urank"]], "urank", i),
                    verified=_parse_verified(row[col["verified"]], i),
                    description=row[col["description"]],
                    like_count=_parse_count(row[col["like_count"]], "like_count", i),
                    floor_number=_parse_count(row[col["floor_number"]], "floor_number", i),
                    text=row[col["text"]],
                    tweet_id=tweet_id,
                    label=label,
                )
            except ValueError as exc:
                raise RowError(i, str(exc)) from None
            records.append(record)
    return records


def write_comment_csv(records: Sequence[CommentRecord], path) -> None:
    """Write one per-tweet CSV (RFC 4180).  All records must share one
    tweet_id; the file should be named ``<tweet_id>.csv`` so that
    parse_comment_csv recovers it.
    """
    tweet_ids = {r.tweet_id for r in records}
    if len(tweet_ids) > 1:
        raise ValueError(f"records span several tweets: {sorted(tweet_ids)}")
    has_label = any(r.label is not None for r in records)
    header = list(CSV_COLUMNS) + (["label"] if has_label else [])
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for r in records:
            row = [
                r.uid,
                r.screen_name,
                str(r.followers_count),
                str(r.follow_count),
                str(r.status_count),
                str(r.urank),
                "1" if r.verified else "0",
                r.description,
                str(r.like_count),
                str(r.floor_number),
                r.text,
            ]
            if has_label:
                row.append(r.label or "")
            writer.writerow(row)


@dataclass
class PacketResult:
    records: list[CommentRecord]
    ids: list[str] = field(default_factory=list)  # aligned with records
    skipped: int = 0
    warnings: list[str] = field(default_factory=list)


def parse_comment_packet(payload: bytes | str, tweet_id: str = "") -> PacketResult:
    """Parse a recorded hotflow-style JSON packet.

    Expects ``data.data`` to be an array of comment objects, each with
    text, like_count, floor_number and a user object.  Malformed
    elements are skipped and tallied, never fatal.  Each record keeps
    its element's id (or its array index when absent).
    """
    try:
        packet = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise PacketShapeError(f"payload is not JSON: {exc}") from exc
    if not isinstance(packet, dict):
        raise PacketShapeError("top-level JSON value must be an object")
    data = packet.get("data")
    if not isinstance(data, dict) or not isinstance(data.get("data"), list):
        raise PacketShapeError("missing data.data array")

    result = PacketResult(records=[])
    for i, element in enumerate(data["data"]):
        record, problem = comment_from_packet_element(element, tweet_id)
        if record is None:
            result.skipped += 1
            result.warnings.append(f"element {i}: {problem}")
        else:
            result.records.append(record)
            result.ids.append(str(element.get("id", i)) if isinstance(element, dict) else str(i))
    return result


def comment_from_packet_element(element, tweet_id: str = "") -> tuple[CommentRecord | None, str]:
    """Map one packet element to a CommentRecord, or (None, reason)."""
    if not isinstance(element, dict):
        return None, "not an object"
    user = element.get("user")
    if not isinstance(user, dict):
        return None, "missing user"
    try:
        record = CommentRecord(
            uid=str(user["id"]),
            screen_name=str(user.get("screen_name", "")),
            followers_count=int(user["followers_count"]),
            follow_count=int(user["follow_count"]),
            status_count=int(user["statuses_count"]),
            urank=int(user["urank"]),
            verified=bool(user["verified"]),
            description=str(user.get("description") or ""),
            like_count=int(element["like_count"]),
            floor_number=int(element["floor_number"]),
            text=str(element["text"]),
            tweet_id=tweet_id,
            label=None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        return None, f"bad element: {exc}"
    return record, ""


# --- text preprocessing ----------------------------------------------------

Translator = Callable[[str], str]


def passthrough_translator(text: str) -> str:
    return text


_DATA_DIR = Path(__file__).parent / "data"

_REPOST_MARKERS = re.compile(r"转发微博|//\s*@[^\s:：]+\s*[:：]?|回复\s*@[^\s:：]+\s*[:：]?")
_MENTION = re.compile(r"@[A-Za-z0-9_\-·一-鿿]+")
_TOPIC = re.compile(r"#[^#]*#")
_BRACKET_EMOTICON = re.compile(r"\[[^\[\]]{1,8}\]")
_DIGITS = re.compile(r"[0-9０-９]")
_EMOJI = re.compile(
    "["
    "\U0001f000-\U0001faff"
    "☀-➿"
    "⬀-⯿"
    "︀-️"
    "‍"
    "]"
)
_WHITESPACE = re.compile(r"\s+")

_HAN = re.compile(r"[㐀-䶿一-鿿]")
_LATIN = re.compile(r"[A-Za-z]")


def _default_stopwords() -> frozenset[str]:
    return load_stopwords(_DATA_DIR / "stopwords.txt")


def load_stopwords(path) -> frozenset[str]:
    """One stop word per line; blank lines and # comments ignored."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


_STOPWORDS_CACHE: frozenset[str] | None = None


def _clean_pass(text: str, stopwords_ordered: list[str]) -> str:
    text = _REPOST_MARKERS.sub(" ", text)
    text = _MENTION.sub(" ", text)
    text = _TOPIC.sub(" ", text)
    text = _BRACKET_EMOTICON.sub(" ", text)
    text = _EMOJI.sub("", text)
    text = _DIGITS.sub("", text)
    text = "".join(c for c in text if not _is_letter(c) or _HAN.match(c) or _LATIN.match(c))
    for word in stopwords_ordered:
        text = text.replace(word, "")
    return text


def _clean_to_fixpoint(text: str, stopwords: frozenset[str]) -> str:
    # Removal can splice fragments into fresh removable patterns (a
    # digit inside a would-be mention, a stop word inside a repost
    # marker), so the whole pass repeats until stable.
    ordered = sorted(stopwords, key=len, reverse=True)
    while True:
        cleaned = _clean_pass(text, ordered)
        if cleaned == text:
            return cleaned
        text = cleaned


def _is_letter(ch: str) -> bool:
    return unicodedata.category(ch).startswith("L")


def preprocess_text(
    text: str,
    translator: Translator | None = None,
    stopwords: frozenset[str] | None = None,
) -> str:
    """Clean one comment for scoring, or raise RejectedText.

    Removal rules: repost markers, user mentions, #topic# spans,
    digits, emoji codepoints, bracket emoticons, stop words, and
    letters outside the Han/Latin scripts.  English-dominant text runs
    through ``translator`` first (default: passthrough).  Rejections:
    empty input, pure reposts, text dominated by neither Han nor Latin
    script, translator failure, and results shorter than two characters
    (the single-word rule).
    """
    global _STOPWORDS_CACHE
    if stopwords is None:
        if _STOPWORDS_CACHE is None:
            _STOPWORDS_CACHE = _default_stopwords()
        stopwords = _STOPWORDS_CACHE
    if translator is None:
        translator = passthrough_translator

    if not text or not text.strip():
        raise RejectedText("empty")

    had_repost_marker = bool(_REPOST_MARKERS.search(text))
    text = _REPOST_MARKERS.sub(" ", text)
    text = _MENTION.sub(" ", text)
    if had_repost_marker and not any(_is_letter(c) for c in text):
        raise RejectedText("pure-repost")

    letters = [c for c in text if _is_letter(c)]
    if letters:
        han = sum(1 for c in letters if _HAN.match(c))
        latin = sum(1 for c in letters if _LATIN.match(c))
        if han / len(letters) >= 0.5:
            pass
        elif latin / len(letters) >= 0.5:
            try:
                text = translator(text)
            except Exception:
                raise RejectedText("translation-failed") from None
        else:
            raise RejectedText("unsupported-language")

    text = _clean_to_fixpoint(text, stopwords)
    text = _WHITESPACE.sub(" ", text).strip()

    if len(text) < 2 or not (_HAN.search(text) or _LATIN.search(text)):
        raise RejectedText("too-short")
    return text
