"""Document ingestion, sentence segmentation, and per-word extraction.

The store is append-only during ingestion and immutable afterwards; an
inverted token index backs the per-word queries.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .preprocess import PreprocessingRule, apply_preprocessing

SOURCE_TYPES = ("books", "news", "forums", "social", "wiki", "other")

# terminal punctuation followed by whitespace or end of text; delimiter consumed
_SENTENCE_SPLIT = re.compile(r"[.!?](?:\s+|$)")


class CorpusError(ValueError):
    """Malformed document, record, or store input."""


@dataclass(frozen=True)
class RawDocument:
    doc_id: str
    text: str
    source_type: str
    year: int | None = None

    def __post_init__(self):
        if not self.doc_id:
            raise CorpusError("doc_id must be nonempty")
        if self.source_type not in SOURCE_TYPES:
            raise CorpusError(
                f"doc {self.doc_id!r}: source_type {self.source_type!r} "
                f"not one of {SOURCE_TYPES}"
            )


@dataclass(frozen=True)
class SentenceRecord:
    sentence_id: str
    text: str
    doc_id: str
    source_type: str
    year: int | None
    token_count: int

    def to_dict(self) -> dict:
        return {
            "sentence_id": self.sentence_id,
            "text": self.text,
            "doc_id": self.doc_id,
            "source_type": self.source_type,
            "year": self.year,
            "token_count": self.token_count,
        }

    @classmethod
    def from_dict(cls, row: dict) -> "SentenceRecord":
        try:
            return cls(
                sentence_id=row["sentence_id"],
                text=row["text"],
                doc_id=row["doc_id"],
                source_type=row["source_type"],
                year=row.get("year"),
                token_count=row["token_count"],
            )
        except KeyError as exc:
            raise CorpusError(f"sentence record missing field {exc}") from exc


@dataclass(frozen=True)
class SeedWordPolicy:
    min_sentences: int = 20
    min_length: int = 3
    exclude_uppercase_initial: bool = True

    def __post_init__(self):
        if self.min_sentences < 1 or self.min_length < 1:
            raise CorpusError("min_sentences and min_length must be >= 1")


def segment_sentences(
    doc: RawDocument, rules: list[PreprocessingRule] | None = None
) -> list[SentenceRecord]:
    """Preprocess a document and split it into sentence records.

    Splits at '.', '!', '?' followed by whitespace or end of text (the
    delimiter is consumed); empty segments are dropped; each record inherits
    the document metadata.
    """
    cleaned = apply_preprocessing(doc.text, rules)
    records = []
    for segment in _SENTENCE_SPLIT.split(cleaned):
        segment = segment.strip()
        if not segment:
            continue
        records.append(
            SentenceRecord(
                sentence_id=f"{doc.doc_id}:{len(records):04d}",
                text=segment,
                doc_id=doc.doc_id,
                source_type=doc.source_type,
                year=doc.year,
                token_count=len(segment.split()),
            )
        )
    return records


class CorpusStore:
    """Sentence table plus an inverted lowercased-token index."""

    def __init__(self):
        self._records: dict[str, SentenceRecord] = {}
        self._index: dict[str, set[str]] = {}
        self._doc_ids: set[str] = set()

    def __len__(self) -> int:
        return len(self._records)

    def add_record(self, record: SentenceRecord) -> None:
        if record.sentence_id in self._records:
            raise CorpusError(f"duplicate sentence_id {record.sentence_id!r}")
        self._records[record.sentence_id] = record
        for token in set(t.lower() for t in record.text.split()):
            self._index.setdefault(token, set()).add(record.sentence_id)

    def ingest_document(
        self, doc: RawDocument, rules: list[PreprocessingRule] | None = None
    ) -> int:
        if doc.doc_id in self._doc_ids:
            raise CorpusError(f"duplicate doc_id {doc.doc_id!r}")
        self._doc_ids.add(doc.doc_id)
        records = segment_sentences(doc, rules)
        for record in records:
            self.add_record(record)
        return len(records)

    def records(self) -> list[SentenceRecord]:
        return [self._records[k] for k in sorted(self._records)]

    def get(self, sentence_id: str) -> SentenceRecord:
        return self._records[sentence_id]

    def sentence_ids_with_token(self, token: str) -> list[str]:
        return sorted(self._index.get(token.lower(), ()))


def extract_sentences(
    word: str, store: CorpusStore, max_per_source: int = 1000
) -> list[SentenceRecord]:
    """Sentences containing the word as a standalone token, capped per source.

    Token comparison lowercases both sides; within each source the first
    max_per_source records by ascending sentence_id are kept; the result is
    ordered by sentence_id.
    """
    if not word:
        raise CorpusError("word must be nonempty")
    taken: list[SentenceRecord] = []
    per_source: dict[str, int] = {}
    for sid in store.sentence_ids_with_token(word):
        record = store.get(sid)
        if per_source.get(record.source_type, 0) >= max_per_source:
            continue
        per_source[record.source_type] = per_source.get(record.source_type, 0) + 1
        taken.append(record)
    return taken


def filter_seed_words(
    candidates: list[str], store: CorpusStore, policy: SeedWordPolicy | None = None
) -> list[str]:
    """Seed words that pass the length, capitalization, and support policies.

    Output is sorted and deduplicated.
    """
    policy = policy or SeedWordPolicy()
    kept = set()
    for word in candidates:
        if not word or len(word) < policy.min_length:
            continue
        if policy.exclude_uppercase_initial and word[0].isupper():
            continue
        if len(extract_sentences(word, store)) < policy.min_sentences:
            continue
        kept.add(word)
    return sorted(kept)


def corpus_stats(store: CorpusStore) -> dict:
    """Token totals and mean sentence lengths, per source and overall.

    Means are exact floats; rounding to integers happens only in
    render_stats_table.
    """
    per_source: dict[str, dict] = {}
    unique: set[str] = set()
    total_tokens = 0
    for record in store.records():
        entry = per_source.setdefault(
            record.source_type, {"total_tokens": 0, "sentence_count": 0}
        )
        entry["total_tokens"] += record.token_count
        entry["sentence_count"] += 1
        total_tokens += record.token_count
        unique.update(record.text.split())
    for entry in per_source.values():
        entry["mean_sentence_length"] = (
            entry["total_tokens"] / entry["sentence_count"]
            if entry["sentence_count"]
            else 0.0
        )
    return {
        "per_source": per_source,
        "total_tokens": total_tokens,
        "total_unique_tokens": len(unique),
    }


def render_stats_table(stats: dict) -> str:
    """Stats as a plain-text table, one row per source, means rounded."""
    lines = [f"{'Source Type':<12} {'Total Tokens':>14} {'Mean Sentence Length':>22}"]
    for source in SOURCE_TYPES:
        entry = stats["per_source"].get(source)
        if entry is None:
            continue
        lines.append(
            f"{source:<12} {entry['total_tokens']:>14,} "
            f"{round(entry['mean_sentence_length']):>22}"
        )
    lines.append(f"{'Total Tokens':<12} {stats['total_tokens']:>14,}")
    lines.append(f"{'Total Unique Tokens':<12} {stats['total_unique_tokens']:>7,}")
    return "\n".join(lines)


def load_documents_jsonl(path) -> list[RawDocument]:
    """One JSON object per line with doc_id, text, source_type, optional year."""
    docs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
                docs.append(
                    RawDocument(
                        doc_id=row["doc_id"],
                        text=row["text"],
                        source_type=row["source_type"],
                        year=row.get("year"),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise CorpusError(f"{path}:{lineno}: malformed document ({exc})")
    return docs


def export_sentences_jsonl(store: CorpusStore, path) -> int:
    """Write every record as one JSON line, ordered by sentence_id; returns count."""
    records = store.records()
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_dict(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")
    return len(records)


def load_sentences_jsonl(path) -> CorpusStore:
    """Rebuild a store from an export produced by export_sentences_jsonl."""
    store = CorpusStore()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: malformed record ({exc})")
            store.add_record(SentenceRecord.from_dict(row))
    return store


def corpus_digest(store: CorpusStore) -> str:
    """Stable content hash of the sentence table."""
    h = hashlib.sha256()
    for record in store.records():
        h.update(
            json.dumps(record.to_dict(), ensure_ascii=False, sort_keys=True).encode()
        )
        h.update(b"\n")
    return h.hexdigest()
