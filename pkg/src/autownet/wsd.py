"""Sense validation through word sense disambiguation.

Each evaluation sentence is compared against its lemma's induced sense
embeddings by cosine similarity; the best sense at or above the threshold is
chosen.  A sense counts as valid once it has been chosen at least once.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from .embeddings import cosine_similarity
from .senses import Sense, SenseInventory

DEFAULT_WSD_THRESHOLD = 0.65


class WSDError(ValueError):
    """Malformed evaluation input."""


@dataclass(frozen=True)
class EvaluationRecord:
    lemma: str
    ref_sense_id: str
    sentence_text: str
    sentence_embedding_id: str

    def __post_init__(self):
        if not self.sentence_text:
            raise WSDError(
                f"evaluation record for {self.lemma!r}/{self.ref_sense_id!r} "
                "has empty sentence_text"
            )


@dataclass
class WSDResult:
    record: EvaluationRecord | None
    chosen_sense_id: str | None
    score: float
    threshold_used: float


def disambiguate(
    sentence_embedding: np.ndarray,
    senses: list[Sense],
    threshold: float = DEFAULT_WSD_THRESHOLD,
    record: EvaluationRecord | None = None,
) -> WSDResult:
    """Pick the sense with the highest cosine similarity, if it clears the threshold.

    Ties go to the smallest sense_id; below-threshold inputs produce no
    chosen sense but keep the best score.
    """
    if not senses:
        raise WSDError("disambiguate requires at least one sense")
    best_id, best_score = None, -np.inf
    for sense in sorted(senses, key=lambda s: s.sense_id):
        score = cosine_similarity(sentence_embedding, sense.embedding)
        if score > best_score:
            best_id, best_score = sense.sense_id, score
    chosen = best_id if best_score >= threshold else None
    return WSDResult(
        record=record,
        chosen_sense_id=chosen,
        score=float(best_score),
        threshold_used=threshold,
    )


@dataclass
class ValidityReport:
    valid_senses: int
    total_senses: int
    valid_fraction: float
    per_sense_usage: dict[str, int]
    mean_score: float
    skipped: list[dict]
    results: list[WSDResult]

    def to_dict(self) -> dict:
        return {
            "valid": self.valid_senses,
            "total": self.total_senses,
            "fraction": self.valid_fraction,
            "per_sense": dict(sorted(self.per_sense_usage.items())),
            "mean_score": self.mean_score,
            "skipped": self.skipped,
        }


def evaluate_sense_validity(
    records: list[EvaluationRecord],
    inventory: SenseInventory,
    embeddings: Mapping[str, np.ndarray],
    threshold: float = DEFAULT_WSD_THRESHOLD,
) -> ValidityReport:
    """Disambiguate every record; a sense is valid once chosen at least once.

    Senses under evaluation are those of lemmas appearing in usable records.
    Records whose lemma has no induced senses, or whose embedding is missing,
    are skipped and reported rather than treated as errors.
    """
    usage: dict[str, int] = {}
    skipped: list[dict] = []
    results: list[WSDResult] = []
    evaluated_lemmas: set[str] = set()
    scores: list[float] = []

    for record in records:
        senses = inventory.senses_for(record.lemma)
        if not senses:
            skipped.append(
                {"lemma": record.lemma, "ref_sense_id": record.ref_sense_id,
                 "reason": "no induced senses"}
            )
            continue
        if record.sentence_embedding_id not in embeddings:
            skipped.append(
                {"lemma": record.lemma, "ref_sense_id": record.ref_sense_id,
                 "reason": f"missing embedding {record.sentence_embedding_id!r}"}
            )
            continue
        evaluated_lemmas.add(record.lemma)
        result = disambiguate(
            embeddings[record.sentence_embedding_id], senses, threshold, record
        )
        results.append(result)
        scores.append(result.score)
        if result.chosen_sense_id is not None:
            usage[result.chosen_sense_id] = usage.get(result.chosen_sense_id, 0) + 1

    under_evaluation = [
        s for lemma in sorted(evaluated_lemmas) for s in inventory.senses_for(lemma)
    ]
    per_sense = {s.sense_id: usage.get(s.sense_id, 0) for s in under_evaluation}
    valid = sum(1 for count in per_sense.values() if count >= 1)
    total = len(under_evaluation)
    return ValidityReport(
        valid_senses=valid,
        total_senses=total,
        valid_fraction=(valid / total) if total else 0.0,
        per_sense_usage=per_sense,
        mean_score=float(np.mean(scores)) if scores else 0.0,
        skipped=skipped,
        results=results,
    )


@dataclass
class MatchMatrix:
    lemma: str
    ref_sense_ids: list[str]
    column_ids: list[str]  # induced sense ids plus the final "XX" column
    values: np.ndarray

    def rows(self) -> list[tuple[str, str, float]]:
        out = []
        for i, ref in enumerate(self.ref_sense_ids):
            for j, col in enumerate(self.column_ids):
                out.append((ref, col, float(self.values[i, j])))
        return out


UNMATCHED = "XX"


def sense_match_matrix(
    lemma: str,
    records: list[EvaluationRecord],
    inventory: SenseInventory,
    embeddings: Mapping[str, np.ndarray],
    threshold: float = DEFAULT_WSD_THRESHOLD,
) -> MatchMatrix:
    """Fraction of each reference sense's sentences mapped to each induced sense.

    Below-threshold sentences fall into the trailing "XX" column, so every
    row sums to 1.
    """
    senses = inventory.senses_for(lemma)
    if not senses:
        raise WSDError(f"lemma {lemma!r} has no induced senses")
    mine = [r for r in records if r.lemma == lemma]
    if not mine:
        raise WSDError(f"no evaluation records for lemma {lemma!r}")
    ref_ids = sorted({r.ref_sense_id for r in mine})
    col_ids = sorted(s.sense_id for s in senses) + [UNMATCHED]
    counts = np.zeros((len(ref_ids), len(col_ids)))
    for record in mine:
        result = disambiguate(
            embeddings[record.sentence_embedding_id], senses, threshold, record
        )
        row = ref_ids.index(record.ref_sense_id)
        col = (
            col_ids.index(result.chosen_sense_id)
            if result.chosen_sense_id is not None
            else len(col_ids) - 1
        )
        counts[row, col] += 1
    totals = counts.sum(axis=1, keepdims=True)
    return MatchMatrix(lemma, ref_ids, col_ids, counts / totals)


def load_evaluation_manifest(path) -> list[EvaluationRecord]:
    """JSON lines: {lemma, ref_sense_id, sentence_text, sentence_embedding_id}."""
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
                records.append(
                    EvaluationRecord(
                        lemma=row["lemma"],
                        ref_sense_id=row["ref_sense_id"],
                        sentence_text=row["sentence_text"],
                        sentence_embedding_id=row["sentence_embedding_id"],
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise WSDError(f"{path}:{lineno}: malformed record ({exc})")
    return records


def write_heatmap_csv(matrices: list[MatchMatrix], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("ref_sense_id,induced_sense_id,fraction\n")
        for matrix in matrices:
            for ref, col, value in matrix.rows():
                fh.write(f"{ref},{col},{value}\n")
