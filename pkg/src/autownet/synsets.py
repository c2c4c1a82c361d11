"""Synset induction over the sense inventory, plus reference comparison.

Senses whose embeddings sit within a cosine distance threshold of each other
(0.12 by default) are merged into synsets by threshold-stopped agglomerative
clustering; induced synsets are scored against a reference wordnet with the
Jaccard index over lemma sets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .cluster import MergeEvent, agglomerative_cosine
from .senses import SenseInventory

DEFAULT_DISTANCE_THRESHOLD = 0.12
OVERSIZE_THRESHOLD = 10


class SynsetError(ValueError):
    """Malformed synset input."""


@dataclass
class Synset:
    synset_id: str
    sense_ids: list[str]
    lemmas: list[str]

    def __post_init__(self):
        if not self.sense_ids:
            raise SynsetError(f"synset {self.synset_id!r} has no senses")
        if not self.lemmas:
            raise SynsetError(f"synset {self.synset_id!r} has no lemmas")


@dataclass(frozen=True)
class ReferenceSynset:
    ref_id: str
    lemmas: frozenset[str]

    def __post_init__(self):
        if not self.lemmas:
            raise SynsetError(f"reference synset {self.ref_id!r} has no lemmas")


def induce_synsets(
    inventory: SenseInventory,
    distance_threshold: float = DEFAULT_DISTANCE_THRESHOLD,
    merge_log: list[MergeEvent] | None = None,
) -> list[Synset]:
    """Cluster every sense embedding; each cluster (singletons included) is a synset.

    Two senses of the same lemma may share a synset; they contribute one
    lemma to its lemma set.
    """
    senses = inventory.all_senses()
    if not senses:
        raise SynsetError("cannot induce synsets from an empty inventory")
    by_id = {s.sense_id: s for s in senses}
    items = {s.sense_id: s.embedding for s in senses}
    clusters = agglomerative_cosine(items, distance_threshold, merge_log)
    synsets = []
    for rank, cluster in enumerate(clusters, start=1):
        lemmas = sorted({by_id[sid].lemma for sid in cluster.member_ids})
        synsets.append(
            Synset(
                synset_id=f"syn{rank:05d}",
                sense_ids=list(cluster.member_ids),
                lemmas=lemmas,
            )
        )
    return synsets


def jaccard(a, b) -> float:
    """|A ∩ B| / |A ∪ B| over two lemma sets; at least one must be nonempty."""
    sa, sb = set(a), set(b)
    if not sa and not sb:
        raise SynsetError("jaccard of two empty sets is undefined")
    return len(sa & sb) / len(sa | sb)


def compare_synsets(
    induced: list[Synset], reference: list[ReferenceSynset]
) -> tuple[list[dict], dict[float, int]]:
    """Best reference match per induced synset, plus the score distribution.

    best_jaccard is the maximum Jaccard over all reference synsets, ties
    going to the smallest ref_id.  The distribution buckets scores rounded
    to 2 decimals (display only; the per-synset scores stay exact).
    """
    if not induced or not reference:
        raise SynsetError("compare_synsets requires nonempty induced and reference lists")
    results = []
    distribution: dict[float, int] = {}
    for synset in induced:
        best_ref, best_score = None, -1.0
        for ref in sorted(reference, key=lambda r: r.ref_id):
            score = jaccard(synset.lemmas, ref.lemmas)
            if score > best_score:
                best_ref, best_score = ref.ref_id, score
        results.append(
            {
                "synset_id": synset.synset_id,
                "best_ref_id": best_ref,
                "best_jaccard": best_score,
            }
        )
        bucket = round(best_score, 2)
        distribution[bucket] = distribution.get(bucket, 0) + 1
    return results, dict(sorted(distribution.items()))


def synset_size_report(
    induced: list[Synset], flag_threshold: int = OVERSIZE_THRESHOLD
) -> dict:
    """Lemma-count histogram plus the synsets big enough to need manual review."""
    histogram: dict[int, int] = {}
    flagged = []
    for synset in induced:
        size = len(synset.lemmas)
        histogram[size] = histogram.get(size, 0) + 1
        if size >= flag_threshold:
            flagged.append(
                {
                    "synset_id": synset.synset_id,
                    "size": size,
                    "lemmas": list(synset.lemmas),
                }
            )
    return {"histogram": dict(sorted(histogram.items())), "flagged": flagged}


def load_reference_synsets(path) -> list[ReferenceSynset]:
    """JSON document: a list of {ref_id, lemmas: [...]} objects."""
    with open(path, "r", encoding="utf-8") as fh:
        rows = json.load(fh)
    if not isinstance(rows, list):
        raise SynsetError(f"{path}: expected a JSON list of reference synsets")
    refs = []
    for i, row in enumerate(rows):
        try:
            refs.append(ReferenceSynset(row["ref_id"], frozenset(row["lemmas"])))
        except (KeyError, TypeError) as exc:
            raise SynsetError(f"{path}: reference synset {i}: {exc}")
    return refs


def write_synsets_json(synsets: list[Synset], path) -> None:
    doc = [
        {"synset_id": s.synset_id, "sense_ids": s.sense_ids, "lemmas": s.lemmas}
        for s in synsets
    ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False, sort_keys=True, indent=2)
        fh.write("\n")


def write_jaccard_csv(distribution: dict[float, int], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("jaccard,synset_count\n")
        for score in sorted(distribution):
            fh.write(f"{score:.2f},{distribution[score]}\n")


def write_size_csv(histogram: dict[int, int], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("synset_size,synset_count\n")
        for size in sorted(histogram):
            fh.write(f"{size},{histogram[size]}\n")
