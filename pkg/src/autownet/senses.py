"""Per-word sense induction: three affinity-propagation passes with purge/trim.

Pass 1 clusters a word's sentence embeddings, drops weak clusters, and trims
each survivor to its 5 most central sentences.  Passes 2 and 3 re-cluster the
surviving sentences to merge clusters that describe the same usage, trimming
to 20 and then 10 sentences.  Each final cluster is one sense; its embedding
is the mean of its member sentence embeddings.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from .cluster import APParams, Cluster, affinity_propagation, purge, similarity_matrix, trim
from .corpus import CorpusStore, SeedWordPolicy, extract_sentences, filter_seed_words


@dataclass(frozen=True)
class StepParams:
    damping: float
    purge_min_size: int | None = None
    trim_size: int | None = None

    def __post_init__(self):
        if not (0.5 <= self.damping < 1.0):
            raise ValueError(f"damping must be in [0.5, 1), got {self.damping}")
        if self.trim_size is not None and self.trim_size < 1:
            raise ValueError(f"trim_size must be >= 1, got {self.trim_size}")

    def to_dict(self) -> dict:
        return {
            "damping": self.damping,
            "purge_min_size": self.purge_min_size,
            "trim_size": self.trim_size,
        }

    @classmethod
    def from_dict(cls, row: dict) -> "StepParams":
        return cls(
            damping=row["damping"],
            purge_min_size=row.get("purge_min_size"),
            trim_size=row.get("trim_size"),
        )


@dataclass(frozen=True)
class PipelineParams:
    step1: StepParams = field(default_factory=lambda: StepParams(0.5, 5, 5))
    step2: StepParams = field(default_factory=lambda: StepParams(0.8, None, 20))
    step3: StepParams = field(default_factory=lambda: StepParams(0.5, None, 10))
    max_iterations: int = 500
    convergence_window: int = 30

    def steps(self) -> tuple[StepParams, StepParams, StepParams]:
        return (self.step1, self.step2, self.step3)

    def ap_params(self, damping: float) -> APParams:
        return APParams(
            damping=damping,
            max_iterations=self.max_iterations,
            convergence_window=self.convergence_window,
        )

    def to_dict(self) -> dict:
        return {
            "step1": self.step1.to_dict(),
            "step2": self.step2.to_dict(),
            "step3": self.step3.to_dict(),
            "max_iterations": self.max_iterations,
            "convergence_window": self.convergence_window,
        }

    @classmethod
    def from_dict(cls, row: dict) -> "PipelineParams":
        return cls(
            step1=StepParams.from_dict(row["step1"]),
            step2=StepParams.from_dict(row["step2"]),
            step3=StepParams.from_dict(row["step3"]),
            max_iterations=row.get("max_iterations", 500),
            convergence_window=row.get("convergence_window", 30),
        )


@dataclass
class Sense:
    sense_id: str
    lemma: str
    embedding: np.ndarray
    example_sentence_ids: list[str]
    step_provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.example_sentence_ids:
            raise ValueError(f"sense {self.sense_id!r} has no example sentences")


@dataclass
class SenseInventory:
    senses: dict[str, list[Sense]] = field(default_factory=dict)
    params: PipelineParams = field(default_factory=PipelineParams)

    def all_senses(self) -> list[Sense]:
        return [s for lemma in sorted(self.senses) for s in self.senses[lemma]]

    def lemmas(self) -> list[str]:
        return sorted(self.senses)

    def sense_count(self) -> int:
        return sum(len(v) for v in self.senses.values())

    def senses_for(self, lemma: str) -> list[Sense]:
        return self.senses.get(lemma, [])


def _cluster_pass(
    pool: Mapping[str, np.ndarray], step: StepParams, params: PipelineParams
) -> list[Cluster]:
    ap = params.ap_params(step.damping)
    clusters = affinity_propagation(similarity_matrix(pool, ap), ap, pool)
    if step.purge_min_size is not None:
        clusters = purge(clusters, step.purge_min_size)
    if step.trim_size is not None:
        clusters = [trim(c, step.trim_size, pool) for c in clusters]
    return clusters


def induce_senses(
    word: str,
    sentence_embeddings: Mapping[str, np.ndarray],
    params: PipelineParams | None = None,
) -> list[Sense]:
    """Run the three clustering passes for one word.

    Returns the induced senses in order of their smallest example sentence
    id; an empty list is legal when the first pass purges every cluster.
    """
    if not sentence_embeddings:
        raise ValueError(f"no sentence embeddings for word {word!r}")
    params = params or PipelineParams()

    step_clusters: list[list[Cluster]] = []
    pool = dict(sentence_embeddings)
    for step in params.steps():
        clusters = _cluster_pass(pool, step, params)
        step_clusters.append(clusters)
        if not clusters:
            return []
        pool = {
            m: sentence_embeddings[m] for c in clusters for m in c.member_ids
        }

    final = sorted(step_clusters[-1], key=lambda c: c.member_ids[0])
    senses = []
    for rank, cluster in enumerate(final, start=1):
        members = set(cluster.member_ids)
        provenance = {}
        for step_no, clusters in enumerate(step_clusters, start=1):
            provenance[f"step{step_no}"] = [
                f"step{step_no}:{c.cluster_id}"
                for c in clusters
                if members & set(c.member_ids)
            ]
        senses.append(
            Sense(
                sense_id=f"{word}%{rank}",
                lemma=word,
                embedding=cluster.centroid,
                example_sentence_ids=list(cluster.member_ids),
                step_provenance=provenance,
            )
        )
    return senses


def build_sense_inventory(
    seed_words: list[str],
    corpus_store: CorpusStore,
    embedding_store: Mapping[str, np.ndarray],
    params: PipelineParams | None = None,
    policy: SeedWordPolicy | None = None,
    max_per_source: int = 1000,
) -> tuple[SenseInventory, list[dict]]:
    """Induce senses for every seed word that passes the policy.

    Returns the inventory plus a skip report: one {lemma, reason} entry for
    each candidate that was filtered out, lacked embeddings, or produced no
    senses.  A missing embedding skips the word, never the whole run.
    """
    params = params or PipelineParams()
    policy = policy or SeedWordPolicy()
    inventory = SenseInventory(params=params)
    skips: list[dict] = []

    kept = set(filter_seed_words(seed_words, corpus_store, policy))
    for word in sorted(set(seed_words)):
        if word not in kept:
            if not word or len(word) < policy.min_length:
                reason = f"shorter than {policy.min_length} letters"
            elif policy.exclude_uppercase_initial and word[0].isupper():
                reason = "uppercase-initial (proper noun filter)"
            else:
                reason = f"fewer than {policy.min_sentences} example sentences"
            skips.append({"lemma": word, "reason": reason})
            continue
        records = extract_sentences(word, corpus_store, max_per_source)
        missing = [r.sentence_id for r in records if r.sentence_id not in embedding_store]
        if missing:
            skips.append(
                {
                    "lemma": word,
                    "reason": f"missing embeddings for {len(missing)} sentences "
                    f"(first: {missing[0]})",
                }
            )
            continue
        embeddings = {r.sentence_id: embedding_store[r.sentence_id] for r in records}
        senses = induce_senses(word, embeddings, params)
        if not senses:
            skips.append({"lemma": word, "reason": "all clusters purged"})
            continue
        inventory.senses[word] = senses
    return inventory, skips


def sense_distribution(inventory: SenseInventory) -> dict[int, int]:
    """Histogram over lemmas of how many senses each one has."""
    dist: dict[int, int] = {}
    for senses in inventory.senses.values():
        dist[len(senses)] = dist.get(len(senses), 0) + 1
    return dict(sorted(dist.items()))


def write_distribution_csv(dist: dict[int, int], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("senses_per_word,word_count\n")
        for count in sorted(dist):
            fh.write(f"{count},{dist[count]}\n")


def write_skip_report(skips: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in skips:
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")
