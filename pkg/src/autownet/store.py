"""Persistence for inventories and the assembled wordnet resource.

The JSON document is canonical (sorted keys, fixed two-space indent, records
ordered by id) so that re-exporting an unchanged resource is byte-identical.
Embeddings live in an EMB1 sidecar next to the JSON, referenced by relative
file name.  Unknown fields found on load are kept and written back out.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .embeddings import read_embedding_file, write_embedding_file
from .senses import PipelineParams, Sense, SenseInventory
from .synsets import Synset

SCHEMA_VERSION = "fwn-1"

_SENSE_FIELDS = {"sense_id", "lemma", "example_sentence_ids", "step_provenance"}
_SYNSET_FIELDS = {"synset_id", "sense_ids", "lemmas"}
_RESOURCE_FIELDS = {
    "version",
    "created_at",
    "params",
    "senses",
    "synsets",
    "source_corpus_digest",
    "embedding_file",
}


class StoreError(ValueError):
    """Schema violation, dangling reference, or malformed file."""


@dataclass
class WordNetResource:
    version: str = SCHEMA_VERSION
    created_at: str = "1970-01-01T00:00:00Z"
    params: dict = field(default_factory=dict)
    senses: list[Sense] = field(default_factory=list)
    synsets: list[Synset] = field(default_factory=list)
    source_corpus_digest: str = ""
    extras: dict = field(default_factory=dict)
    sense_extras: dict[str, dict] = field(default_factory=dict)
    synset_extras: dict[str, dict] = field(default_factory=dict)


def validate_resource(resource: WordNetResource) -> None:
    """Check id uniqueness and referential integrity; raise StoreError if broken."""
    if not resource.params:
        raise StoreError("resource.params is empty; pipeline parameters are required")
    sense_ids = [s.sense_id for s in resource.senses]
    if len(sense_ids) != len(set(sense_ids)):
        dupes = sorted({i for i in sense_ids if sense_ids.count(i) > 1})
        raise StoreError(f"duplicate sense ids: {dupes[:5]}")
    synset_ids = [s.synset_id for s in resource.synsets]
    if len(synset_ids) != len(set(synset_ids)):
        dupes = sorted({i for i in synset_ids if synset_ids.count(i) > 1})
        raise StoreError(f"duplicate synset ids: {dupes[:5]}")
    known = set(sense_ids)
    for synset in resource.synsets:
        for sid in synset.sense_ids:
            if sid not in known:
                raise StoreError(
                    f"synset {synset.synset_id!r} references missing sense {sid!r}"
                )
    for sense in resource.senses:
        if not sense.example_sentence_ids:
            raise StoreError(f"sense {sense.sense_id!r} has no example sentences")
        if sense.embedding is None or np.asarray(sense.embedding).size == 0:
            raise StoreError(f"sense {sense.sense_id!r} has no embedding")


def _sense_to_dict(sense: Sense, extras: dict) -> dict:
    doc = {
        "sense_id": sense.sense_id,
        "lemma": sense.lemma,
        "example_sentence_ids": list(sense.example_sentence_ids),
        "step_provenance": sense.step_provenance,
    }
    doc.update(extras)
    return doc


def _synset_to_dict(synset: Synset, extras: dict) -> dict:
    doc = {
        "synset_id": synset.synset_id,
        "sense_ids": list(synset.sense_ids),
        "lemmas": list(synset.lemmas),
    }
    doc.update(extras)
    return doc


def _dump_canonical(doc: dict, path: Path) -> int:
    data = (json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=2) + "\n").encode("utf-8")
    path.write_bytes(data)
    return len(data)


def export_wordnet(resource: WordNetResource, path) -> int:
    """Write the resource as canonical JSON plus an embedding sidecar.

    Returns the number of bytes written to the JSON file.  Invariants are
    validated before anything is written.
    """
    validate_resource(resource)
    path = Path(path)
    sidecar = path.with_suffix(".emb")
    senses = sorted(resource.senses, key=lambda s: s.sense_id)
    synsets = sorted(resource.synsets, key=lambda s: s.synset_id)
    doc = {
        "version": resource.version,
        "created_at": resource.created_at,
        "params": resource.params,
        "senses": [
            _sense_to_dict(s, resource.sense_extras.get(s.sense_id, {})) for s in senses
        ],
        "synsets": [
            _synset_to_dict(s, resource.synset_extras.get(s.synset_id, {}))
            for s in synsets
        ],
        "source_corpus_digest": resource.source_corpus_digest,
        "embedding_file": sidecar.name,
    }
    doc.update(resource.extras)
    dim = int(np.asarray(senses[0].embedding).size) if senses else 1
    write_embedding_file(sidecar, dim, ((s.sense_id, s.embedding) for s in senses))
    return _dump_canonical(doc, path)


def load_wordnet(path) -> WordNetResource:
    """Load and fully validate a wordnet JSON document and its sidecar."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise StoreError(f"{path}: parse error at byte {exc.pos}: {exc.msg}")
    if not isinstance(doc, dict):
        raise StoreError(f"{path}: top level must be a JSON object")
    for fname in ("version", "created_at", "params", "senses", "synsets"):
        if fname not in doc:
            raise StoreError(f"{path}: missing required field {fname!r}")

    embedding_file = doc.get("embedding_file")
    embeddings: dict[str, np.ndarray] = {}
    if embedding_file:
        sidecar = path.parent / embedding_file
        if not sidecar.exists():
            raise StoreError(f"{path}: embedding sidecar {embedding_file!r} not found")
        embeddings = dict(read_embedding_file(sidecar))

    senses, sense_extras = [], {}
    for i, row in enumerate(doc["senses"]):
        for fname in ("sense_id", "lemma", "example_sentence_ids"):
            if fname not in row:
                raise StoreError(f"{path}: senses[{i}]: missing field {fname!r}")
        if row["sense_id"] not in embeddings:
            raise StoreError(
                f"{path}: senses[{i}]: no embedding for {row['sense_id']!r} in sidecar"
            )
        senses.append(
            Sense(
                sense_id=row["sense_id"],
                lemma=row["lemma"],
                embedding=embeddings[row["sense_id"]],
                example_sentence_ids=list(row["example_sentence_ids"]),
                step_provenance=row.get("step_provenance", {}),
            )
        )
        extras = {k: v for k, v in row.items() if k not in _SENSE_FIELDS}
        if extras:
            sense_extras[row["sense_id"]] = extras

    synsets, synset_extras = [], {}
    for i, row in enumerate(doc["synsets"]):
        for fname in ("synset_id", "sense_ids", "lemmas"):
            if fname not in row:
                raise StoreError(f"{path}: synsets[{i}]: missing field {fname!r}")
        synsets.append(
            Synset(
                synset_id=row["synset_id"],
                sense_ids=list(row["sense_ids"]),
                lemmas=list(row["lemmas"]),
            )
        )
        extras = {k: v for k, v in row.items() if k not in _SYNSET_FIELDS}
        if extras:
            synset_extras[row["synset_id"]] = extras

    resource = WordNetResource(
        version=doc["version"],
        created_at=doc["created_at"],
        params=doc["params"],
        senses=senses,
        synsets=synsets,
        source_corpus_digest=doc.get("source_corpus_digest", ""),
        extras={k: v for k, v in doc.items() if k not in _RESOURCE_FIELDS},
        sense_extras=sense_extras,
        synset_extras=synset_extras,
    )
    validate_resource(resource)
    return resource


def wordnet_stats(resource: WordNetResource) -> dict:
    """Headline counts and histograms for a resource."""
    per_lemma: dict[str, int] = {}
    for sense in resource.senses:
        per_lemma[sense.lemma] = per_lemma.get(sense.lemma, 0) + 1
    senses_per_word: dict[int, int] = {}
    for count in per_lemma.values():
        senses_per_word[count] = senses_per_word.get(count, 0) + 1
    synset_sizes: dict[int, int] = {}
    for synset in resource.synsets:
        size = len(synset.lemmas)
        synset_sizes[size] = synset_sizes.get(size, 0) + 1
    return {
        "sense_count": len(resource.senses),
        "synset_count": len(resource.synsets),
        "lemma_count": len(per_lemma),
        "senses_per_word": dict(sorted(senses_per_word.items())),
        "synset_sizes": dict(sorted(synset_sizes.items())),
    }


def write_inventory(inventory: SenseInventory, path) -> int:
    """Inventory as canonical JSON with the sense embeddings in a sidecar."""
    path = Path(path)
    sidecar = path.with_suffix(".emb")
    senses = inventory.all_senses()
    doc = {
        "params": inventory.params.to_dict(),
        "embedding_file": sidecar.name,
        "senses": [
            {
                "sense_id": s.sense_id,
                "lemma": s.lemma,
                "embedding_ref": s.sense_id,
                "example_sentence_ids": list(s.example_sentence_ids),
                "step_provenance": s.step_provenance,
            }
            for s in sorted(senses, key=lambda s: s.sense_id)
        ],
    }
    dim = int(np.asarray(senses[0].embedding).size) if senses else 1
    write_embedding_file(
        sidecar,
        dim,
        ((s.sense_id, s.embedding) for s in sorted(senses, key=lambda s: s.sense_id)),
    )
    return _dump_canonical(doc, path)


def load_inventory(path) -> SenseInventory:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise StoreError(f"{path}: parse error at byte {exc.pos}: {exc.msg}")
    for fname in ("params", "senses"):
        if fname not in doc:
            raise StoreError(f"{path}: missing required field {fname!r}")
    embeddings: dict[str, np.ndarray] = {}
    if doc.get("embedding_file"):
        sidecar = path.parent / doc["embedding_file"]
        if not sidecar.exists():
            raise StoreError(f"{path}: embedding sidecar {doc['embedding_file']!r} not found")
        embeddings = dict(read_embedding_file(sidecar))
    inventory = SenseInventory(params=PipelineParams.from_dict(doc["params"]))
    for i, row in enumerate(doc["senses"]):
        for fname in ("sense_id", "lemma", "example_sentence_ids"):
            if fname not in row:
                raise StoreError(f"{path}: senses[{i}]: missing field {fname!r}")
        ref = row.get("embedding_ref", row["sense_id"])
        if ref not in embeddings:
            raise StoreError(f"{path}: senses[{i}]: no embedding for ref {ref!r}")
        sense = Sense(
            sense_id=row["sense_id"],
            lemma=row["lemma"],
            embedding=embeddings[ref],
            example_sentence_ids=list(row["example_sentence_ids"]),
            step_provenance=row.get("step_provenance", {}),
        )
        inventory.senses.setdefault(sense.lemma, []).append(sense)
    return inventory
