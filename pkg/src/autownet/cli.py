"""Command-line front end: ingest -> embed -> induce -> synsets -> eval -> export.

Every command reads a declarative JSON config (flags override config keys),
writes its outputs under the configured output directory, and prints a
one-line JSON summary.  Exit codes: 0 success, 1 input error, 2 internal
error; errors appear as one JSON line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import cluster, corpus, embeddings, preprocess, senses, store, synsets, wsd


class ConfigError(ValueError):
    """Missing or out-of-domain config value."""


@dataclass
class RunConfig:
    output_dir: Path = Path("out")
    corpus_documents: Path | None = None
    preprocessing_rules: Path | None = None
    seed_words: Path | None = None
    embedding_file: Path | None = None
    mock_dim: int = 16
    mock_seed: int = 0
    pipeline: senses.PipelineParams = field(default_factory=senses.PipelineParams)
    seed_policy: corpus.SeedWordPolicy = field(default_factory=corpus.SeedWordPolicy)
    max_per_source: int = 1000
    synset_distance_threshold: float = 0.12
    wsd_threshold: float = 0.65
    version: str = store.SCHEMA_VERSION
    created_at: str = "1970-01-01T00:00:00Z"
    workers: int = 1

    @classmethod
    def load(cls, path, overrides: dict | None = None) -> "RunConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: parse error at byte {exc.pos}: {exc.msg}")
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
        base = Path(path).parent

        def as_path(key):
            return (base / raw[key]).resolve() if raw.get(key) else None

        cfg = cls(
            output_dir=(base / raw.get("output_dir", "out")).resolve(),
            corpus_documents=as_path("corpus_documents"),
            preprocessing_rules=as_path("preprocessing_rules"),
            seed_words=as_path("seed_words"),
            embedding_file=as_path("embedding_file"),
            mock_dim=int(raw.get("mock_dim", 16)),
            mock_seed=int(raw.get("mock_seed", 0)),
            pipeline=(
                senses.PipelineParams.from_dict(raw["pipeline"])
                if raw.get("pipeline")
                else senses.PipelineParams()
            ),
            seed_policy=corpus.SeedWordPolicy(**raw.get("seed_policy", {})),
            max_per_source=int(raw.get("max_per_source", 1000)),
            synset_distance_threshold=float(raw.get("synset_distance_threshold", 0.12)),
            wsd_threshold=float(raw.get("wsd_threshold", 0.65)),
            version=raw.get("version", store.SCHEMA_VERSION),
            created_at=raw.get("created_at", "1970-01-01T00:00:00Z"),
            workers=int(raw.get("workers", 1)),
        )
        if cfg.mock_dim <= 0:
            raise ConfigError("mock_dim must be positive")
        if not (0.0 <= cfg.synset_distance_threshold <= 2.0):
            raise ConfigError("synset_distance_threshold must be in [0, 2]")
        if not (-1.0 <= cfg.wsd_threshold <= 1.0):
            raise ConfigError("wsd_threshold must be in [-1, 1]")
        return cfg

    def require(self, *keys: str) -> None:
        for key in keys:
            value = getattr(self, key)
            if value is None:
                raise ConfigError(f"config key {key!r} is required for this command")
            if isinstance(value, Path) and key != "output_dir" and not value.exists():
                raise ConfigError(f"config key {key!r}: path does not exist: {value}")

    def out(self, name: str) -> Path:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        return self.output_dir / name


def _rules(cfg: RunConfig):
    if cfg.preprocessing_rules is None:
        return None
    return preprocess.parse_rules_config(
        cfg.preprocessing_rules.read_text(encoding="utf-8")
    )


def _load_corpus(cfg: RunConfig) -> corpus.CorpusStore:
    path = cfg.out("sentences.jsonl")
    if not path.exists():
        raise ConfigError(f"sentence store not found at {path}; run ingest first")
    return corpus.load_sentences_jsonl(path)


def _load_embeddings(cfg: RunConfig) -> embeddings.EmbeddingStore:
    path = cfg.out("embeddings.emb")
    if not path.exists():
        raise ConfigError(f"embedding store not found at {path}; run embed-mock or embed-import first")
    est = embeddings.EmbeddingStore()
    est.import_file(path)
    return est


def cmd_ingest(cfg: RunConfig) -> dict:
    cfg.require("corpus_documents")
    cstore = corpus.CorpusStore()
    docs = corpus.load_documents_jsonl(cfg.corpus_documents)
    rules = _rules(cfg)
    for doc in docs:
        cstore.ingest_document(doc, rules)
    count = corpus.export_sentences_jsonl(cstore, cfg.out("sentences.jsonl"))
    stats = corpus.corpus_stats(cstore)
    cfg.out("corpus_stats.json").write_text(
        json.dumps(stats, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    return {"command": "ingest", "documents": len(docs), "sentences": count}


def cmd_embed_mock(cfg: RunConfig) -> dict:
    cstore = _load_corpus(cfg)
    records = cstore.records()
    embeddings.write_embedding_file(
        cfg.out("embeddings.emb"),
        cfg.mock_dim,
        (
            (r.sentence_id, embeddings.mock_embed(r.text, cfg.mock_dim, cfg.mock_seed))
            for r in records
        ),
    )
    return {"command": "embed-mock", "embedded": len(records), "dim": cfg.mock_dim}


def cmd_embed_import(cfg: RunConfig) -> dict:
    cfg.require("embedding_file")
    est = embeddings.EmbeddingStore()
    count = est.import_file(cfg.embedding_file)
    est.export_file(cfg.out("embeddings.emb"))
    return {"command": "embed-import", "imported": count, "dim": est.dim}


def cmd_induce(cfg: RunConfig) -> dict:
    cfg.require("seed_words")
    cstore = _load_corpus(cfg)
    est = _load_embeddings(cfg)
    words = [
        w.strip()
        for w in cfg.seed_words.read_text(encoding="utf-8").splitlines()
        if w.strip()
    ]
    inventory, skips = senses.build_sense_inventory(
        words, cstore, est, cfg.pipeline, cfg.seed_policy, cfg.max_per_source
    )
    store.write_inventory(inventory, cfg.out("inventory.json"))
    senses.write_skip_report(skips, cfg.out("skip_report.jsonl"))
    senses.write_distribution_csv(
        senses.sense_distribution(inventory), cfg.out("sense_distribution.csv")
    )
    return {
        "command": "induce",
        "seed_words": len(words),
        "induced_lemmas": len(inventory.senses),
        "senses": inventory.sense_count(),
        "skipped": len(skips),
    }


def cmd_synsets(cfg: RunConfig) -> dict:
    inventory = store.load_inventory(cfg.out("inventory.json"))
    merge_log: list[cluster.MergeEvent] = []
    induced = synsets.induce_synsets(
        inventory, cfg.synset_distance_threshold, merge_log
    )
    synsets.write_synsets_json(induced, cfg.out("synsets.json"))
    with open(cfg.out("synset_merge_log.jsonl"), "w", encoding="utf-8") as fh:
        for event in merge_log:
            fh.write(event.to_json() + "\n")
    report = synsets.synset_size_report(induced)
    cfg.out("synset_size_report.json").write_text(
        json.dumps(report, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    synsets.write_size_csv(report["histogram"], cfg.out("synset_sizes.csv"))
    return {
        "command": "synsets",
        "senses": inventory.sense_count(),
        "synsets": len(induced),
        "merges": len(merge_log),
    }


def cmd_eval_wsd(cfg: RunConfig, manifest: str) -> dict:
    inventory = store.load_inventory(cfg.out("inventory.json"))
    est = _load_embeddings(cfg)
    records = wsd.load_evaluation_manifest(manifest)
    report = wsd.evaluate_sense_validity(records, inventory, est, cfg.wsd_threshold)
    cfg.out("wsd_validity.json").write_text(
        json.dumps(report.to_dict(), ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    matrices = []
    for lemma in sorted({r.lemma for r in records}):
        if inventory.senses_for(lemma) and any(
            r.lemma == lemma and r.sentence_embedding_id in est for r in records
        ):
            usable = [r for r in records if r.sentence_embedding_id in est]
            matrices.append(
                wsd.sense_match_matrix(lemma, usable, inventory, est, cfg.wsd_threshold)
            )
    wsd.write_heatmap_csv(matrices, cfg.out("wsd_heatmap.csv"))
    return {
        "command": "eval-wsd",
        "records": len(records),
        "valid": report.valid_senses,
        "total": report.total_senses,
        "fraction": report.valid_fraction,
    }


def cmd_eval_synsets(cfg: RunConfig, reference: str) -> dict:
    with open(cfg.out("synsets.json"), "r", encoding="utf-8") as fh:
        rows = json.load(fh)
    induced = [synsets.Synset(r["synset_id"], r["sense_ids"], r["lemmas"]) for r in rows]
    refs = synsets.load_reference_synsets(reference)
    results, distribution = synsets.compare_synsets(induced, refs)
    cfg.out("synset_eval.json").write_text(
        json.dumps(results, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    synsets.write_jaccard_csv(distribution, cfg.out("jaccard_distribution.csv"))
    perfect = sum(1 for r in results if r["best_jaccard"] == 1.0)
    return {
        "command": "eval-synsets",
        "synsets": len(induced),
        "references": len(refs),
        "jaccard_1.0": perfect,
    }


def cmd_export(cfg: RunConfig) -> dict:
    inventory = store.load_inventory(cfg.out("inventory.json"))
    with open(cfg.out("synsets.json"), "r", encoding="utf-8") as fh:
        rows = json.load(fh)
    induced = [synsets.Synset(r["synset_id"], r["sense_ids"], r["lemmas"]) for r in rows]
    digest = ""
    sentences = cfg.out("sentences.jsonl")
    if sentences.exists():
        digest = corpus.corpus_digest(corpus.load_sentences_jsonl(sentences))
    resource = store.WordNetResource(
        version=cfg.version,
        created_at=cfg.created_at,
        params={
            "pipeline": inventory.params.to_dict(),
            "synset_distance_threshold": cfg.synset_distance_threshold,
            "wsd_threshold": cfg.wsd_threshold,
        },
        senses=inventory.all_senses(),
        synsets=induced,
        source_corpus_digest=digest,
    )
    written = store.export_wordnet(resource, cfg.out("wordnet.json"))
    return {
        "command": "export",
        "senses": len(resource.senses),
        "synsets": len(resource.synsets),
        "bytes": written,
    }


def cmd_stats(path: str) -> dict:
    resource = store.load_wordnet(path)
    stats = store.wordnet_stats(resource)
    return {"command": "stats", **stats}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="autownet",
        description="Build a wordnet from a corpus and sentence embeddings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, needs_config=True):
        p = sub.add_parser(name, help=help_text)
        if needs_config:
            p.add_argument("--config", required=True, help="path to the JSON run config")
            p.add_argument("--output-dir", default=None, help="override output_dir")
        return p

    add("ingest", "build the sentence store from raw documents")
    add("embed-mock", "embed every sentence with the deterministic mock embedder")
    add("embed-import", "import an externally produced embedding file")
    add("induce", "induce the sense inventory from seed words")
    add("synsets", "cluster the sense inventory into synsets")
    p = add("eval-wsd", "validate senses against an evaluation manifest")
    p.add_argument("--manifest", required=True, help="evaluation manifest (JSON lines)")
    p = add("eval-synsets", "score synsets against a reference wordnet")
    p.add_argument("--reference", required=True, help="reference synsets (JSON)")
    add("export", "assemble and write the wordnet resource")
    p = sub.add_parser("stats", help="print statistics for an exported wordnet")
    p.add_argument("path", help="path to wordnet.json")
    return parser


_INPUT_ERRORS = (
    ConfigError,
    corpus.CorpusError,
    embeddings.EmbeddingError,
    cluster.ClusteringError,
    synsets.SynsetError,
    wsd.WSDError,
    store.StoreError,
    preprocess.PreprocessError,
    FileNotFoundError,
    ValueError,
)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "stats":
            summary = cmd_stats(args.path)
        else:
            cfg = RunConfig.load(args.config, {"output_dir": args.output_dir})
            if args.command == "ingest":
                summary = cmd_ingest(cfg)
            elif args.command == "embed-mock":
                summary = cmd_embed_mock(cfg)
            elif args.command == "embed-import":
                summary = cmd_embed_import(cfg)
            elif args.command == "induce":
                summary = cmd_induce(cfg)
            elif args.command == "synsets":
                summary = cmd_synsets(cfg)
            elif args.command == "eval-wsd":
                summary = cmd_eval_wsd(cfg, args.manifest)
            elif args.command == "eval-synsets":
                summary = cmd_eval_synsets(cfg, args.reference)
            elif args.command == "export":
                summary = cmd_export(cfg)
            else:  # pragma: no cover - argparse enforces the choices
                raise ConfigError(f"unknown command {args.command!r}")
    except _INPUT_ERRORS as exc:
        print(
            json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
            file=sys.stderr,
        )
        return 1
    except Exception as exc:  # internal error
        print(
            json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
            file=sys.stderr,
        )
        return 2
    print(json.dumps(summary, ensure_ascii=False, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
