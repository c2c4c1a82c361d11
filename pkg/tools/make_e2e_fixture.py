"""Build the bundled synthetic corpus used by the CLI end-to-end tests.

Three seed words carry deliberate structure:
  - "aso": two repeated sentence templates (one with varying @-mentions that
    preprocessing normalizes away), so its usages collapse to two identical
    embedding groups;
  - "alak" and "serbesa": co-occur in one repeated template, so their sense
    embeddings coincide and the synset stage merges them;
  - "bula" has too few sentences, "sa" is too short, "Maynila" starts
    uppercase: all three must be skipped by the seed policy.
Distractor sentences contain no seed word at all.
"""

import json
from pathlib import Path

SOURCES = ["news", "social", "books", "forums"]


def sentences_for_fixture():
    rows = []
    # aso, template A: identical raw sentences
    for i in range(14):
        rows.append(("ang aso ay tumatahol sa bakuran tuwing umaga", "news"))
    # aso, template B: differing mentions normalize to one text
    for i in range(14):
        rows.append((f"may alaga akong aso sa bahay @user{i:02d}", "social"))
    # alak + serbesa together: one template, repeated
    for i in range(26):
        rows.append(("masarap ang alak at serbesa tuwing handaan", "forums"))
    # bula: only 4 sentences, below the 20-sentence policy floor
    for i in range(4):
        rows.append(("maraming bula ang sabon sa planggana", "books"))
    # sa is everywhere but too short; Maynila appears but is uppercase-initial
    rows.append(("maganda ang tanawin ng Maynila ngayon", "news"))
    rows.append(("bumalik ang mga tao ng Maynila pagkatapos", "news"))
    # distractors with no seed words
    rows.append(("kumain kami ng hapunan kagabi", "books"))
    rows.append(("umulan nang malakas kahapon", "news"))
    rows.append(("nagbasa siya ng libro buong araw", "books"))
    return rows


def main():
    out_dir = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "e2e"
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = sentences_for_fixture()
    by_source: dict[str, list[str]] = {}
    for text, source in rows:
        by_source.setdefault(source, []).append(text)

    docs = []
    per_doc = 12
    for source in SOURCES:
        texts = by_source.get(source, [])
        for ci in range(0, len(texts), per_doc):
            chunk = texts[ci : ci + per_doc]
            docs.append(
                {
                    "doc_id": f"doc{len(docs):03d}",
                    "text": ". ".join(chunk) + ".",
                    "source_type": source,
                    "year": 2018 + len(docs) % 5,
                }
            )

    with open(out_dir / "docs.jsonl", "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc, ensure_ascii=False) + "\n")

    (out_dir / "seeds.txt").write_text(
        "aso\nalak\nserbesa\nbula\nsa\nMaynila\n", encoding="utf-8"
    )

    config = {
        "output_dir": "out",
        "corpus_documents": "docs.jsonl",
        "seed_words": "seeds.txt",
        "mock_dim": 16,
        "mock_seed": 7,
        "synset_distance_threshold": 0.12,
        "wsd_threshold": 0.65,
    }
    (out_dir / "config.json").write_text(
        json.dumps(config, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote {len(docs)} docs to {out_dir}")


if __name__ == "__main__":
    main()
