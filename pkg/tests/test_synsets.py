import json

import numpy as np
import pytest

from autownet.cluster import MergeEvent
from autownet.senses import Sense, SenseInventory
from autownet.synsets import (
    ReferenceSynset,
    Synset,
    SynsetError,
    compare_synsets,
    induce_synsets,
    jaccard,
    load_reference_synsets,
    synset_size_report,
    write_jaccard_csv,
    write_synsets_json,
)


def sense(sense_id, lemma, vec):
    return Sense(sense_id, lemma, np.asarray(vec, dtype=float), [f"{sense_id}:ex"])


def inventory_of(*senses):
    inv = SenseInventory()
    for s in senses:
        inv.senses.setdefault(s.lemma, []).append(s)
    return inv


def rotate(base, angle, axis):
    v = np.array(base, dtype=float)
    v[0], v[axis] = np.cos(angle), np.sin(angle)
    return v / np.linalg.norm(v)


def test_identical_embeddings_share_synset():
    inv = inventory_of(
        sense("alak%1", "alak", [1.0, 0.0, 0.0]),
        sense("serbesa%1", "serbesa", [1.0, 0.0, 0.0]),
    )
    synsets = induce_synsets(inv)
    assert len(synsets) == 1
    assert synsets[0].sense_ids == ["alak%1", "serbesa%1"]
    assert synsets[0].lemmas == ["alak", "serbesa"]


def test_distant_senses_stay_singletons():
    # cosine distance 0.5 means similarity 0.5: far above the 0.12 threshold
    inv = inventory_of(
        sense("a%1", "a", [1.0, 0.0]),
        sense("b%1", "b", [0.5, np.sqrt(1 - 0.25)]),
    )
    synsets = induce_synsets(inv)
    assert len(synsets) == 2
    assert all(len(s.sense_ids) == 1 for s in synsets)


def test_planted_synonym_pair_among_distractors():
    rng = np.random.Generator(np.random.PCG64(3))
    base = rng.standard_normal(8)
    base /= np.linalg.norm(base)
    # pair at cosine distance about 0.05
    partner = base + 0.32 * rng.standard_normal(8)
    partner /= np.linalg.norm(partner)
    while not 0.9 < float(base @ partner) < 0.975:
        partner = base + 0.05 * rng.standard_normal(8)
        partner /= np.linalg.norm(partner)
    senses = [sense("alak%1", "alak", base), sense("serbesa%1", "serbesa", partner)]
    q, _ = np.linalg.qr(rng.standard_normal((8, 6)))
    for i in range(5):
        senses.append(sense(f"iba{i}%1", f"iba{i}", q[:, i + 1]))
    synsets = induce_synsets(inventory_of(*senses))
    sizes = sorted(len(s.sense_ids) for s in synsets)
    assert sizes == [1, 1, 1, 1, 1, 2]
    pair = next(s for s in synsets if len(s.sense_ids) == 2)
    assert pair.lemmas == ["alak", "serbesa"]


def test_same_lemma_senses_contribute_one_lemma():
    inv = inventory_of(
        sense("kasa%1", "kasa", [1.0, 0.0]),
        sense("kasa%2", "kasa", [1.0, 0.0]),
    )
    synsets = induce_synsets(inv)
    assert len(synsets) == 1
    assert synsets[0].lemmas == ["kasa"]
    assert len(synsets[0].sense_ids) == 2


def test_synsets_partition_inventory():
    rng = np.random.Generator(np.random.PCG64(7))
    senses = []
    for i in range(12):
        v = rng.standard_normal(6)
        senses.append(sense(f"w{i}%1", f"w{i}", v / np.linalg.norm(v)))
    synsets = induce_synsets(inventory_of(*senses))
    seen = [sid for s in synsets for sid in s.sense_ids]
    assert sorted(seen) == sorted(s.sense_id for s in senses)
    assert len(seen) == len(set(seen))


def test_merge_log_distances_within_threshold():
    inv = inventory_of(
        sense("a%1", "a", [1.0, 0.0, 0.0]),
        sense("b%1", "b", [1.0, 0.01, 0.0]),
        sense("c%1", "c", [1.0, 0.0, 0.01]),
    )
    log: list[MergeEvent] = []
    induce_synsets(inv, 0.12, merge_log=log)
    assert log
    assert all(e.distance <= 0.12 for e in log)


def test_empty_inventory_rejected():
    with pytest.raises(SynsetError, match="empty"):
        induce_synsets(SenseInventory())


def test_jaccard_identical():
    assert jaccard({"beer", "chips"}, {"beer", "chips"}) == 1.0


def test_jaccard_one_third():
    assert jaccard({"beer", "chips"}, {"beer", "pizza"}) == pytest.approx(1 / 3, abs=1e-9)


def test_jaccard_disjoint():
    assert jaccard({"a"}, {"b"}) == 0.0


def test_jaccard_identity_symmetry_range():
    rng = np.random.Generator(np.random.PCG64(1))
    pool = [f"w{i}" for i in range(10)]
    for _ in range(100):
        a = {w for w in pool if rng.random() < 0.5}
        b = {w for w in pool if rng.random() < 0.5}
        if not a and not b:
            continue
        assert jaccard(a, b) == jaccard(b, a)
        assert 0.0 <= jaccard(a, b) <= 1.0
        if a:
            assert jaccard(a, a) == 1.0


def test_jaccard_both_empty_rejected():
    with pytest.raises(SynsetError):
        jaccard(set(), set())


def refs(*pairs):
    return [ReferenceSynset(rid, frozenset(ls)) for rid, ls in pairs]


def test_compare_exact_match_scores_one():
    induced = [Synset("s1", ["a%1", "b%1"], ["a", "b"])]
    results, dist = compare_synsets(induced, refs(("r1", {"a", "b"}), ("r2", {"c"})))
    assert results[0]["best_ref_id"] == "r1"
    assert results[0]["best_jaccard"] == 1.0
    assert dist == {1.0: 1}


def test_compare_subset_scores_third():
    induced = [Synset("s1", ["a%1", "b%1", "c%1"], ["a", "b", "c"])]
    results, _ = compare_synsets(induced, refs(("r1", {"a"})))
    assert results[0]["best_jaccard"] == pytest.approx(1 / 3, abs=1e-9)


def test_compare_single_reference_degenerate():
    induced = [
        Synset("s1", ["a%1"], ["a"]),
        Synset("s2", ["b%1"], ["b"]),
    ]
    results, dist = compare_synsets(induced, refs(("r1", {"a"})))
    assert [r["best_ref_id"] for r in results] == ["r1", "r1"]
    assert dist == {0.0: 1, 1.0: 1}


def test_compare_tie_goes_to_smallest_ref_id():
    induced = [Synset("s1", ["a%1"], ["a"])]
    results, _ = compare_synsets(
        induced, refs(("r9", {"a", "x"}), ("r2", {"a", "y"}))
    )
    assert results[0]["best_ref_id"] == "r2"


def test_compare_adding_exact_reference_never_decreases_best():
    induced = [Synset("s1", ["a%1", "b%1"], ["a", "b"])]
    base_refs = refs(("r1", {"a", "z"}))
    before, _ = compare_synsets(induced, base_refs)
    after, _ = compare_synsets(induced, base_refs + refs(("r2", {"a", "b"})))
    assert after[0]["best_jaccard"] >= before[0]["best_jaccard"]
    assert after[0]["best_jaccard"] == 1.0


def test_compare_requires_nonempty():
    with pytest.raises(SynsetError):
        compare_synsets([], refs(("r", {"a"})))
    with pytest.raises(SynsetError):
        compare_synsets([Synset("s", ["a%1"], ["a"])], [])


def test_size_report_flags_ten_or_more():
    small = Synset("s1", ["a%1"], ["a"])
    big_lemmas = [f"w{i}" for i in range(10)]
    big = Synset("s2", [f"w{i}%1" for i in range(10)], big_lemmas)
    report = synset_size_report([small, big])
    assert report["histogram"] == {1: 1, 10: 1}
    assert len(report["flagged"]) == 1
    assert report["flagged"][0]["synset_id"] == "s2"
    assert report["flagged"][0]["lemmas"] == big_lemmas


def test_size_report_all_singletons_unflagged():
    synsets = [Synset(f"s{i}", [f"w{i}%1"], [f"w{i}"]) for i in range(4)]
    report = synset_size_report(synsets)
    assert report["flagged"] == []
    assert sum(report["histogram"].values()) == len(synsets)


def test_size_report_totals_property():
    rng = np.random.Generator(np.random.PCG64(2))
    for _ in range(30):
        synsets = []
        for i in range(int(rng.integers(0, 15))):
            n = int(rng.integers(1, 13))
            synsets.append(
                Synset(f"s{i}", [f"w{i}.{j}%1" for j in range(n)],
                       [f"w{i}.{j}" for j in range(n)])
            )
        report = synset_size_report(synsets)
        assert sum(report["histogram"].values()) == len(synsets)


def test_reference_json_round_trip(tmp_path):
    path = tmp_path / "reference.json"
    path.write_text(
        json.dumps([{"ref_id": "r1", "lemmas": ["a", "b"]}]), encoding="utf-8"
    )
    loaded = load_reference_synsets(path)
    assert loaded == [ReferenceSynset("r1", frozenset({"a", "b"}))]


def test_outputs_csv_and_json(tmp_path):
    synsets = [Synset("s1", ["a%1"], ["a"])]
    write_synsets_json(synsets, tmp_path / "synsets.json")
    rows = json.loads((tmp_path / "synsets.json").read_text())
    assert rows == [{"synset_id": "s1", "sense_ids": ["a%1"], "lemmas": ["a"]}]
    write_jaccard_csv({0.33: 2, 1.0: 1}, tmp_path / "dist.csv")
    assert (tmp_path / "dist.csv").read_text() == (
        "jaccard,synset_count\n0.33,2\n1.00,1\n"
    )
