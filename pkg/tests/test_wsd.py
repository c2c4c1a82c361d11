import numpy as np
import pytest

from autownet.embeddings import mock_embed
from autownet.senses import Sense, SenseInventory
from autownet.wsd import (
    EvaluationRecord,
    WSDError,
    disambiguate,
    evaluate_sense_validity,
    load_evaluation_manifest,
    sense_match_matrix,
    write_heatmap_csv,
)


def sense(sense_id, lemma, vec):
    return Sense(sense_id, lemma, np.asarray(vec, dtype=float), [f"{sense_id}:ex"])


def inventory_of(*senses):
    inv = SenseInventory()
    for s in senses:
        inv.senses.setdefault(s.lemma, []).append(s)
    return inv


def unit(*values):
    v = np.asarray(values, dtype=float)
    return v / np.linalg.norm(v)


def test_exact_match_scores_one():
    s = sense("aso%1", "aso", unit(1, 0, 0))
    result = disambiguate(unit(1, 0, 0), [s])
    assert result.chosen_sense_id == "aso%1"
    assert result.score == pytest.approx(1.0, abs=1e-12)


def test_below_threshold_chooses_nothing_keeps_score():
    s1 = sense("aso%1", "aso", unit(1, 0, 0))
    s2 = sense("aso%2", "aso", unit(0, 1, 0))
    result = disambiguate(unit(1, 1, 6), [s1, s2], threshold=0.65)
    assert result.chosen_sense_id is None
    assert result.score < 0.65
    assert result.threshold_used == 0.65


def test_argmax_of_two_senses():
    # similarities about 0.70 and 0.90: the higher one wins
    s1 = sense("w%1", "w", unit(1, 0))
    s2 = sense("w%2", "w", unit(np.cos(0.45), np.sin(0.45)))
    query = unit(np.cos(0.795), np.sin(0.795))  # 0.345 rad from s2, 0.795 from s1
    result = disambiguate(query, [s1, s2])
    assert result.chosen_sense_id == "w%2"
    assert result.score == pytest.approx(np.cos(0.345), abs=1e-9)


def test_tie_breaks_to_smallest_sense_id():
    v = unit(1, 0)
    result = disambiguate(v, [sense("w%2", "w", v), sense("w%1", "w", v)])
    assert result.chosen_sense_id == "w%1"


def test_order_independent():
    senses = [sense(f"w%{i}", "w", unit(np.cos(a), np.sin(a)))
              for i, a in enumerate([0.0, 0.3, 0.6], start=1)]
    query = unit(np.cos(0.28), np.sin(0.28))
    forward = disambiguate(query, senses)
    backward = disambiguate(query, list(reversed(senses)))
    assert forward.chosen_sense_id == backward.chosen_sense_id
    assert forward.score == backward.score


def test_empty_senses_rejected():
    with pytest.raises(WSDError):
        disambiguate(unit(1, 0), [])


def records_for(lemma, ref, ids):
    return [
        EvaluationRecord(lemma, ref, f"sentence {i}", sid) for i, sid in enumerate(ids)
    ]


def test_validity_direct_count():
    sx = sense("w%1", "w", unit(1, 0))
    sy = sense("w%2", "w", unit(0, 1))
    inv = inventory_of(sx, sy)
    embeddings = {"e1": unit(1, 0.01), "e2": unit(1, -0.01)}
    report = evaluate_sense_validity(
        records_for("w", "ref.1", ["e1", "e2"]), inv, embeddings
    )
    assert report.valid_senses == 1
    assert report.total_senses == 2
    assert report.per_sense_usage == {"w%1": 2, "w%2": 0}
    assert report.valid_fraction == 0.5


def test_validity_zero_records():
    report = evaluate_sense_validity([], inventory_of(sense("w%1", "w", unit(1, 0))), {})
    assert report.valid_senses == 0
    assert report.total_senses == 0
    assert report.valid_fraction == 0.0


def test_validity_planted_hundred_percent():
    # each evaluation sentence copies one induced sense's direction
    rng = np.random.Generator(np.random.PCG64(5))
    q, _ = np.linalg.qr(rng.standard_normal((8, 4)))
    senses = [sense(f"w%{i+1}", "w", q[:, i]) for i in range(4)]
    inv = inventory_of(*senses)
    embeddings, records = {}, []
    for i in range(4):
        embeddings[f"e{i}"] = q[:, i].copy()
        records.append(EvaluationRecord("w", f"pwn.{i}", f"text {i}", f"e{i}"))
    report = evaluate_sense_validity(records, inv, embeddings)
    assert report.valid_senses == report.total_senses == 4
    assert report.valid_fraction == 1.0


def test_validity_skips_unknown_lemma_and_missing_embedding():
    inv = inventory_of(sense("w%1", "w", unit(1, 0)))
    records = [
        EvaluationRecord("wala", "r1", "t", "e1"),
        EvaluationRecord("w", "r2", "t", "missing"),
        EvaluationRecord("w", "r3", "t", "e2"),
    ]
    report = evaluate_sense_validity(records, inv, {"e2": unit(1, 0)})
    assert len(report.skipped) == 2
    reasons = {row["reason"] for row in report.skipped}
    assert any("no induced senses" in r for r in reasons)
    assert any("missing embedding" in r for r in reasons)
    assert report.valid_senses == 1


def test_validity_monotone_in_threshold():
    rng = np.random.Generator(np.random.PCG64(9))
    q, _ = np.linalg.qr(rng.standard_normal((8, 3)))
    senses = [sense(f"w%{i+1}", "w", q[:, i]) for i in range(3)]
    inv = inventory_of(*senses)
    embeddings, records = {}, []
    for i in range(12):
        target = q[:, i % 3]
        v = target + 0.4 * rng.standard_normal(8)
        embeddings[f"e{i}"] = v / np.linalg.norm(v)
        records.append(EvaluationRecord("w", f"r{i % 3}", f"t{i}", f"e{i}"))
    counts = [
        evaluate_sense_validity(records, inv, embeddings, t).valid_senses
        for t in (0.5, 0.65, 0.8)
    ]
    assert counts[0] >= counts[1] >= counts[2]


def test_match_matrix_full_mass_on_one_sense():
    inv = inventory_of(sense("w%1", "w", unit(1, 0)), sense("w%2", "w", unit(0, 1)))
    embeddings = {"e0": unit(1, 0.02), "e1": unit(1, -0.02)}
    records = records_for("w", "pwn.a", ["e0", "e1"])
    matrix = sense_match_matrix("w", records, inv, embeddings)
    assert matrix.ref_sense_ids == ["pwn.a"]
    assert matrix.column_ids == ["w%1", "w%2", "XX"]
    assert matrix.values[0].tolist() == [1.0, 0.0, 0.0]


def test_match_matrix_unmatched_goes_to_xx():
    inv = inventory_of(sense("w%1", "w", unit(1, 0, 0)))
    embeddings = {"e0": unit(0, 1, 0)}
    matrix = sense_match_matrix("w", records_for("w", "pwn.a", ["e0"]), inv, embeddings)
    assert matrix.values[0].tolist() == [0.0, 1.0]
    assert matrix.column_ids[-1] == "XX"


def test_match_matrix_split_half_half():
    inv = inventory_of(sense("w%1", "w", unit(1, 0)), sense("w%2", "w", unit(0, 1)))
    embeddings = {"e0": unit(1, 0.05), "e1": unit(0.05, 1)}
    matrix = sense_match_matrix("w", records_for("w", "pwn.a", ["e0", "e1"]), inv, embeddings)
    assert matrix.values[0].tolist() == [0.5, 0.5, 0.0]


def test_match_matrix_rows_sum_to_one():
    rng = np.random.Generator(np.random.PCG64(11))
    q, _ = np.linalg.qr(rng.standard_normal((6, 3)))
    inv = inventory_of(*(sense(f"w%{i+1}", "w", q[:, i]) for i in range(3)))
    embeddings, records = {}, []
    for i in range(20):
        v = rng.standard_normal(6)
        embeddings[f"e{i}"] = v / np.linalg.norm(v)
        records.append(EvaluationRecord("w", f"pwn.{i % 4}", f"t{i}", f"e{i}"))
    matrix = sense_match_matrix("w", records, inv, embeddings)
    sums = matrix.values.sum(axis=1)
    assert np.allclose(sums, 1.0, atol=1e-9)


def test_manifest_round_trip(tmp_path):
    path = tmp_path / "manifest.jsonl"
    path.write_text(
        '{"lemma": "w", "ref_sense_id": "r1", "sentence_text": "ayos", '
        '"sentence_embedding_id": "e1"}\n',
        encoding="utf-8",
    )
    records = load_evaluation_manifest(path)
    assert records == [EvaluationRecord("w", "r1", "ayos", "e1")]


def test_manifest_rejects_empty_text(tmp_path):
    path = tmp_path / "manifest.jsonl"
    path.write_text(
        '{"lemma": "w", "ref_sense_id": "r1", "sentence_text": "", '
        '"sentence_embedding_id": "e1"}\n',
        encoding="utf-8",
    )
    with pytest.raises(WSDError):
        load_evaluation_manifest(path)


def test_heatmap_csv(tmp_path):
    inv = inventory_of(sense("w%1", "w", unit(1, 0)))
    embeddings = {"e0": unit(1, 0)}
    matrix = sense_match_matrix("w", records_for("w", "pwn.a", ["e0"]), inv, embeddings)
    path = tmp_path / "heatmap.csv"
    write_heatmap_csv([matrix], path)
    lines = path.read_text().splitlines()
    assert lines[0] == "ref_sense_id,induced_sense_id,fraction"
    assert lines[1] == "pwn.a,w%1,1.0"
