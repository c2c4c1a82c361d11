import json
from pathlib import Path

import pytest

from autownet.preprocess import (
    PreprocessError,
    PreprocessingRule,
    apply_preprocessing,
    default_rules,
    parse_rules_config,
    rules_config_text,
)

GOLDEN_PATH = Path(__file__).parent / "fixtures" / "preprocess_golden.json"
GOLDEN = json.loads(GOLDEN_PATH.read_text(encoding="utf-8"))


@pytest.mark.parametrize(
    "case", GOLDEN, ids=[repr(c["input"])[:40] for c in GOLDEN]
)
def test_golden_outputs_exact(case):
    assert apply_preprocessing(case["input"]) == case["expected"]


@pytest.mark.parametrize(
    "case", GOLDEN, ids=[repr(c["input"])[:40] for c in GOLDEN]
)
def test_golden_idempotence(case):
    once = apply_preprocessing(case["input"])
    assert apply_preprocessing(once) == once


def test_every_rule_fires_somewhere():
    # each placeholder token (or structural effect) must appear in the corpus
    joined = "\n".join(c["expected"] for c in GOLDEN)
    for token in (
        "XX_EMOJI",
        "XX_URL",
        "XX_EMAIL",
        "XX_USERNAME",
        "XX_HASHTAG",
        "XX_COMMA",
        "XX_SEMICOLON",
        "XX_SEQSAMESYMBOLS",
        "XX_SEQNOTSAMESYMBOLS",
    ):
        assert token in joined, f"no golden exercises {token}"
    assert any("\n" in c["input"] for c in GOLDEN)
    assert any("    " in c["input"] for c in GOLDEN)


def test_golden_corpus_is_large_enough():
    assert len(GOLDEN) >= 25


def test_email_example():
    assert apply_preprocessing("email me at juan@abc.com") == "email me at XX_EMAIL"


def test_no_rule_matches_is_identity():
    assert apply_preprocessing("plain words only") == "plain words only"


def test_comma_hashtag_mention_combination():
    assert (
        apply_preprocessing("kita tayo , bukas #tara @ana")
        == "kita tayo XX_COMMA bukas XX_HASHTAG XX_USERNAME"
    )


def test_rules_apply_in_order():
    # the email rule runs before the bare-URL rule, so the address wins
    out = apply_preprocessing("ka@b.com")
    assert out == "XX_EMAIL"
    # with the email rule removed, the later rules cascade instead:
    # bare_url takes "b.com" ("ka@XX_URL"), then mention takes "@XX_URL"
    rules = [r for r in default_rules() if r.name != "email"]
    assert apply_preprocessing("ka@b.com", rules) == "kaXX_USERNAME"


def test_bad_pattern_raises():
    with pytest.raises(PreprocessError, match="bad pattern"):
        PreprocessingRule("broken", "[unclosed", "X")


def test_rules_config_round_trip():
    rules = default_rules()
    parsed = parse_rules_config(rules_config_text(rules))
    assert [(r.name, r.pattern, r.replacement) for r in parsed] == [
        (r.name, r.pattern, r.replacement) for r in rules
    ]


def test_rules_config_rejects_bad_line():
    with pytest.raises(PreprocessError, match="line 2"):
        parse_rules_config("a\tb\tc\nbad line\n")


def test_custom_rules_are_used():
    rules = [PreprocessingRule("digits", r"\d+", "N")]
    assert apply_preprocessing("abc 123 def 45", rules) == "abc N def N"
