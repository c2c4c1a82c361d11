"""Regex preprocessing rules applied to raw text before segmentation.

The default rule table replaces emojis, URLs, emails, @-mentions, hashtags,
isolated punctuation, and symbol runs with fixed placeholder tokens, turns
line breaks into periods, and collapses whitespace.  Rules apply top to
bottom, each one globally, so the list order is part of the contract.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class PreprocessError(ValueError):
    """A rule failed to compile or a rules config is malformed."""


@dataclass(frozen=True)
class PreprocessingRule:
    name: str
    pattern: str
    replacement: str
    _compiled: re.Pattern = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        try:
            compiled = re.compile(self.pattern)
        except re.error as exc:
            raise PreprocessError(f"rule {self.name!r}: bad pattern: {exc}") from exc
        object.__setattr__(self, "_compiled", compiled)

    def apply(self, text: str) -> str:
        return self._compiled.sub(self.replacement.replace("\\", "\\\\"), text)


# One row per rule, in application order.
_DEFAULT_RULES = [
    ("emoji", "[\U00010000-\U0010ffff]", "XX_EMOJI"),
    ("line_breaks", r"([\r\n\t\f\v]+( )*)+", "."),
    ("http_url", r"https?:\/\/([\w\-_]+\.)+([\w\-_]+)+(\/[^\s]+)*", "XX_URL"),
    ("email", r"[\SÑñ]+@([\SÑñ]+\.)+[\SÑñ]+", "XX_EMAIL"),
    ("bare_url", r"([\w\-_]+\.)+(com|net|org|co|us|ph|io)(\/[^\s]+)*", "XX_URL"),
    ("mention", r"@[^\s.,!?]+", "XX_USERNAME"),
    ("hashtag", r"#[a-zA-ZÑñ0-9_]+", "XX_HASHTAG"),
    ("single_comma", r"(?<!,),(?!,)", "XX_COMMA"),
    ("single_semicolon", r"(?<!;);(?!;)", "XX_SEMICOLON"),
    ("same_symbol_run", r"(?<!\S)([^a-zA-Z0-9\s])\1+(?!\S)", "XX_SEQSAMESYMBOLS"),
    ("mixed_symbol_run", r"[^a-zA-Z0-9\s]{2,}", "XX_SEQNOTSAMESYMBOLS"),
    ("whitespace", r"\s\s+", " "),
]


def default_rules() -> list[PreprocessingRule]:
    return [PreprocessingRule(n, p, r) for n, p, r in _DEFAULT_RULES]


def apply_preprocessing(raw: str, rules: list[PreprocessingRule] | None = None) -> str:
    """Apply every rule in order, each globally, and return the result."""
    text = raw
    for rule in default_rules() if rules is None else rules:
        text = rule.apply(text)
    return text


def parse_rules_config(text: str) -> list[PreprocessingRule]:
    """Parse a plain-text rules file: one tab-separated name/pattern/replacement per line.

    Blank lines and lines starting with '#' are ignored.
    """
    rules = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip("\n")
        if not stripped.strip() or stripped.lstrip().startswith("#"):
            continue
        parts = stripped.split("\t")
        if len(parts) != 3:
            raise PreprocessError(
                f"line {lineno}: expected 3 tab-separated fields, got {len(parts)}"
            )
        rules.append(PreprocessingRule(*parts))
    return rules


def rules_config_text(rules: list[PreprocessingRule]) -> str:
    """Render rules in the parse_rules_config format (used to emit the defaults)."""
    return "".join(f"{r.name}\t{r.pattern}\t{r.replacement}\n" for r in rules)
