"""Generate the frozen preprocessing golden file.

Run once, inspect every expected output by eye, commit the JSON.  The test
suite replays the inputs and requires byte-exact matches, so regenerating
this file is a contract change.
"""

import json
from pathlib import Path

from autownet.preprocess import apply_preprocessing

INPUTS = [
    # emoji
    "nakakatawa \U0001F602 talaga",
    "\U0001F525 deals sa shop.ph \U0001F525",
    "sana all \U0001F60D\U0001F60D",
    # line breaks / feeds / tabs
    "una\npangalawa",
    "kabanata isa\r\n  kabanata dalawa",
    "col1\tcol2",
    "a\n  \n b",
    "linya\n",
    # http/https URLs
    "tingnan https://example.com/path?x=1 ngayon",
    "balita dito http://news.example-site.com/article/123",
    "tingnan https://x.com/a, sige",
    # emails
    "email me at juan@abc.com",
    "sulat kay maria.santos+tag@mail.co.uk bukas",
    # bare URLs
    "puntahan ang example.com para sa detalye",
    "nasa balita.ph/latest ang ulat",
    "bisitahin ang site.io ngayon",
    # mentions
    "salamat @juan_dc!",
    "@admin ano po ito",
    "kita tayo , bukas #tara @ana",
    # hashtags
    "#WalangPasok bukas daw",
    "uso ang #tara2025 ngayon",
    "#señorita vibes",
    # single comma / semicolon
    "isa, dalawa, tatlo",
    "isa , dalawa",
    "1,000 pesos",
    "una; pangalawa",
    "a;; b",
    # symbol runs
    "grabe !!!",
    "ano ??? ba",
    "--- simula ---",
    "ano ?! talaga",
    "sige... tara",
    "sige ... tara",
    "(sikreto)",
    # whitespace collapse
    "sobrang    daming    puwang",
    "  gilid  ",
    # no-op
    "plain words only",
    "Kumain ako.",
    "",
]


def main():
    golden = [{"input": text, "expected": apply_preprocessing(text)} for text in INPUTS]
    out = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "preprocess_golden.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(
        json.dumps(golden, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    for row in golden:
        print(f"{row['input']!r:60} -> {row['expected']!r}")
    print(f"\n{len(golden)} cases written to {out}")


if __name__ == "__main__":
    main()
