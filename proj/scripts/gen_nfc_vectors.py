#!/usr/bin/env python3
"""Regenerates tests/data/nfc_vectors.tsv: input<TAB>nfc pairs used to check
the library's NFC implementation against an independent source.

Inputs are escaped as \\uXXXX / \\UXXXXXXXX so the file stays ASCII and diffable.

Usage: python3 scripts/gen_nfc_vectors.py > tests/data/nfc_vectors.tsv
"""

import random
import sys
import unicodedata


def esc(s: str) -> str:
    out = []
    for ch in s:
        cp = ord(ch)
        if 0x20 <= cp < 0x7F and ch not in "\\\t":
            out.append(ch)
        elif cp <= 0xFFFF:
            out.append(f"\\u{cp:04X}")
        else:
            out.append(f"\\U{cp:08X}")
    return "".join(out)


HAND_PICKED = [
    "",
    "a",
    "Caeſar",                      # Caeſar
    "Cæſar",                  # Cæſar
    "Celtæ Ætius Œuvre",
    "ﬀ ﬁ ﬂ ﬃ ﬄ ﬅ ﬆ",  # ligatures must survive NFC
    "é",                          # e + combining acute -> é
    "é́",
    "ą́",                    # ogonek + acute (ccc ordering)
    "ą́",
    "q̣̇",                    # classic reordering example
    "q̣̇",
    "Å Å Å",            # Å three ways
    "ḍ̇ ḍ̇ ḍ̇",
    "क़",                           # composition exclusion (QA)
    "क़",
    "གྷ",                           # exclusion via decomposition
    "ૉ",
    "가 힣",                    # Hangul syllables
    "가 각",  # Hangul jamo -> syllables
    "Ǻ",
    "é̄",
    "ṩ ṩ ṩ",
    "ἄ",               # Greek
    "ἄ",
    "İ i̇",                   # dotted I decomposition target
    "long ſ and ﬁne",
    "—–‒−",         # dashes are not NFC-affected
    "   　",         # exotic spaces
]


def random_string(rng: random.Random) -> str:
    pools = [
        list(range(0x20, 0x7F)),
        [0x017F, 0xFB00, 0xFB01, 0xFB02, 0xFB03, 0xFB04, 0xFB05, 0xFB06, 0xE6, 0xC6, 0x153, 0x152],
        [0x300, 0x301, 0x304, 0x307, 0x308, 0x30A, 0x323, 0x328, 0x342, 0x345],
        [0xE0, 0xE8, 0xE9, 0xEA, 0xF1, 0xF6, 0xFC, 0xC5, 0x1E0B, 0x1E63, 0x212B, 0x1F04],
        [0x915, 0x93C, 0x958, 0xF43, 0x4E00, 0x3042],
        [0x1100, 0x1161, 0x11A8, 0xAC00, 0xAC01, 0xD7A3],
        [0x1D11E, 0x10400],
    ]
    n = rng.randint(0, 12)
    chars = []
    for _ in range(n):
        pool = rng.choice(pools)
        cp = rng.choice(pool)
        if 0xD800 <= cp <= 0xDFFF:
            continue
        chars.append(chr(cp))
    return "".join(chars)


def main() -> None:
    rng = random.Random(20260810)
    cases = list(HAND_PICKED)
    for _ in range(600):
        cases.append(random_string(rng))
    sys.stdout.write("# input<TAB>nfc, escaped; generated by scripts/gen_nfc_vectors.py\n")
    for s in cases:
        sys.stdout.write(f"{esc(s)}\t{esc(unicodedata.normalize('NFC', s))}\n")


if __name__ == "__main__":
    main()
