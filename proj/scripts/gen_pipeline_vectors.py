#!/usr/bin/env python3
"""Regenerates tests/data/pipeline_vectors.tsv.

Each row holds a (reference, hypothesis) pair plus independently computed
expectations for the full pipeline: normalized forms, character edit distance
and token edit distance. The normalization and the distance computation here
are written from the documented behavior, not ported from the C++ sources, so
the frozen rows act as a cross-implementation oracle.

Columns (all text escaped as \\uXXXX / \\UXXXXXXXX):
  raw_ref  raw_hyp  norm_ref  norm_hyp  char_distance  word_distance

Usage: python3 scripts/gen_pipeline_vectors.py > tests/data/pipeline_vectors.tsv
"""

import random
import sys
import unicodedata

WHITE_SPACE = {chr(c) for c in (
    [0x0009, 0x000A, 0x000B, 0x000C, 0x000D, 0x0020, 0x0085, 0x00A0, 0x1680]
    + list(range(0x2000, 0x200B))
    + [0x2028, 0x2029, 0x202F, 0x205F, 0x3000]
)}
ZERO_WIDTH = {chr(c) for c in [0x200B, 0xFEFF, 0x2060]}

LONG_S = chr(0x017F)
AE = chr(0x00E6)
AE_CAP = chr(0x00C6)
FI = chr(0xFB01)
FF = chr(0xFB00)
EM_DASH = chr(0x2014)
EN_DASH = chr(0x2013)
MINUS = chr(0x2212)
NBSP = chr(0x00A0)
EM_SPACE = chr(0x2003)
ZWSP = chr(0x200B)
ACUTE = chr(0x0301)
E_ACUTE = chr(0x00E9)


def is_dash(ch: str) -> bool:
    return unicodedata.category(ch) == "Pd" or ch == MINUS


def normalize(s: str) -> str:
    mapped = []
    for ch in s:
        if ch in ZERO_WIDTH:
            continue
        if ch in WHITE_SPACE:
            mapped.append(" ")
        elif is_dash(ch):
            mapped.append("-")
        else:
            mapped.append(ch)
    composed = unicodedata.normalize("NFC", "".join(mapped))
    out = []
    for ch in composed:
        if out and ch == out[-1] and ch in " -":
            continue
        out.append(ch)
    return "".join(out).strip(" ")


def edit_distance(a, b) -> int:
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i] + [0] * len(b)
        for j, cb in enumerate(b, 1):
            cur[j] = min(prev[j - 1] + (ca != cb), prev[j] + 1, cur[j - 1] + 1)
        prev = cur
    return prev[len(b)]


def esc(s: str) -> str:
    out = []
    for ch in s:
        cp = ord(ch)
        if 0x20 <= cp < 0x7F and ch not in "\\\t":
            out.append(ch)
        elif cp <= 0xFFFF:
            out.append("\\u%04X" % cp)
        else:
            out.append("\\U%08X" % cp)
    return "".join(out)


WORDS = [
    "pre" + LONG_S + "ent", "conduct", "of", "affairs", "and", LONG_S + "uch",
    "apprehen" + LONG_S + "ions", "were", "entertained", "futurity", "covenant",
    LONG_S + "ummon", "it,", "322.", "C" + AE + LONG_S + "ar", "Celt" + AE,
    AE_CAP + "tius", "ph" + AE + "nomena", "Antient", "imploy", FI + "delity",
    "a" + FF + "airs", "hi" + LONG_S + "tory", "the", "kingdom", "liberty",
]
NOISE = list("abcdefgh") + [
    LONG_S, AE, FI, EM_DASH, EN_DASH, "-", MINUS, " ", NBSP, EM_SPACE, "\t",
    ZWSP, ",", ".", ";", "e", ACUTE, E_ACUTE,
]


def random_line(rng: random.Random) -> str:
    n = rng.randint(0, 8)
    parts = []
    for _ in range(n):
        if rng.random() < 0.7:
            parts.append(rng.choice(WORDS))
        else:
            parts.append("".join(rng.choice(NOISE) for _ in range(rng.randint(1, 6))))
    sep = rng.choice([" ", "  ", " " + NBSP, EM_SPACE])
    return sep.join(parts)


def mutate(rng: random.Random, s: str) -> str:
    chars = list(s)
    for _ in range(rng.randint(0, 4)):
        if not chars:
            break
        op = rng.randint(0, 2)
        pos = rng.randrange(len(chars))
        if op == 0:
            chars[pos] = rng.choice(["a", "b", LONG_S, AE, " ", "s", "-"])
        elif op == 1:
            chars.insert(pos, rng.choice(["x", "q", " ", LONG_S]))
        else:
            del chars[pos]
    return "".join(chars)


def main() -> None:
    rng = random.Random(17660810)
    rows = []
    for _ in range(400):
        ref = random_line(rng)
        hyp = mutate(rng, ref) if rng.random() < 0.8 else random_line(rng)
        nref = normalize(ref)
        nhyp = normalize(hyp)
        cd = edit_distance(nref, nhyp)
        wd = edit_distance(nref.split(" ") if nref else [], nhyp.split(" ") if nhyp else [])
        rows.append((ref, hyp, nref, nhyp, cd, wd))
    sys.stdout.write("# raw_ref<TAB>raw_hyp<TAB>norm_ref<TAB>norm_hyp<TAB>char_distance<TAB>word_distance\n")
    for ref, hyp, nref, nhyp, cd, wd in rows:
        sys.stdout.write("%s\t%s\t%s\t%s\t%d\t%d\n" % (esc(ref), esc(hyp), esc(nref), esc(nhyp), cd, wd))


if __name__ == "__main__":
    main()
