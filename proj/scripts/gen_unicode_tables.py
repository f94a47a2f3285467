#!/usr/bin/env python3
"""Regenerates include/histocr/detail/unicode_tables.hpp from Python's unicodedata.

The tables cover exactly what the library needs: canonical (NFC/NFD)
normalization data, simple lowercase mappings, and the punctuation ranges
used for token key folding and boundary-context checks.

Usage: python3 scripts/gen_unicode_tables.py > include/histocr/detail/unicode_tables.hpp
"""

import sys
import unicodedata

MAX_CP = 0x110000
HANGUL_S_BASE, HANGUL_S_COUNT = 0xAC00, 11172


def is_hangul_syllable(cp: int) -> bool:
    return HANGUL_S_BASE <= cp < HANGUL_S_BASE + HANGUL_S_COUNT


def canonical_raw_decomposition(cp: int):
    d = unicodedata.decomposition(chr(cp))
    if not d or d.startswith("<"):
        return None
    return [int(tok, 16) for tok in d.split()]


def full_canonical_decomposition(cp: int):
    """Recursively expanded canonical decomposition (NFD without reordering)."""
    raw = canonical_raw_decomposition(cp)
    if raw is None:
        return None
    out = []
    stack = list(reversed(raw))
    while stack:
        c = stack.pop()
        sub = canonical_raw_decomposition(c)
        if sub is None:
            out.append(c)
        else:
            stack.extend(reversed(sub))
    return out


def emit(out):
    ccc = []
    for cp in range(MAX_CP):
        k = unicodedata.combining(chr(cp))
        if k:
            ccc.append((cp, k))

    decomp_index = []
    decomp_pool = []
    for cp in range(MAX_CP):
        if is_hangul_syllable(cp):
            continue
        full = full_canonical_decomposition(cp)
        if full is None:
            continue
        decomp_index.append((cp, len(decomp_pool), len(full)))
        decomp_pool.extend(full)

    comp_pairs = []
    for cp in range(MAX_CP):
        if is_hangul_syllable(cp):
            continue
        raw = canonical_raw_decomposition(cp)
        if raw is None or len(raw) != 2:
            continue
        a, b = raw
        # Composition-exclusion handling falls out of round-tripping through NFC.
        if unicodedata.normalize("NFC", chr(a) + chr(b)) == chr(cp):
            comp_pairs.append((a, b, cp))
    comp_pairs.sort()

    lower = []
    for cp in range(MAX_CP):
        lo = chr(cp).lower()
        if lo != chr(cp) and 1 <= len(lo) <= 3:
            lower.append((cp, [ord(c) for c in lo]))

    punct_ranges = []
    start = None
    prev = None
    for cp in range(MAX_CP):
        if unicodedata.category(chr(cp)).startswith("P"):
            if start is None:
                start = cp
            prev = cp
        else:
            if start is not None:
                punct_ranges.append((start, prev))
                start = None
    if start is not None:
        punct_ranges.append((start, prev))

    w = out.write
    w("// Generated by scripts/gen_unicode_tables.py — do not edit by hand.\n")
    w(f"// Unicode data version: {unicodedata.unidata_version}\n")
    w("#pragma once\n\n")
    w("#include <cstdint>\n#include <cstddef>\n\n")
    w("namespace histocr::detail {\n\n")
    w(f'inline constexpr const char* kUnicodeDataVersion = "{unicodedata.unidata_version}";\n\n')

    w("struct CccEntry { char32_t cp; std::uint8_t ccc; };\n")
    w(f"inline constexpr CccEntry kCombiningClass[{len(ccc)}] = {{\n")
    w(",\n".join(f"  {{0x{cp:04X}, {k}}}" for cp, k in ccc))
    w("\n};\n\n")

    w("struct DecompEntry { char32_t cp; std::uint32_t offset; std::uint8_t length; };\n")
    w(f"inline constexpr DecompEntry kDecompIndex[{len(decomp_index)}] = {{\n")
    w(",\n".join(f"  {{0x{cp:04X}, {off}, {ln}}}" for cp, off, ln in decomp_index))
    w("\n};\n\n")
    w(f"inline constexpr char32_t kDecompPool[{len(decomp_pool)}] = {{\n")
    for i in range(0, len(decomp_pool), 12):
        w("  " + ", ".join(f"0x{c:04X}" for c in decomp_pool[i : i + 12]) + ",\n")
    w("};\n\n")

    w("struct CompEntry { char32_t first; char32_t second; char32_t composed; };\n")
    w(f"inline constexpr CompEntry kCompositions[{len(comp_pairs)}] = {{\n")
    w(",\n".join(f"  {{0x{a:04X}, 0x{b:04X}, 0x{c:04X}}}" for a, b, c in comp_pairs))
    w("\n};\n\n")

    w("struct LowerEntry { char32_t cp; char32_t to[3]; std::uint8_t length; };\n")
    w(f"inline constexpr LowerEntry kLowercase[{len(lower)}] = {{\n")
    rows = []
    for cp, seq in lower:
        padded = seq + [0] * (3 - len(seq))
        rows.append(
            "  {0x%04X, {0x%04X, 0x%04X, 0x%04X}, %d}" % (cp, padded[0], padded[1], padded[2], len(seq))
        )
    w(",\n".join(rows))
    w("\n};\n\n")

    w("struct CpRange { char32_t lo; char32_t hi; };\n")
    w(f"inline constexpr CpRange kPunctuationRanges[{len(punct_ranges)}] = {{\n")
    w(",\n".join(f"  {{0x{lo:04X}, 0x{hi:04X}}}" for lo, hi in punct_ranges))
    w("\n};\n\n")

    w("} // namespace histocr::detail\n")


if __name__ == "__main__":
    emit(sys.stdout)
