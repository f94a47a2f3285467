#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "histocr/rng.hpp"
#include "histocr/textnorm.hpp"

using histocr::NormalizedText;
using histocr::normalize;
using histocr::normalize_utf8;
using histocr::to_utf8;

namespace {

std::multiset<char32_t> core_scalars(std::u32string_view s) {
    std::multiset<char32_t> out;
    for (char32_t cp : s) {
        if (histocr::uni::is_white_space(cp) || histocr::uni::is_dash(cp) ||
            histocr::uni::is_zero_width_artifact(cp))
            continue;
        out.insert(cp);
    }
    return out;
}

} // namespace

TEST_CASE("normalize collapses whitespace and preserves long-s") {
    // "pre<ZWSP>ſent␣␣conduct␣" -> "preſent conduct"
    const NormalizedText n = normalize_utf8("pre\xe2\x80\x8b\xc5\xbf"
                                            "ent  conduct ");
    CHECK(to_utf8(n) == "pre\xc5\xbf"
                        "ent conduct");
}

TEST_CASE("normalize maps and collapses dash variants") {
    CHECK(to_utf8(normalize_utf8("covenant\xe2\x80\x94\xe2\x80\x94")) == "covenant-");
    CHECK(to_utf8(normalize(U"a – b")) == "a - b");
    CHECK(to_utf8(normalize(U"a−b‐c－d")) == "a-b-c-d");
    CHECK(to_utf8(normalize(U"--a---b--")) == "-a-b-");
}

TEST_CASE("normalized text is a fixed point") {
    CHECK(to_utf8(normalize_utf8("futurity,")) == "futurity,");
}

TEST_CASE("all whitespace classes map to a single space") {
    const NormalizedText n = normalize(U"a\tb c d e f　g");
    CHECK(n.content == U"a b c d e f g");
}

TEST_CASE("zero-width artifacts are dropped without leaving spaces") {
    CHECK(normalize(U"a​b﻿c⁠d").content == U"abcd");
}

TEST_CASE("whitespace-only input yields empty text") {
    const NormalizedText n = normalize(U" \t   ");
    CHECK(n.empty());
    CHECK(n.original_length == 5);
}

TEST_CASE("diacritics, ligatures, punctuation and case survive") {
    const std::u32string text = U"Cæſar, ﬁne été; Quœsta!";
    CHECK(normalize(text).content == text);
}

TEST_CASE("input is NFC-composed") {
    CHECK(normalize(U"été").content == U"été");
}

TEST_CASE("normalize is idempotent and preserves core scalars on fuzz input") {
    const std::u32string alphabet = U"ab ſﬁﬀæ \t  ​"
                                    U"—–-−,.;́eé﻿　c";
    histocr::SplitMix64 rng(99);
    for (int round = 0; round < 500; ++round) {
        std::u32string raw;
        const std::size_t len = rng.below(24);
        for (std::size_t i = 0; i < len; ++i) raw.push_back(alphabet[rng.below(alphabet.size())]);

        const NormalizedText once = normalize(raw);
        const NormalizedText twice = normalize(once.content);
        REQUIRE(once.content == twice.content);

        // Grapheme preservation, with zero-width artifacts stripped up front
        // (dropping one can join a base with its combining mark under NFC).
        std::u32string visible;
        for (char32_t cp : raw)
            if (!histocr::uni::is_zero_width_artifact(cp)) visible.push_back(cp);
        REQUIRE(core_scalars(once.content) == core_scalars(histocr::uni::nfc(visible)));

        for (std::size_t i = 0; i < once.content.size(); ++i) {
            const char32_t cp = once.content[i];
            REQUIRE((!histocr::uni::is_white_space(cp) || cp == U' '));
            REQUIRE((!histocr::uni::is_dash(cp) || cp == U'-'));
            if (i > 0 && (cp == U' ' || cp == U'-')) REQUIRE(once.content[i - 1] != cp);
        }
        if (!once.content.empty()) {
            REQUIRE(once.content.front() != U' ');
            REQUIRE(once.content.back() != U' ');
        }
    }
}

TEST_CASE("normalize is deterministic") {
    const std::u32string input = U"preſent — conduct";
    CHECK(normalize(input).content == normalize(input).content);
}
