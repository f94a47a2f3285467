#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <string>
#include <vector>

#include "histocr/unicode.hpp"

namespace uni = histocr::uni;

namespace {

// Unescapes the \uXXXX / \UXXXXXXXX form used by tests/data/nfc_vectors.tsv.
std::u32string unescape(const std::string& s) {
    std::u32string out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '\\' && i + 1 < s.size() && (s[i + 1] == 'u' || s[i + 1] == 'U')) {
            const std::size_t digits = s[i + 1] == 'u' ? 4 : 8;
            out.push_back(static_cast<char32_t>(std::stoul(s.substr(i + 2, digits), nullptr, 16)));
            i += 2 + digits;
        } else {
            out.push_back(static_cast<unsigned char>(s[i]));
            ++i;
        }
    }
    return out;
}

} // namespace

TEST_CASE("nfc matches the frozen reference vectors") {
    std::ifstream in(std::string(HISTOCR_TEST_DATA_DIR) + "/nfc_vectors.tsv");
    REQUIRE(in.is_open());
    std::string line;
    std::size_t cases = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        REQUIRE(tab != std::string::npos);
        const std::u32string input = unescape(line.substr(0, tab));
        const std::u32string expected = unescape(line.substr(tab + 1));
        INFO("case " << cases << ": " << line);
        REQUIRE(uni::nfc(input) == expected);
        REQUIRE(uni::nfc(expected) == expected); // idempotent
        ++cases;
    }
    REQUIRE(cases >= 600);
}

TEST_CASE("nfc keeps ligature and long-s scalars atomic") {
    const std::u32string s = U"ﬀﬁﬂﬃﬄﬅﬆſæœ";
    CHECK(uni::nfc(s) == s);
}

TEST_CASE("utf8 decoding rejects malformed input") {
    CHECK_THROWS_AS(uni::decode_utf8("\xff"), histocr::Utf8Error);
    CHECK_THROWS_AS(uni::decode_utf8("\xc3"), histocr::Utf8Error);          // truncated
    CHECK_THROWS_AS(uni::decode_utf8("\xc0\xaf"), histocr::Utf8Error);      // overlong
    CHECK_THROWS_AS(uni::decode_utf8("\xed\xa0\x80"), histocr::Utf8Error);  // surrogate
    CHECK_THROWS_AS(uni::decode_utf8("a\x80"), histocr::Utf8Error);         // stray continuation
    try {
        uni::decode_utf8("ab\xff");
    } catch (const histocr::Utf8Error& e) {
        CHECK(e.byte_offset() == 2);
    }
}

TEST_CASE("utf8 round trip across plane boundaries") {
    const std::u32string s = U"aéſﬁ一\U0001D11E";
    CHECK(uni::decode_utf8(uni::encode_utf8(s)) == s);
}

TEST_CASE("lowercasing preserves historical scalars") {
    CHECK(uni::to_lower(U"The Cat") == U"the cat");
    CHECK(uni::to_lower(U"ſummon") == U"ſummon");   // long-s untouched
    CHECK(uni::to_lower(U"CÆSAR") == U"cæsar");     // Æ -> æ
    CHECK(uni::to_lower(U"ﬁne") == U"ﬁne");         // ligature untouched
}

TEST_CASE("punctuation classification follows category P") {
    for (char32_t cp : std::u32string(U",.;:!?-—‘“#¿"))
        CHECK(uni::is_punctuation(cp));
    for (char32_t cp : std::u32string(U"ab7 ſæé+=$"))
        CHECK_FALSE(uni::is_punctuation(cp));
}

TEST_CASE("whitespace and dash sets") {
    for (char32_t cp : std::u32string(U" \t\n      　 "))
        CHECK(uni::is_white_space(cp));
    CHECK_FALSE(uni::is_white_space(U'​')); // ZWSP is an artifact, not whitespace
    for (char32_t cp : std::u32string(U"-‐–—−－⸺"))
        CHECK(uni::is_dash(cp));
    CHECK_FALSE(uni::is_dash(U'­')); // soft hyphen is Cf, not Pd
}
