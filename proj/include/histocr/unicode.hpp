#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "histocr/detail/unicode_tables.hpp"

namespace histocr {

// Thrown when a byte sequence is not valid UTF-8. `byte_offset` points at the
// first offending byte.
class Utf8Error : public std::runtime_error {
public:
    Utf8Error(std::size_t byte_offset, const std::string& what)
        : std::runtime_error(what), byte_offset_(byte_offset) {}
    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

namespace uni {

namespace detail_uni {

inline const histocr::detail::CccEntry* find_ccc(char32_t cp) {
    const auto* begin = std::begin(histocr::detail::kCombiningClass);
    const auto* end = std::end(histocr::detail::kCombiningClass);
    const auto* it = std::lower_bound(begin, end, cp, [](const auto& e, char32_t c) { return e.cp < c; });
    return (it != end && it->cp == cp) ? it : nullptr;
}

inline const histocr::detail::DecompEntry* find_decomp(char32_t cp) {
    const auto* begin = std::begin(histocr::detail::kDecompIndex);
    const auto* end = std::end(histocr::detail::kDecompIndex);
    const auto* it = std::lower_bound(begin, end, cp, [](const auto& e, char32_t c) { return e.cp < c; });
    return (it != end && it->cp == cp) ? it : nullptr;
}

inline char32_t find_composition(char32_t first, char32_t second) {
    const auto* begin = std::begin(histocr::detail::kCompositions);
    const auto* end = std::end(histocr::detail::kCompositions);
    const auto* it = std::lower_bound(begin, end, first, [](const auto& e, char32_t c) { return e.first < c; });
    for (; it != end && it->first == first; ++it) {
        if (it->second == second) return it->composed;
    }
    return 0;
}

// Hangul syllable composition constants (UAX #15 §3.12).
constexpr char32_t kHangulSBase = 0xAC00, kHangulLBase = 0x1100, kHangulVBase = 0x1161, kHangulTBase = 0x11A7;
constexpr int kHangulLCount = 19, kHangulVCount = 21, kHangulTCount = 28;
constexpr int kHangulNCount = kHangulVCount * kHangulTCount;
constexpr int kHangulSCount = kHangulLCount * kHangulNCount;

} // namespace detail_uni

inline std::uint8_t combining_class(char32_t cp) {
    const auto* e = detail_uni::find_ccc(cp);
    return e ? e->ccc : 0;
}

inline bool is_white_space(char32_t cp) {
    // Unicode White_Space=yes (stable since Unicode 6).
    switch (cp) {
        case 0x0009: case 0x000A: case 0x000B: case 0x000C: case 0x000D:
        case 0x0020: case 0x0085: case 0x00A0: case 0x1680:
        case 0x2000: case 0x2001: case 0x2002: case 0x2003: case 0x2004:
        case 0x2005: case 0x2006: case 0x2007: case 0x2008: case 0x2009: case 0x200A:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return false;
    }
}

// Zero-width scalars that OCR pipelines and PDF text extraction leave behind.
// They carry no visual signal, so normalization drops them outright.
inline bool is_zero_width_artifact(char32_t cp) {
    return cp == 0x200B || cp == 0xFEFF || cp == 0x2060;
}

inline bool is_dash(char32_t cp) {
    // General category Pd plus U+2212 MINUS SIGN.
    switch (cp) {
        case 0x002D: case 0x058A: case 0x05BE: case 0x1400: case 0x1806:
        case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014: case 0x2015:
        case 0x2E17: case 0x2E1A: case 0x2E3A: case 0x2E3B: case 0x2E40:
        case 0x301C: case 0x3030: case 0x30A0:
        case 0xFE31: case 0xFE32: case 0xFE58: case 0xFE63: case 0xFF0D:
        case 0x10EAD:
        case 0x2212:
            return true;
        default:
            return false;
    }
}

inline bool is_punctuation(char32_t cp) {
    const auto* begin = std::begin(histocr::detail::kPunctuationRanges);
    const auto* end = std::end(histocr::detail::kPunctuationRanges);
    const auto* it = std::upper_bound(begin, end, cp, [](char32_t c, const auto& r) { return c < r.lo; });
    return it != begin && cp <= (it - 1)->hi;
}

// Simple per-scalar lowercasing. Long-s and the typographic ligatures are
// already lowercase and come through unchanged, which is exactly what the
// lexicon key folding needs.
inline void append_lowered(std::u32string& out, char32_t cp) {
    const auto* begin = std::begin(histocr::detail::kLowercase);
    const auto* end = std::end(histocr::detail::kLowercase);
    const auto* it = std::lower_bound(begin, end, cp, [](const auto& e, char32_t c) { return e.cp < c; });
    if (it != end && it->cp == cp) {
        for (std::uint8_t i = 0; i < it->length; ++i) out.push_back(it->to[i]);
    } else {
        out.push_back(cp);
    }
}

inline std::u32string to_lower(std::u32string_view s) {
    std::u32string out;
    out.reserve(s.size());
    for (char32_t cp : s) append_lowered(out, cp);
    return out;
}

// ---------------------------------------------------------------------------
// UTF-8 <-> scalar sequences

inline std::u32string decode_utf8(std::string_view bytes) {
    std::u32string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    const auto fail = [&](const char* msg) -> char32_t { throw Utf8Error(i, msg); };
    while (i < bytes.size()) {
        const auto b0 = static_cast<unsigned char>(bytes[i]);
        char32_t cp = 0;
        std::size_t len = 0;
        if (b0 < 0x80) {
            cp = b0;
            len = 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            len = 2;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            len = 4;
        } else {
            fail("invalid UTF-8 lead byte");
        }
        if (i + len > bytes.size()) fail("truncated UTF-8 sequence");
        for (std::size_t k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(bytes[i + k]);
            if ((b & 0xC0) != 0x80) fail("invalid UTF-8 continuation byte");
            cp = (cp << 6) | (b & 0x3F);
        }
        if (len == 2 && cp < 0x80) fail("overlong UTF-8 sequence");
        if (len == 3 && cp < 0x800) fail("overlong UTF-8 sequence");
        if (len == 4 && cp < 0x10000) fail("overlong UTF-8 sequence");
        if (cp > 0x10FFFF) fail("code point out of range");
        if (cp >= 0xD800 && cp <= 0xDFFF) fail("surrogate code point in UTF-8");
        out.push_back(cp);
        i += len;
    }
    return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string encode_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : s) append_utf8(out, cp);
    return out;
}

inline std::string encode_utf8(char32_t cp) {
    std::string out;
    append_utf8(out, cp);
    return out;
}

// ---------------------------------------------------------------------------
// Canonical normalization (NFC), UAX #15.

inline std::u32string nfd(std::u32string_view s) {
    using namespace detail_uni;
    std::u32string out;
    out.reserve(s.size());
    for (char32_t cp : s) {
        if (cp >= kHangulSBase && cp < kHangulSBase + static_cast<char32_t>(kHangulSCount)) {
            const int idx = static_cast<int>(cp - kHangulSBase);
            out.push_back(kHangulLBase + static_cast<char32_t>(idx / kHangulNCount));
            out.push_back(kHangulVBase + static_cast<char32_t>((idx % kHangulNCount) / kHangulTCount));
            const int t = idx % kHangulTCount;
            if (t > 0) out.push_back(kHangulTBase + static_cast<char32_t>(t));
            continue;
        }
        if (const auto* d = find_decomp(cp)) {
            for (std::uint8_t k = 0; k < d->length; ++k)
                out.push_back(histocr::detail::kDecompPool[d->offset + k]);
        } else {
            out.push_back(cp);
        }
    }
    // Canonical ordering: stable exchange of adjacent marks with descending ccc.
    for (std::size_t i = 1; i < out.size(); ++i) {
        const std::uint8_t ci = combining_class(out[i]);
        if (ci == 0) continue;
        std::size_t j = i;
        while (j > 0) {
            const std::uint8_t cj = combining_class(out[j - 1]);
            if (cj == 0 || cj <= ci) break;
            std::swap(out[j - 1], out[j]);
            --j;
        }
    }
    return out;
}

inline std::u32string nfc(std::u32string_view s) {
    using namespace detail_uni;
    std::u32string d = nfd(s);
    if (d.empty()) return d;

    std::u32string out;
    out.reserve(d.size());
    // Canonical composition: walk the decomposed string keeping the position
    // of the last starter written to `out`; compose unblocked marks onto it.
    std::ptrdiff_t last_starter = -1;
    std::uint8_t last_ccc = 0;
    for (char32_t cp : d) {
        const std::uint8_t ccc = combining_class(cp);
        if (last_starter >= 0) {
            const char32_t starter = out[static_cast<std::size_t>(last_starter)];
            const bool blocked = (last_ccc != 0 && last_ccc >= ccc);
            if (!blocked) {
                // Hangul LV / LVT composition.
                if (starter >= kHangulLBase && starter < kHangulLBase + static_cast<char32_t>(kHangulLCount) &&
                    cp >= kHangulVBase && cp < kHangulVBase + static_cast<char32_t>(kHangulVCount)) {
                    const char32_t l = starter - kHangulLBase;
                    const char32_t v = cp - kHangulVBase;
                    out[static_cast<std::size_t>(last_starter)] =
                        kHangulSBase + (l * kHangulNCount) + (v * kHangulTCount);
                    continue;
                }
                if (starter >= kHangulSBase && starter < kHangulSBase + static_cast<char32_t>(kHangulSCount) &&
                    (starter - kHangulSBase) % kHangulTCount == 0 && cp > kHangulTBase &&
                    cp < kHangulTBase + static_cast<char32_t>(kHangulTCount)) {
                    out[static_cast<std::size_t>(last_starter)] = starter + (cp - kHangulTBase);
                    continue;
                }
                if (const char32_t composed = find_composition(starter, cp)) {
                    out[static_cast<std::size_t>(last_starter)] = composed;
                    // ccc of the absorbed mark no longer blocks anything.
                    continue;
                }
            }
        }
        out.push_back(cp);
        if (ccc == 0) {
            last_starter = static_cast<std::ptrdiff_t>(out.size()) - 1;
            last_ccc = 0;
        } else {
            last_ccc = ccc;
        }
    }
    return out;
}

} // namespace uni
} // namespace histocr
