#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "histocr/unicode.hpp"

namespace histocr {

// Text after the minimal diplomatic normalization pass. Guarantees:
//   - NFC-composed scalars
//   - no leading/trailing whitespace, no double spaces
//   - every dash variant mapped to ASCII '-', no "--" runs
//   - long-s, ligatures, diacritics, punctuation and case untouched
struct NormalizedText {
    std::u32string content;
    std::size_t original_length = 0; // scalar count before normalization

    bool empty() const { return content.empty(); }
    std::size_t size() const { return content.size(); }

    bool operator==(const NormalizedText&) const = default;
};

// Normalization pipeline, in fixed order: per-scalar mapping (whitespace
// family -> space, dash family -> '-', zero-width artifacts dropped), then
// NFC, then run collapsing for spaces and hyphens, then trim. Mapping runs
// before NFC so that a dropped zero-width scalar cannot leave a base and its
// combining mark uncomposed. Total and idempotent; whitespace-only input
// yields the empty text.
inline NormalizedText normalize(std::u32string_view raw) {
    NormalizedText result;
    result.original_length = raw.size();

    std::u32string mapped;
    mapped.reserve(raw.size());
    for (char32_t cp : raw) {
        if (uni::is_zero_width_artifact(cp)) continue;
        if (uni::is_white_space(cp)) {
            mapped.push_back(U' ');
        } else if (uni::is_dash(cp)) {
            mapped.push_back(U'-');
        } else {
            mapped.push_back(cp);
        }
    }
    const std::u32string composed = uni::nfc(mapped);

    std::u32string& out = result.content;
    out.reserve(composed.size());
    for (char32_t cp : composed) {
        if (!out.empty() && cp == out.back() && (cp == U' ' || cp == U'-')) continue;
        out.push_back(cp);
    }
    while (!out.empty() && out.front() == U' ') out.erase(out.begin());
    while (!out.empty() && out.back() == U' ') out.pop_back();
    return result;
}

// Convenience entry point for byte input. Throws Utf8Error on bad encoding.
inline NormalizedText normalize_utf8(std::string_view raw) {
    return normalize(uni::decode_utf8(raw));
}

inline std::string to_utf8(const NormalizedText& text) {
    return uni::encode_utf8(text.content);
}

} // namespace histocr
