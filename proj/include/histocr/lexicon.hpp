#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "histocr/alignment.hpp"
#include "histocr/textnorm.hpp"
#include "histocr/unicode.hpp"

namespace histocr {

class LexiconError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Decomposition of the historical graphemes this toolkit tracks into their
// modern letter sequences. Lexicon keys are lowercased before this applies;
// the uppercase entries serve case-preserving uses such as the
// lexical-normalization distance cap.
inline const char32_t* graphemic_decomposition(char32_t cp) {
    switch (cp) {
        case U'ſ': return U"s";  // ſ
        case U'æ': return U"ae"; // æ
        case U'Æ': return U"Ae"; // Æ
        case U'œ': return U"oe"; // œ
        case U'Œ': return U"Oe"; // Œ
        case U'ﬀ': return U"ff";
        case U'ﬁ': return U"fi";
        case U'ﬂ': return U"fl";
        case U'ﬃ': return U"ffi";
        case U'ﬄ': return U"ffl";
        case U'ﬅ': return U"st"; // ﬅ (long s t)
        case U'ﬆ': return U"st"; // ﬆ
        default: return nullptr;
    }
}

inline bool has_graphemic_decomposition(std::u32string_view s) {
    for (char32_t cp : s)
        if (graphemic_decomposition(cp)) return true;
    return false;
}

inline std::u32string decompose_graphemes(std::u32string_view s) {
    std::u32string out;
    out.reserve(s.size());
    for (char32_t cp : s) {
        if (const char32_t* d = graphemic_decomposition(cp)) {
            while (*d) out.push_back(*d++);
        } else {
            out.push_back(cp);
        }
    }
    return out;
}

inline constexpr const char* kLexiconFoldPolicy = "casefold-preserve-historical-v1";
inline constexpr int kLexiconFormatVersion = 1;

// Lexicon key: leading/trailing punctuation stripped, then lowercased.
// Internal punctuation (hyphens, apostrophes) stays. Long-s and ligature
// scalars are lowercase already and survive folding untouched.
inline std::u32string lexicon_key(std::u32string_view token) {
    std::size_t begin = 0, end = token.size();
    while (begin < end && uni::is_punctuation(token[begin])) ++begin;
    while (end > begin && uni::is_punctuation(token[end - 1])) --end;
    return uni::to_lower(token.substr(begin, end - begin));
}

struct LexiconMetadata {
    std::vector<std::string> sources;
    std::string built_at;        // informational; excluded from equality-of-content checks
    std::string fold_policy = kLexiconFoldPolicy;
    std::uint64_t min_frequency = 1;
};

// Attestation set of historical tokens. Entries containing tracked historical
// graphemes are stored alongside their decomposed variants, so both spellings
// count as attested.
class Lexicon {
public:
    Lexicon() = default;
    Lexicon(std::set<std::u32string> entries, LexiconMetadata metadata)
        : entries_(std::move(entries)), metadata_(std::move(metadata)) {}

    bool contains_key(std::u32string_view key) const {
        if (key.empty()) return false;
        return entries_.count(std::u32string(key)) > 0;
    }

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::set<std::u32string>& entries() const { return entries_; }
    const LexiconMetadata& metadata() const { return metadata_; }

private:
    std::set<std::u32string> entries_; // ordered: deterministic persistence
    LexiconMetadata metadata_;
};

// Attestation test for a token as produced by tokenize: fold, then look up.
inline bool contains(const Lexicon& lex, const Token& token) {
    return lex.contains_key(lexicon_key(token.text));
}

inline bool contains(const Lexicon& lex, std::u32string_view token_text) {
    return lex.contains_key(lexicon_key(token_text));
}

// Builds the attestation lexicon from a stream of corpus lines. `next_line`
// yields raw UTF-8 lines until std::nullopt; decode failures should be thrown
// by the supplier with file/line context. Tokens are normalized, folded and
// counted; keys reaching `min_frequency` become entries, each with its
// graphemic-decomposed variant.
inline Lexicon build_lexicon(const std::function<std::optional<std::string>()>& next_line,
                             std::uint64_t min_frequency = 1, LexiconMetadata metadata = {}) {
    if (min_frequency < 1) throw std::invalid_argument("min_frequency must be >= 1");
    std::map<std::u32string, std::uint64_t> counts;
    bool saw_line = false;
    while (auto line = next_line()) {
        saw_line = true;
        const NormalizedText normalized = normalize_utf8(*line);
        for (const Token& token : tokenize(normalized)) {
            std::u32string key = lexicon_key(token.text);
            if (!key.empty()) ++counts[std::move(key)];
        }
    }
    if (!saw_line) throw LexiconError("lexicon build: empty corpus");

    std::set<std::u32string> entries;
    for (const auto& [key, count] : counts) {
        if (count < min_frequency) continue;
        if (has_graphemic_decomposition(key)) entries.insert(decompose_graphemes(key));
        entries.insert(key);
    }
    if (entries.empty())
        throw LexiconError("lexicon build: no token reached min_frequency " + std::to_string(min_frequency));

    metadata.fold_policy = kLexiconFoldPolicy;
    metadata.min_frequency = min_frequency;
    return Lexicon(std::move(entries), std::move(metadata));
}

// ---------------------------------------------------------------------------
// Persistence: versioned line-oriented UTF-8, header lines prefixed with '#',
// then one sorted key per line. Keys never start with '#' (leading
// punctuation is stripped by folding), so the format needs no escaping.

inline void save_lexicon(const Lexicon& lex, std::ostream& out) {
    out << "# histocr-lexicon format=" << kLexiconFormatVersion << "\n";
    out << "# fold=" << lex.metadata().fold_policy << "\n";
    out << "# min_frequency=" << lex.metadata().min_frequency << "\n";
    out << "# built=" << lex.metadata().built_at << "\n";
    out << "# sources=";
    for (std::size_t i = 0; i < lex.metadata().sources.size(); ++i) {
        if (i) out << ",";
        out << lex.metadata().sources[i];
    }
    out << "\n";
    out << "# entries=" << lex.size() << "\n";
    for (const auto& key : lex.entries()) out << uni::encode_utf8(key) << "\n";
    if (!out) throw LexiconError("lexicon save: write failure");
}

inline Lexicon load_lexicon(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw LexiconError("lexicon load: empty file");
    const std::string magic = "# histocr-lexicon format=";
    if (line.rfind(magic, 0) != 0) throw LexiconError("lexicon load: not a histocr lexicon file");
    int version = 0;
    try {
        version = std::stoi(line.substr(magic.size()));
    } catch (const std::exception&) {
        throw LexiconError("lexicon load: malformed format version");
    }
    if (version != kLexiconFormatVersion)
        throw LexiconError("lexicon load: unsupported format version " + std::to_string(version));

    LexiconMetadata meta;
    std::uint64_t declared_entries = 0;
    bool have_entries_count = false;
    std::set<std::u32string> entries;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] == '#') {
            const auto parse_value = [&](const std::string& prefix) -> std::optional<std::string> {
                if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
                return std::nullopt;
            };
            if (auto v = parse_value("# fold=")) {
                meta.fold_policy = *v;
            } else if (auto v = parse_value("# min_frequency=")) {
                meta.min_frequency = std::stoull(*v);
            } else if (auto v = parse_value("# built=")) {
                meta.built_at = *v;
            } else if (auto v = parse_value("# sources=")) {
                std::size_t pos = 0;
                while (pos <= v->size() && !v->empty()) {
                    const std::size_t comma = v->find(',', pos);
                    meta.sources.push_back(v->substr(pos, comma - pos));
                    if (comma == std::string::npos) break;
                    pos = comma + 1;
                }
            } else if (auto v = parse_value("# entries=")) {
                declared_entries = std::stoull(*v);
                have_entries_count = true;
            }
            continue;
        }
        if (line.empty()) continue;
        entries.insert(uni::decode_utf8(line));
    }
    if (!have_entries_count) throw LexiconError("lexicon load: missing entries count header");
    if (entries.size() != declared_entries)
        throw LexiconError("lexicon load: entry count mismatch (header says " +
                           std::to_string(declared_entries) + ", file has " +
                           std::to_string(entries.size()) + "); file truncated or corrupted");
    return Lexicon(std::move(entries), std::move(meta));
}

} // namespace histocr
