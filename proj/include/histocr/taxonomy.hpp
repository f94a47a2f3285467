#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "histocr/alignment.hpp"
#include "histocr/lexicon.hpp"
#include "histocr/textnorm.hpp"
#include "histocr/unicode.hpp"

namespace histocr {

enum class ProxyKind : std::uint8_t {
    RealWord,
    NonWord,
    BoundarySplit,
    BoundaryMerge,
    GlyphConfusion,
    NormalizationLexical,
    NormalizationGraphemic,
};

inline const char* to_string(ProxyKind k) {
    switch (k) {
        case ProxyKind::RealWord: return "real-word";
        case ProxyKind::NonWord: return "non-word";
        case ProxyKind::BoundarySplit: return "boundary-split";
        case ProxyKind::BoundaryMerge: return "boundary-merge";
        case ProxyKind::GlyphConfusion: return "glyph-confusion";
        case ProxyKind::NormalizationLexical: return "normalization-lexical";
        case ProxyKind::NormalizationGraphemic: return "normalization-graphemic";
    }
    return "?";
}

// One classified error instance. Word-level kinds carry token surfaces;
// glyph/normalization kinds carry the (from, to) scalar-sequence pattern.
struct ProxyEvent {
    ProxyKind kind;
    std::string line_id;
    std::u32string ref_surface;
    std::u32string hyp_surface;
    std::size_t ref_offset = 0;
    bool punctuation_related = false; // boundary kinds only
    std::u32string pattern_from;      // glyph/normalization kinds only
    std::u32string pattern_to;
    bool ref_attested = false;        // auxiliary, word kinds only
    bool overlaps_structural = false; // word kinds: token touched by a boundary/glyph event
};

enum class ConfusionCategory : std::uint8_t { Glyph, NormalizationGraphemic, NormalizationLexical };

inline const char* to_string(ConfusionCategory c) {
    switch (c) {
        case ConfusionCategory::Glyph: return "glyph";
        case ConfusionCategory::NormalizationGraphemic: return "normalization-graphemic";
        case ConfusionCategory::NormalizationLexical: return "normalization-lexical";
    }
    return "?";
}

struct ConfusionPair {
    std::u32string from;
    std::u32string to;
    ConfusionCategory category;

    bool operator==(const ConfusionPair&) const = default;
};

class ConfusionTableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Pattern table for windowed confusion matching. Pairs are capped at 3
// scalars per side, which also bounds the op window the detector scans.
class ConfusionTable {
public:
    static constexpr std::size_t kMaxPatternLength = 3;

    void add(ConfusionPair pair) {
        validate(pair);
        if (std::find(pairs_.begin(), pairs_.end(), pair) == pairs_.end())
            pairs_.push_back(std::move(pair));
    }

    bool contains(std::u32string_view from, std::u32string_view to, ConfusionCategory category) const {
        return find(from, to, category) != nullptr;
    }

    const ConfusionPair* find(std::u32string_view from, std::u32string_view to,
                              ConfusionCategory category) const {
        for (const auto& p : pairs_)
            if (p.category == category && p.from == from && p.to == to) return &p;
        return nullptr;
    }

    const std::vector<ConfusionPair>& pairs() const { return pairs_; }

private:
    static void validate(const ConfusionPair& pair) {
        if (pair.from.empty() || pair.to.empty())
            throw ConfusionTableError("confusion pair sides must be non-empty");
        if (pair.from == pair.to) throw ConfusionTableError("confusion pair sides must differ");
        if (pair.from.size() > kMaxPatternLength || pair.to.size() > kMaxPatternLength)
            throw ConfusionTableError("confusion pair sides must be at most 3 scalars");
        for (char32_t cp : pair.from)
            if (uni::is_white_space(cp)) throw ConfusionTableError("confusion patterns must not contain spaces");
        for (char32_t cp : pair.to)
            if (uni::is_white_space(cp)) throw ConfusionTableError("confusion patterns must not contain spaces");
    }

    std::vector<ConfusionPair> pairs_;
};

// Built-in table: the long-s confusions plus ligature decompositions observed
// in eighteenth-century print. User tables extend or replace it via
// load_confusion_table.
inline ConfusionTable default_confusion_table() {
    ConfusionTable t;
    const auto glyph = [&](std::u32string from, std::u32string to) {
        t.add(ConfusionPair{std::move(from), std::move(to), ConfusionCategory::Glyph});
    };
    const auto graphemic = [&](std::u32string from, std::u32string to) {
        t.add(ConfusionPair{std::move(from), std::move(to), ConfusionCategory::NormalizationGraphemic});
    };
    glyph(U"ſ", U"s");
    glyph(U"ſ", U"f");
    glyph(U"f", U"ſ");
    glyph(U"s", U"ſ");
    graphemic(U"ſ", U"s");
    graphemic(U"æ", U"ae");
    graphemic(U"Æ", U"Ae");
    graphemic(U"Æ", U"AE");
    graphemic(U"œ", U"oe");
    graphemic(U"Œ", U"Oe");
    graphemic(U"ﬀ", U"ff");
    graphemic(U"ﬁ", U"fi");
    graphemic(U"ﬂ", U"fl");
    graphemic(U"ﬃ", U"ffi");
    graphemic(U"ﬄ", U"ffl");
    graphemic(U"ﬅ", U"st");
    graphemic(U"ﬆ", U"st");
    return t;
}

// Config format: one pair per line, `from<TAB>to<TAB>category` with category
// in {glyph, normalization-graphemic, normalization-lexical}. '#' comments
// and blank lines are skipped.
inline ConfusionTable load_confusion_table(std::istream& in) {
    ConfusionTable t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab1 = line.find('\t');
        const std::size_t tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos)
            throw ConfusionTableError("confusion table line " + std::to_string(line_no) +
                                      ": expected from<TAB>to<TAB>category");
        const std::string cat = line.substr(tab2 + 1);
        ConfusionCategory category;
        if (cat == "glyph") {
            category = ConfusionCategory::Glyph;
        } else if (cat == "normalization-graphemic") {
            category = ConfusionCategory::NormalizationGraphemic;
        } else if (cat == "normalization-lexical") {
            category = ConfusionCategory::NormalizationLexical;
        } else {
            throw ConfusionTableError("confusion table line " + std::to_string(line_no) +
                                      ": unknown category '" + cat + "'");
        }
        try {
            t.add(ConfusionPair{uni::decode_utf8(line.substr(0, tab1)),
                                uni::decode_utf8(line.substr(tab1 + 1, tab2 - tab1 - 1)), category});
        } catch (const ConfusionTableError& e) {
            throw ConfusionTableError("confusion table line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Classifiers

// Word-level proxies (Table-3 style): every Substitute/Insert link whose
// hypothesis token has no equal reference token yields RealWord when the
// hypothesis token is attested, else NonWord. Deletions surface in WER only.
inline std::vector<ProxyEvent> classify_word_errors(const TokenAlignment& ta, const Lexicon& lex,
                                                    std::string_view line_id = {}) {
    std::vector<ProxyEvent> events;
    std::size_t insert_anchor = 0; // last scalar of the preceding reference token
    for (const TokenLink& link : ta.links) {
        if (link.ref_index) {
            const Token& ref = ta.ref_tokens[*link.ref_index];
            insert_anchor = ref.end > 0 ? ref.end - 1 : 0;
        }
        if (link.kind != EditKind::Substitute && link.kind != EditKind::Insert) continue;
        const Token& hyp = ta.hyp_tokens[*link.hyp_index];
        ProxyEvent ev;
        ev.kind = contains(lex, hyp) ? ProxyKind::RealWord : ProxyKind::NonWord;
        ev.line_id = std::string(line_id);
        ev.hyp_surface = hyp.text;
        if (link.ref_index) {
            const Token& ref = ta.ref_tokens[*link.ref_index];
            ev.ref_surface = ref.text;
            ev.ref_offset = ref.start;
            ev.ref_attested = contains(lex, ref);
        } else {
            ev.ref_offset = insert_anchor;
        }
        events.push_back(std::move(ev));
    }
    return events;
}

namespace detail_taxonomy {

inline bool punctuation_near(std::u32string_view s, std::size_t center, std::size_t radius) {
    const std::size_t lo = center >= radius ? center - radius : 0;
    for (std::size_t i = lo; i <= center + radius && i < s.size(); ++i)
        if (uni::is_punctuation(s[i])) return true;
    return false;
}

inline std::u32string excerpt(std::u32string_view s, std::size_t center, std::size_t radius = 5) {
    const std::size_t lo = center >= radius ? center - radius : 0;
    const std::size_t hi = std::min(s.size(), center + radius + 1);
    return std::u32string(s.substr(lo, hi - lo));
}

} // namespace detail_taxonomy

// Boundary proxies, defined directly on space-involving edit ops: inserted
// space = split, deleted space = merge, substitution with a space on exactly
// one side = the corresponding kind. The punctuation flag checks a radius of
// one scalar around the op in both strings.
inline std::vector<ProxyEvent> detect_boundary_errors(const NormalizedText& ref, const NormalizedText& hyp,
                                                      const CharAlignment& ca,
                                                      std::string_view line_id = {}) {
    std::vector<ProxyEvent> events;
    std::size_t last_ref = 0, last_hyp = 0;
    for (const EditOp& op : ca.ops) {
        const std::size_t ref_pos = op.ref_index ? *op.ref_index : last_ref;
        const std::size_t hyp_pos = op.hyp_index ? *op.hyp_index : last_hyp;
        if (op.ref_index) last_ref = *op.ref_index;
        if (op.hyp_index) last_hyp = *op.hyp_index;
        if (op.kind == EditKind::Match) continue;

        const bool ref_space = op.ref_index && op.ref_scalar == U' ';
        const bool hyp_space = op.hyp_index && op.hyp_scalar == U' ';
        std::optional<ProxyKind> kind;
        if (op.kind == EditKind::Insert && hyp_space) kind = ProxyKind::BoundarySplit;
        if (op.kind == EditKind::Delete && ref_space) kind = ProxyKind::BoundaryMerge;
        if (op.kind == EditKind::Substitute && hyp_space && !ref_space) kind = ProxyKind::BoundarySplit;
        if (op.kind == EditKind::Substitute && ref_space && !hyp_space) kind = ProxyKind::BoundaryMerge;
        if (!kind) continue;

        ProxyEvent ev;
        ev.kind = *kind;
        ev.line_id = std::string(line_id);
        ev.ref_offset = ref_pos;
        ev.punctuation_related = detail_taxonomy::punctuation_near(ref.content, ref_pos, 1) ||
                                 detail_taxonomy::punctuation_near(hyp.content, hyp_pos, 1);
        ev.ref_surface = detail_taxonomy::excerpt(ref.content, ref_pos);
        ev.hyp_surface = detail_taxonomy::excerpt(hyp.content, hyp_pos);
        events.push_back(std::move(ev));
    }
    return events;
}

namespace detail_taxonomy {

// Op-index range [begin, end) of a matched pattern window.
struct WindowRange {
    std::size_t begin;
    std::size_t end;
};

// Greedy left-to-right scan of maximal non-Match runs: at each position try
// window lengths 3, 2, 1 (never crossing a Match); the first window whose
// (ref-side, hyp-side) scalar sequences form a table pair of `category` is
// consumed whole.
inline std::vector<ProxyEvent> scan_confusion_windows(const CharAlignment& ca, const ConfusionTable& table,
                                                      ConfusionCategory category, ProxyKind kind,
                                                      std::string_view line_id,
                                                      std::vector<WindowRange>* ranges = nullptr) {
    std::vector<ProxyEvent> events;
    const auto& ops = ca.ops;
    std::size_t i = 0;
    std::size_t last_ref = 0;
    while (i < ops.size()) {
        if (ops[i].kind == EditKind::Match) {
            last_ref = *ops[i].ref_index;
            ++i;
            continue;
        }
        std::size_t run_end = i;
        while (run_end < ops.size() && ops[run_end].kind != EditKind::Match) ++run_end;

        std::size_t pos = i;
        while (pos < run_end) {
            bool matched = false;
            const std::size_t max_len = std::min<std::size_t>(3, run_end - pos);
            for (std::size_t len = max_len; len >= 1 && !matched; --len) {
                std::u32string from, to;
                for (std::size_t k = pos; k < pos + len; ++k) {
                    if (ops[k].ref_index) from.push_back(ops[k].ref_scalar);
                    if (ops[k].hyp_index) to.push_back(ops[k].hyp_scalar);
                }
                if (!table.contains(from, to, category)) continue;
                ProxyEvent ev;
                ev.kind = kind;
                ev.line_id = std::string(line_id);
                ev.pattern_from = from;
                ev.pattern_to = to;
                ev.ref_offset = ops[pos].ref_index ? *ops[pos].ref_index : last_ref;
                events.push_back(std::move(ev));
                if (ranges) ranges->push_back(WindowRange{pos, pos + len});
                for (std::size_t k = pos; k < pos + len; ++k)
                    if (ops[k].ref_index) last_ref = *ops[k].ref_index;
                pos += len;
                matched = true;
            }
            if (!matched) {
                if (ops[pos].ref_index) last_ref = *ops[pos].ref_index;
                ++pos;
            }
        }
        i = run_end;
    }
    return events;
}

} // namespace detail_taxonomy

// Systematic substitutions between historically distinct glyph forms.
inline std::vector<ProxyEvent> detect_glyph_confusions(const CharAlignment& ca, const ConfusionTable& table,
                                                       std::string_view line_id = {}) {
    return detail_taxonomy::scan_confusion_windows(ca, table, ConfusionCategory::Glyph,
                                                   ProxyKind::GlyphConfusion, line_id);
}

// Lexically motivated modernizations: a substituted token pair where the
// reference form is attested only historically, the hypothesis form is
// attested in the modern lexicon, and the two stay within edit distance 2
// after graphemic decomposition (so æ->ae style rewrites inside the token do
// not inflate the distance).
inline std::vector<ProxyEvent> detect_lexical_normalizations(const TokenAlignment& ta,
                                                             const Lexicon& historical, const Lexicon& modern,
                                                             std::string_view line_id = {}) {
    std::vector<ProxyEvent> events;
    for (const TokenLink& link : ta.links) {
        if (link.kind != EditKind::Substitute) continue;
        const Token& ref = ta.ref_tokens[*link.ref_index];
        const Token& hyp = ta.hyp_tokens[*link.hyp_index];
        if (!contains(historical, ref) || contains(modern, ref)) continue;
        if (!contains(modern, hyp)) continue;
        const std::u32string ref_folded = decompose_graphemes(ref.text);
        const std::u32string hyp_folded = decompose_graphemes(hyp.text);
        if (char_align(ref_folded, hyp_folded).distance > 2) continue;
        ProxyEvent ev;
        ev.kind = ProxyKind::NormalizationLexical;
        ev.line_id = std::string(line_id);
        ev.ref_surface = ref.text;
        ev.hyp_surface = hyp.text;
        ev.ref_offset = ref.start;
        ev.pattern_from = ref.text;
        ev.pattern_to = hyp.text;
        events.push_back(std::move(ev));
    }
    return events;
}

// Orthographic normalization events: graphemic ones from table windows
// (ligature decompositions, long-s modernization), lexical ones from token
// substitutions that move a historically attested form to a modern one.
// Without a modern lexicon only graphemic events are produced; callers should
// surface that in their report.
inline std::vector<ProxyEvent> detect_normalizations(const TokenAlignment& ta, const CharAlignment& ca,
                                                     const ConfusionTable& table, const Lexicon& historical,
                                                     const Lexicon* modern, std::string_view line_id = {}) {
    std::vector<ProxyEvent> events = detail_taxonomy::scan_confusion_windows(
        ca, table, ConfusionCategory::NormalizationGraphemic, ProxyKind::NormalizationGraphemic, line_id);
    for (ProxyEvent& ev : detail_taxonomy::scan_confusion_windows(
             ca, table, ConfusionCategory::NormalizationLexical, ProxyKind::NormalizationLexical, line_id))
        events.push_back(std::move(ev));
    if (modern != nullptr) {
        for (ProxyEvent& ev : detect_lexical_normalizations(ta, historical, *modern, line_id))
            events.push_back(std::move(ev));
    }
    return events;
}

// All proxy events of one line, word events carrying their overlap flags.
struct LineClassification {
    std::vector<ProxyEvent> word_events;
    std::vector<ProxyEvent> boundary_events;
    std::vector<ProxyEvent> glyph_events;
    std::vector<ProxyEvent> normalization_events;
    bool lexical_detection_enabled = false;
};

// Runs every classifier over one aligned line and flags word events whose
// tokens were touched by a boundary op or a matched pattern window. Those
// flags let reports separate genuine word substitutions from the word-level
// shadow of structural errors.
inline LineClassification classify_line(const NormalizedText& ref, const NormalizedText& hyp,
                                        const CharAlignment& ca, const TokenAlignment& ta,
                                        const ConfusionTable& table, const Lexicon& historical,
                                        const Lexicon* modern, std::string_view line_id = {}) {
    LineClassification out;
    out.lexical_detection_enabled = modern != nullptr;
    out.word_events = classify_word_errors(ta, historical, line_id);
    out.boundary_events = detect_boundary_errors(ref, hyp, ca, line_id);

    std::vector<detail_taxonomy::WindowRange> windows;
    out.glyph_events = detail_taxonomy::scan_confusion_windows(
        ca, table, ConfusionCategory::Glyph, ProxyKind::GlyphConfusion, line_id, &windows);
    out.normalization_events = detail_taxonomy::scan_confusion_windows(
        ca, table, ConfusionCategory::NormalizationGraphemic, ProxyKind::NormalizationGraphemic, line_id,
        &windows);
    for (ProxyEvent& ev : detail_taxonomy::scan_confusion_windows(
             ca, table, ConfusionCategory::NormalizationLexical, ProxyKind::NormalizationLexical, line_id,
             &windows))
        out.normalization_events.push_back(std::move(ev));
    if (modern != nullptr) {
        for (ProxyEvent& ev : detect_lexical_normalizations(ta, historical, *modern, line_id))
            out.normalization_events.push_back(std::move(ev));
    }

    // Scalar masks of structurally affected positions.
    std::vector<bool> ref_mask(ca.ref_length, false);
    std::vector<bool> hyp_mask(ca.hyp_length, false);
    const auto mark = [](std::vector<bool>& mask, std::size_t pos, std::size_t radius) {
        const std::size_t lo = pos >= radius ? pos - radius : 0;
        for (std::size_t i = lo; i <= pos + radius && i < mask.size(); ++i) mask[i] = true;
    };
    std::size_t last_ref = 0, last_hyp = 0;
    for (const EditOp& op : ca.ops) {
        const std::size_t ref_pos = op.ref_index ? *op.ref_index : last_ref;
        const std::size_t hyp_pos = op.hyp_index ? *op.hyp_index : last_hyp;
        if (op.ref_index) last_ref = *op.ref_index;
        if (op.hyp_index) last_hyp = *op.hyp_index;
        if (op.kind == EditKind::Match) continue;
        const bool space_op = (op.ref_index && op.ref_scalar == U' ') || (op.hyp_index && op.hyp_scalar == U' ');
        if (!space_op) continue;
        // Radius 1 covers both tokens adjacent to the affected space.
        mark(ref_mask, ref_pos, 1);
        mark(hyp_mask, hyp_pos, 1);
    }
    for (const auto& w : windows) {
        for (std::size_t k = w.begin; k < w.end; ++k) {
            if (ca.ops[k].ref_index) mark(ref_mask, *ca.ops[k].ref_index, 0);
            if (ca.ops[k].hyp_index) mark(hyp_mask, *ca.ops[k].hyp_index, 0);
        }
    }

    const auto token_masked = [](const std::vector<bool>& mask, const Token& t) {
        for (std::size_t i = t.start; i < t.end && i < mask.size(); ++i)
            if (mask[i]) return true;
        return false;
    };

    // classify_word_errors emits one event per Substitute/Insert link, in link
    // order; walk the links in lockstep to recover each event's tokens.
    std::size_t ev_idx = 0;
    for (const TokenLink& link : ta.links) {
        if (link.kind != EditKind::Substitute && link.kind != EditKind::Insert) continue;
        ProxyEvent& ev = out.word_events[ev_idx++];
        bool overlap = token_masked(hyp_mask, ta.hyp_tokens[*link.hyp_index]);
        if (!overlap && link.ref_index) overlap = token_masked(ref_mask, ta.ref_tokens[*link.ref_index]);
        ev.overlaps_structural = overlap;
    }
    return out;
}

} // namespace histocr
