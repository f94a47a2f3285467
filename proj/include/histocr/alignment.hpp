#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "histocr/textnorm.hpp"

namespace histocr {

enum class EditKind : std::uint8_t { Match, Substitute, Insert, Delete };

inline const char* to_string(EditKind k) {
    switch (k) {
        case EditKind::Match: return "match";
        case EditKind::Substitute: return "substitute";
        case EditKind::Insert: return "insert";
        case EditKind::Delete: return "delete";
    }
    return "?";
}

// One step of a character alignment. Insert consumes only the hypothesis,
// Delete only the reference; the index for the unconsumed side is absent.
struct EditOp {
    EditKind kind;
    std::optional<std::size_t> ref_index;
    std::optional<std::size_t> hyp_index;
    char32_t ref_scalar = 0; // valid when ref_index is set
    char32_t hyp_scalar = 0; // valid when hyp_index is set
};

struct CharAlignment {
    std::vector<EditOp> ops;
    std::size_t distance = 0; // number of non-Match ops; minimal under unit costs
    std::size_t ref_length = 0;
    std::size_t hyp_length = 0;
};

struct Token {
    std::u32string text;
    std::size_t start = 0; // scalar offset into the parent normalized text
    std::size_t end = 0;   // one past the last scalar

    bool operator==(const Token&) const = default;
};

struct TokenLink {
    EditKind kind;
    std::optional<std::size_t> ref_index; // index into the reference token sequence
    std::optional<std::size_t> hyp_index;
};

struct TokenAlignment {
    std::vector<TokenLink> links;
    std::size_t word_distance = 0;
    std::vector<Token> ref_tokens;
    std::vector<Token> hyp_tokens;
};

// Maximal run of consecutive non-Match ops, located on the reference side.
// Offsets are inclusive; insertions anchor to the preceding reference scalar.
struct ErrorSpan {
    std::size_t start_ref = 0;
    std::size_t end_ref = 0;
    std::size_t op_count = 0;
};

namespace detail_align {

// Shared unit-cost DP with the fixed tie-break Match > Substitute > Delete >
// Insert, applied at every cell during traceback. `Eq` decides element
// equality; the same routine serves scalars and tokens.
template <typename T, typename Eq, typename EmitOp>
std::size_t levenshtein_align(const T* ref, std::size_t n, const T* hyp, std::size_t m, Eq eq, EmitOp emit) {
    std::vector<std::uint32_t> cost((n + 1) * (m + 1));
    const auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
    for (std::size_t i = 0; i <= n; ++i) cost[at(i, 0)] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 0; j <= m; ++j) cost[at(0, j)] = static_cast<std::uint32_t>(j);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            const std::uint32_t diag = cost[at(i - 1, j - 1)] + (eq(ref[i - 1], hyp[j - 1]) ? 0u : 1u);
            const std::uint32_t del = cost[at(i - 1, j)] + 1u;
            const std::uint32_t ins = cost[at(i, j - 1)] + 1u;
            cost[at(i, j)] = std::min(diag, std::min(del, ins));
        }
    }

    // Traceback. Match and Substitute share the diagonal move and are mutually
    // exclusive, so the preference order reduces to: diagonal, then Delete,
    // then Insert, whenever the move reproduces the cell's cost.
    std::vector<EditKind> reversed;
    reversed.reserve(n + m);
    std::size_t i = n, j = m;
    while (i > 0 || j > 0) {
        const std::uint32_t c = cost[at(i, j)];
        if (i > 0 && j > 0) {
            const bool equal = eq(ref[i - 1], hyp[j - 1]);
            if (cost[at(i - 1, j - 1)] + (equal ? 0u : 1u) == c) {
                reversed.push_back(equal ? EditKind::Match : EditKind::Substitute);
                --i;
                --j;
                continue;
            }
        }
        if (i > 0 && cost[at(i - 1, j)] + 1u == c) {
            reversed.push_back(EditKind::Delete);
            --i;
            continue;
        }
        reversed.push_back(EditKind::Insert);
        --j;
    }

    std::size_t ri = 0, hi = 0;
    for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) {
        emit(*it, ri, hi);
        switch (*it) {
            case EditKind::Match:
            case EditKind::Substitute: ++ri; ++hi; break;
            case EditKind::Delete: ++ri; break;
            case EditKind::Insert: ++hi; break;
        }
    }
    return cost[at(n, m)];
}

} // namespace detail_align

// Character-level alignment between two scalar sequences under unit costs.
// Deterministic: ties resolve as Match > Substitute > Delete > Insert.
inline CharAlignment char_align(std::u32string_view ref, std::u32string_view hyp) {
    CharAlignment out;
    out.ref_length = ref.size();
    out.hyp_length = hyp.size();
    out.ops.reserve(ref.size() + hyp.size());
    out.distance = detail_align::levenshtein_align(
        ref.data(), ref.size(), hyp.data(), hyp.size(),
        [](char32_t a, char32_t b) { return a == b; },
        [&](EditKind kind, std::size_t ri, std::size_t hi) {
            EditOp op;
            op.kind = kind;
            if (kind != EditKind::Insert) {
                op.ref_index = ri;
                op.ref_scalar = ref[ri];
            }
            if (kind != EditKind::Delete) {
                op.hyp_index = hi;
                op.hyp_scalar = hyp[hi];
            }
            out.ops.push_back(op);
        });
    return out;
}

inline CharAlignment char_align(const NormalizedText& ref, const NormalizedText& hyp) {
    return char_align(std::u32string_view(ref.content), std::u32string_view(hyp.content));
}

// Splits normalized text on its single spaces. Punctuation stays attached.
inline std::vector<Token> tokenize(const NormalizedText& text) {
    std::vector<Token> tokens;
    const std::u32string& s = text.content;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == U' ') {
            if (i > start) tokens.push_back(Token{s.substr(start, i - start), start, i});
            start = i + 1;
        }
    }
    return tokens;
}

// Token-level alignment with exact string equality; same tie-break policy as
// char_align.
inline TokenAlignment token_align(std::vector<Token> ref_tokens, std::vector<Token> hyp_tokens) {
    TokenAlignment out;
    out.ref_tokens = std::move(ref_tokens);
    out.hyp_tokens = std::move(hyp_tokens);
    out.links.reserve(out.ref_tokens.size() + out.hyp_tokens.size());
    out.word_distance = detail_align::levenshtein_align(
        out.ref_tokens.data(), out.ref_tokens.size(), out.hyp_tokens.data(), out.hyp_tokens.size(),
        [](const Token& a, const Token& b) { return a.text == b.text; },
        [&](EditKind kind, std::size_t ri, std::size_t hi) {
            TokenLink link;
            link.kind = kind;
            if (kind != EditKind::Insert) link.ref_index = ri;
            if (kind != EditKind::Delete) link.hyp_index = hi;
            out.links.push_back(link);
        });
    return out;
}

// Anchor of an op on the reference side: its own ref index, or for Insert the
// index of the most recently consumed reference scalar (0 at line start).
inline std::size_t ref_anchor(const EditOp& op, std::size_t last_consumed_ref) {
    if (op.ref_index) return *op.ref_index;
    return last_consumed_ref;
}

// Maximal contiguous runs of non-Match ops.
inline std::vector<ErrorSpan> error_spans(const CharAlignment& a) {
    std::vector<ErrorSpan> spans;
    std::size_t last_ref = 0;
    bool in_span = false;
    for (const EditOp& op : a.ops) {
        if (op.kind == EditKind::Match) {
            last_ref = *op.ref_index;
            in_span = false;
            continue;
        }
        const std::size_t anchor = ref_anchor(op, last_ref);
        if (op.ref_index) last_ref = *op.ref_index;
        if (in_span) {
            ErrorSpan& s = spans.back();
            s.start_ref = std::min(s.start_ref, anchor);
            s.end_ref = std::max(s.end_ref, anchor);
            ++s.op_count;
        } else {
            spans.push_back(ErrorSpan{anchor, anchor, 1});
            in_span = true;
        }
    }
    return spans;
}

} // namespace histocr
