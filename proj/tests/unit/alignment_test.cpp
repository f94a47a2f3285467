#include <catch2/catch_amalgamated.hpp>

#include "histocr/alignment.hpp"
#include "histocr/rng.hpp"
#include "histocr/textnorm.hpp"

#include "../support/oracles.hpp"

using histocr::char_align;
using histocr::CharAlignment;
using histocr::EditKind;
using histocr::error_spans;
using histocr::normalize;
using histocr::Token;
using histocr::token_align;
using histocr::tokenize;

namespace {

std::u32string random_string(histocr::SplitMix64& rng, std::u32string_view alphabet, std::size_t max_len) {
    std::u32string s;
    const std::size_t len = rng.below(max_len + 1);
    for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.below(alphabet.size())]);
    return s;
}

void check_well_formed(const CharAlignment& a, std::u32string_view ref, std::u32string_view hyp) {
    std::u32string rebuilt_ref, rebuilt_hyp;
    std::size_t non_match = 0;
    std::size_t next_ref = 0, next_hyp = 0;
    for (const auto& op : a.ops) {
        if (op.kind != EditKind::Match) ++non_match;
        if (op.ref_index) {
            REQUIRE(*op.ref_index == next_ref);
            ++next_ref;
            rebuilt_ref.push_back(op.ref_scalar);
        }
        if (op.hyp_index) {
            REQUIRE(*op.hyp_index == next_hyp);
            ++next_hyp;
            rebuilt_hyp.push_back(op.hyp_scalar);
        }
        if (op.kind == EditKind::Match) REQUIRE(op.ref_scalar == op.hyp_scalar);
        if (op.kind == EditKind::Substitute) REQUIRE(op.ref_scalar != op.hyp_scalar);
    }
    REQUIRE(rebuilt_ref == ref);
    REQUIRE(rebuilt_hyp == hyp);
    REQUIRE(non_match == a.distance);
}

} // namespace

TEST_CASE("long-s substitution aligns as a single substitute at index 0") {
    const auto a = char_align(U"futurity", U"ſuturity");
    REQUIRE(a.distance == 1);
    REQUIRE(a.ops.size() == 8);
    CHECK(a.ops[0].kind == EditKind::Substitute);
    CHECK(a.ops[0].ref_scalar == U'f');
    CHECK(a.ops[0].hyp_scalar == U'ſ');
    CHECK(*a.ops[0].ref_index == 0);
    for (std::size_t i = 1; i < a.ops.size(); ++i) CHECK(a.ops[i].kind == EditKind::Match);
}

TEST_CASE("identity alignment is all matches") {
    const auto a = char_align(U"abc", U"abc");
    CHECK(a.distance == 0);
    REQUIRE(a.ops.size() == 3);
    for (const auto& op : a.ops) CHECK(op.kind == EditKind::Match);
}

TEST_CASE("kitten-sitting distance") {
    REQUIRE(oracle::naive_edit_distance(U"kitten", U"sitting") == 3);
    CHECK(char_align(U"kitten", U"sitting").distance == 3);
}

TEST_CASE("empty inputs") {
    CHECK(char_align(U"", U"").ops.empty());
    CHECK(char_align(U"", U"").distance == 0);
    const auto ins = char_align(U"", U"x");
    REQUIRE(ins.distance == 1);
    CHECK(ins.ops[0].kind == EditKind::Insert);
    const auto del = char_align(U"x", U"");
    REQUIRE(del.distance == 1);
    CHECK(del.ops[0].kind == EditKind::Delete);
}

TEST_CASE("tie-break prefers the diagonal, then delete, then insert") {
    // "ab" vs "ba" admits (S,S) and (I,M,D)-style tracebacks at cost 2.
    const auto a = char_align(U"ab", U"ba");
    REQUIRE(a.distance == 2);
    REQUIRE(a.ops.size() == 2);
    CHECK(a.ops[0].kind == EditKind::Substitute);
    CHECK(a.ops[1].kind == EditKind::Substitute);
}

TEST_CASE("alignment matches the naive oracle exhaustively on short strings") {
    const std::u32string alphabet = U"abſ ";
    std::vector<std::u32string> all;
    all.push_back(U"");
    std::size_t first = 0;
    for (int len = 1; len <= 3; ++len) {
        const std::size_t last = all.size();
        for (std::size_t i = first; i < last; ++i)
            for (char32_t c : alphabet) all.push_back(all[i] + c);
        first = last;
    }
    for (const auto& r : all) {
        for (const auto& h : all) {
            const auto a = char_align(r, h);
            REQUIRE(a.distance == oracle::naive_edit_distance(r, h));
            check_well_formed(a, r, h);
        }
    }
}

TEST_CASE("distance symmetry and triangle inequality on random strings") {
    histocr::SplitMix64 rng(7);
    const std::u32string alphabet = U"abcſæ ";
    for (int i = 0; i < 300; ++i) {
        const auto x = random_string(rng, alphabet, 8);
        const auto y = random_string(rng, alphabet, 8);
        const auto z = random_string(rng, alphabet, 8);
        const auto dxy = char_align(x, y).distance;
        CHECK(dxy == char_align(y, x).distance);
        CHECK(dxy <= char_align(x, z).distance + char_align(z, y).distance);
    }
}

TEST_CASE("tokenize splits on spaces with offsets") {
    const auto tokens = tokenize(normalize(U"ſummon it, 322."));
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0].text == U"ſummon");
    CHECK(tokens[0].start == 0);
    CHECK(tokens[0].end == 6);
    CHECK(tokens[1].text == U"it,");
    CHECK(tokens[1].start == 7);
    CHECK(tokens[2].text == U"322.");
    CHECK(tokens[2].end == 15);

    CHECK(tokenize(normalize(U"")).empty());
    const auto ab = tokenize(normalize(U"a b"));
    REQUIRE(ab.size() == 2);
    CHECK(ab[0].text == U"a");
    CHECK(ab[1].text == U"b");
}

TEST_CASE("token concatenation reproduces the parent text") {
    histocr::SplitMix64 rng(13);
    for (int i = 0; i < 100; ++i) {
        std::u32string raw = random_string(rng, U"abſ  ", 20);
        const auto norm = normalize(raw);
        const auto tokens = tokenize(norm);
        std::u32string joined;
        for (std::size_t t = 0; t < tokens.size(); ++t) {
            if (t) joined.push_back(U' ');
            joined += tokens[t].text;
        }
        REQUIRE(joined == norm.content);
    }
}

TEST_CASE("token alignment matches examples and oracle") {
    const auto equal = token_align(tokenize(normalize(U"the cat")), tokenize(normalize(U"the cat")));
    CHECK(equal.word_distance == 0);

    const auto sub = token_align(tokenize(normalize(U"tarded not")), tokenize(normalize(U"seemed not")));
    REQUIRE(sub.word_distance == 1);
    REQUIRE(sub.links[0].kind == EditKind::Substitute);
    CHECK(sub.ref_tokens[*sub.links[0].ref_index].text == U"tarded");
    CHECK(sub.hyp_tokens[*sub.links[0].hyp_index].text == U"seemed");

    const auto del = token_align(tokenize(normalize(U"a b c")), tokenize(normalize(U"a c")));
    REQUIRE(del.word_distance == 1);
    REQUIRE(oracle::naive_token_distance({U"a", U"b", U"c"}, {U"a", U"c"}) == 1);
    bool saw_delete_b = false;
    for (const auto& link : del.links)
        if (link.kind == EditKind::Delete && del.ref_tokens[*link.ref_index].text == U"b") saw_delete_b = true;
    CHECK(saw_delete_b);
}

TEST_CASE("token distance equals the naive token oracle on random sequences") {
    histocr::SplitMix64 rng(23);
    const std::vector<std::u32string> vocab = {U"a", U"b", U"cat", U"ſo", U"x,"};
    for (int i = 0; i < 200; ++i) {
        std::vector<std::u32string> r, h;
        for (std::size_t k = rng.below(5); k > 0; --k) r.push_back(vocab[rng.below(vocab.size())]);
        for (std::size_t k = rng.below(5); k > 0; --k) h.push_back(vocab[rng.below(vocab.size())]);
        std::vector<Token> rt, ht;
        for (const auto& t : r) rt.push_back(Token{t, 0, t.size()});
        for (const auto& t : h) ht.push_back(Token{t, 0, t.size()});
        CHECK(token_align(rt, ht).word_distance == oracle::naive_token_distance(r, h));
    }
}

TEST_CASE("error spans cover maximal non-match runs") {
    // ops M,S,S,M,D on "abcde" vs "axyd"
    const auto a = char_align(U"abcde", U"axyd");
    REQUIRE(a.distance == 3);
    const auto spans = error_spans(a);
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].start_ref == 1);
    CHECK(spans[0].end_ref == 2);
    CHECK(spans[0].op_count == 2);
    CHECK(spans[1].start_ref == 4);
    CHECK(spans[1].end_ref == 4);
    CHECK(spans[1].op_count == 1);
}

TEST_CASE("no spans for perfect alignment") {
    CHECK(error_spans(char_align(U"abc", U"abc")).empty());
}

TEST_CASE("two isolated substitutions give two unit spans") {
    const auto spans = error_spans(char_align(U"abcdef", U"axcxef"));
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].start_ref == 1);
    CHECK(spans[0].end_ref == 1);
    CHECK(spans[1].start_ref == 3);
    CHECK(spans[1].end_ref == 3);
}

TEST_CASE("insertions attach to the preceding reference position") {
    const auto mid = error_spans(char_align(U"ab", U"aXb"));
    REQUIRE(mid.size() == 1);
    CHECK(mid[0].start_ref == 0);
    CHECK(mid[0].end_ref == 0);
    CHECK(mid[0].op_count == 1);

    const auto lead = error_spans(char_align(U"ab", U"Xab"));
    REQUIRE(lead.size() == 1);
    CHECK(lead[0].start_ref == 0);
    CHECK(lead[0].op_count == 1);
}

TEST_CASE("span op counts sum to the distance") {
    histocr::SplitMix64 rng(31);
    const std::u32string alphabet = U"abſ ";
    for (int i = 0; i < 300; ++i) {
        const auto r = random_string(rng, alphabet, 10);
        const auto h = random_string(rng, alphabet, 10);
        const auto a = char_align(r, h);
        const auto spans = error_spans(a);
        std::size_t total = 0;
        for (std::size_t s = 0; s < spans.size(); ++s) {
            total += spans[s].op_count;
            if (s > 0) REQUIRE(spans[s - 1].end_ref <= spans[s].start_ref);
        }
        REQUIRE(total == a.distance);
    }
}
