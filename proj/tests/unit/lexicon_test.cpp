#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "histocr/lexicon.hpp"

using histocr::build_lexicon;
using histocr::contains;
using histocr::Lexicon;
using histocr::LexiconError;
using histocr::lexicon_key;
using histocr::load_lexicon;
using histocr::save_lexicon;
using histocr::Token;

namespace {

std::function<std::optional<std::string>()> from_lines(std::vector<std::string> lines) {
    auto holder = std::make_shared<std::vector<std::string>>(std::move(lines));
    auto index = std::make_shared<std::size_t>(0);
    return [holder, index]() -> std::optional<std::string> {
        if (*index >= holder->size()) return std::nullopt;
        return (*holder)[(*index)++];
    };
}

Token tok(std::u32string text) { return Token{std::move(text), 0, 0}; }

} // namespace

TEST_CASE("build collects folded tokens at min frequency 1") {
    const Lexicon lex = build_lexicon(from_lines({"the cat", "the dog"}), 1);
    CHECK(lex.size() == 3);
    CHECK(contains(lex, tok(U"the")));
    CHECK(contains(lex, tok(U"cat")));
    CHECK(contains(lex, tok(U"dog")));
    CHECK_FALSE(contains(lex, tok(U"bird")));
}

TEST_CASE("min frequency filters and long-s entries gain decomposed variants") {
    const Lexicon lex = build_lexicon(from_lines({"pre\xc5\xbf" "ent pre\xc5\xbf" "ent"}), 2);
    CHECK(contains(lex, tok(U"preſent")));
    CHECK(contains(lex, tok(U"present"))); // decomposed variant attested too
    CHECK(lex.size() == 2);
}

TEST_CASE("empty results are errors") {
    CHECK_THROWS_AS(build_lexicon(from_lines({"pre\xc5\xbf" "ent pre\xc5\xbf" "ent"}), 3), LexiconError);
    CHECK_THROWS_AS(build_lexicon(from_lines({}), 1), LexiconError);
    CHECK_THROWS_AS(build_lexicon(from_lines({"the"}), 0), std::invalid_argument);
}

TEST_CASE("contains strips attached punctuation and folds case") {
    const Lexicon lex = build_lexicon(from_lines({"futurity"}), 1);
    CHECK(contains(lex, tok(U"futurity,")));
    CHECK(contains(lex, tok(U"Futurity")));
    CHECK(contains(lex, tok(U"“futurity”")));
    CHECK_FALSE(contains(lex, tok(U"ſuturity")));
    CHECK_FALSE(contains(lex, tok(U"")));
    CHECK_FALSE(contains(lex, tok(U",.;")));
}

TEST_CASE("internal punctuation is part of the key") {
    const Lexicon lex = build_lexicon(from_lines({"to-day o'clock"}), 1);
    CHECK(contains(lex, tok(U"to-day")));
    CHECK(contains(lex, tok(U"o'clock")));
    CHECK_FALSE(contains(lex, tok(U"today")));
}

TEST_CASE("fold consistency") {
    const Lexicon lex = build_lexicon(from_lines({"The Cat, sat."}), 1);
    for (const std::u32string t : {U"Cat,", U"cat", U"CAT.", U"sat", U"The"}) {
        CHECK(contains(lex, tok(t)) == lex.contains_key(lexicon_key(t)));
        CHECK(contains(lex, tok(t)));
    }
}

TEST_CASE("lowering min frequency never removes entries") {
    const std::vector<std::string> corpus = {"a a a b b c", "d d e"};
    const Lexicon strict = build_lexicon(from_lines(corpus), 2);
    const Lexicon loose = build_lexicon(from_lines(corpus), 1);
    for (const auto& key : strict.entries()) CHECK(loose.contains_key(key));
    CHECK(loose.size() >= strict.size());
}

TEST_CASE("ligature entries are attested in both spellings") {
    const Lexicon lex = build_lexicon(from_lines({"ﬁne Cæſar"}), 1);
    CHECK(contains(lex, tok(U"ﬁne")));
    CHECK(contains(lex, tok(U"fine")));
    CHECK(contains(lex, tok(U"Cæſar")));
    CHECK(contains(lex, tok(U"caesar"))); // æ -> ae and ſ -> s
}

TEST_CASE("save and load round-trip including metadata") {
    histocr::LexiconMetadata meta;
    meta.sources = {"corpusA.txt", "corpusB.txt"};
    meta.built_at = "2026-08-10T00:00:00Z";
    const Lexicon lex = build_lexicon(from_lines({"the cat pre\xc5\xbf" "ent"}), 1, meta);

    std::stringstream buffer;
    save_lexicon(lex, buffer);
    const Lexicon loaded = load_lexicon(buffer);

    CHECK(loaded.entries() == lex.entries());
    CHECK(loaded.metadata().sources == lex.metadata().sources);
    CHECK(loaded.metadata().built_at == lex.metadata().built_at);
    CHECK(loaded.metadata().fold_policy == lex.metadata().fold_policy);
    CHECK(loaded.metadata().min_frequency == lex.metadata().min_frequency);
}

TEST_CASE("truncated lexicon files are rejected") {
    const Lexicon lex = build_lexicon(from_lines({"alpha beta gamma"}), 1);
    std::stringstream buffer;
    save_lexicon(lex, buffer);
    std::string text = buffer.str();
    text.resize(text.rfind('\n', text.size() - 2) + 1); // drop the last entry
    std::stringstream truncated(text);
    CHECK_THROWS_AS(load_lexicon(truncated), LexiconError);
}

TEST_CASE("unsupported format versions are rejected") {
    std::stringstream future("# histocr-lexicon format=99\n# entries=0\n");
    CHECK_THROWS_AS(load_lexicon(future), LexiconError);
    std::stringstream garbage("not a lexicon\n");
    CHECK_THROWS_AS(load_lexicon(garbage), LexiconError);
    std::stringstream empty("");
    CHECK_THROWS_AS(load_lexicon(empty), LexiconError);
}

TEST_CASE("default-constructed lexicon attests nothing") {
    const Lexicon empty;
    CHECK(empty.empty());
    CHECK_FALSE(contains(empty, tok(U"anything")));
}

TEST_CASE("build is deterministic for fixed input") {
    const std::vector<std::string> corpus = {"zeta alpha", "alpha beta", "Beta ZETA"};
    const Lexicon a = build_lexicon(from_lines(corpus), 1);
    const Lexicon b = build_lexicon(from_lines(corpus), 1);
    CHECK(a.entries() == b.entries());
    std::stringstream sa, sb;
    save_lexicon(a, sa);
    save_lexicon(b, sb);
    CHECK(sa.str() == sb.str());
}
