#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "histocr/rng.hpp"
#include "histocr/taxonomy.hpp"

using histocr::char_align;
using histocr::classify_line;
using histocr::classify_word_errors;
using histocr::ConfusionCategory;
using histocr::ConfusionPair;
using histocr::ConfusionTable;
using histocr::ConfusionTableError;
using histocr::default_confusion_table;
using histocr::detect_boundary_errors;
using histocr::detect_glyph_confusions;
using histocr::detect_normalizations;
using histocr::Lexicon;
using histocr::load_confusion_table;
using histocr::normalize;
using histocr::ProxyEvent;
using histocr::ProxyKind;
using histocr::token_align;
using histocr::tokenize;

namespace {

Lexicon make_lexicon(const std::vector<std::string>& words) {
    auto index = std::make_shared<std::size_t>(0);
    auto holder = std::make_shared<std::vector<std::string>>(words);
    return histocr::build_lexicon(
        [holder, index]() -> std::optional<std::string> {
            if (*index >= holder->size()) return std::nullopt;
            return (*holder)[(*index)++];
        },
        1);
}

} // namespace

TEST_CASE("attested substitution is a real-word error") {
    const auto ref = normalize(U"rigorouſly enforced");
    const auto hyp = normalize(U"merely enforced");
    const Lexicon lex = make_lexicon({"rigorou\xc5\xbfly", "merely", "enforced"});
    const auto events = classify_word_errors(token_align(tokenize(ref), tokenize(hyp)), lex, "L1");
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == ProxyKind::RealWord);
    CHECK(events[0].ref_surface == U"rigorouſly");
    CHECK(events[0].hyp_surface == U"merely");
    CHECK(events[0].line_id == "L1");
    CHECK(events[0].ref_attested);
}

TEST_CASE("unattested substitution is a non-word error") {
    const auto ref = normalize(U"of futurity,");
    const auto hyp = normalize(U"of ſuturity,");
    const Lexicon lex = make_lexicon({"of", "futurity"});
    const auto events = classify_word_errors(token_align(tokenize(ref), tokenize(hyp)), lex);
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == ProxyKind::NonWord);
    CHECK(events[0].hyp_surface == U"ſuturity,");
}

TEST_CASE("identical token sequences produce no word events") {
    const auto ref = normalize(U"the cat");
    const Lexicon lex = make_lexicon({"the", "cat"});
    CHECK(classify_word_errors(token_align(tokenize(ref), tokenize(ref)), lex).empty());
}

TEST_CASE("inserted tokens are classified, dropped tokens are not") {
    const Lexicon lex = make_lexicon({"a", "b", "cat"});
    const auto ins = classify_word_errors(
        token_align(tokenize(normalize(U"a b")), tokenize(normalize(U"a cat b"))), lex);
    REQUIRE(ins.size() == 1);
    CHECK(ins[0].kind == ProxyKind::RealWord);
    CHECK(ins[0].hyp_surface == U"cat");

    const auto del = classify_word_errors(
        token_align(tokenize(normalize(U"a cat b")), tokenize(normalize(U"a b"))), lex);
    CHECK(del.empty());
}

TEST_CASE("deleted space is a plain merge") {
    const auto ref = normalize(U"the cat");
    const auto hyp = normalize(U"thecat");
    const auto events = detect_boundary_errors(ref, hyp, char_align(ref, hyp));
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == ProxyKind::BoundaryMerge);
    CHECK_FALSE(events[0].punctuation_related);
}

TEST_CASE("split next to a hyphen is punctuation-related") {
    const auto ref = normalize(U"covenant-");
    const auto hyp = normalize(U"covenant -");
    const auto events = detect_boundary_errors(ref, hyp, char_align(ref, hyp));
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == ProxyKind::BoundarySplit);
    CHECK(events[0].punctuation_related);
}

TEST_CASE("equal strings produce no boundary events") {
    const auto ref = normalize(U"the cat");
    CHECK(detect_boundary_errors(ref, ref, char_align(ref, ref)).empty());
}

TEST_CASE("substitutions involving a space on one side count as boundary errors") {
    const auto ref = normalize(U"a-b");
    const auto hyp = normalize(U"a b");
    const auto split = detect_boundary_errors(ref, hyp, char_align(ref, hyp));
    REQUIRE(split.size() == 1);
    CHECK(split[0].kind == ProxyKind::BoundarySplit);
    CHECK(split[0].punctuation_related); // the replaced hyphen is category Pd

    const auto merge = detect_boundary_errors(hyp, ref, char_align(hyp, ref));
    REQUIRE(merge.size() == 1);
    CHECK(merge[0].kind == ProxyKind::BoundaryMerge);
}

TEST_CASE("isolated whitespace edits decompose exactly into splits and merges") {
    // Dense space rearrangements can admit equal-cost letter-shift alignments
    // under the Match > Substitute > Delete > Insert tie-break, so the
    // completeness guarantee applies to isolated edits (>= 3 scalars apart),
    // the regime the boundary proxies describe.
    histocr::SplitMix64 rng(83);
    const std::u32string letters = U"abcdefghijklmnopqrstuvwxyz";
    for (int round = 0; round < 300; ++round) {
        std::u32string ref;
        for (std::size_t i = 0; i < letters.size(); ++i) {
            ref.push_back(letters[i]);
            if (i + 1 < letters.size() && rng.below(4) == 0) ref.push_back(U' ');
        }
        // Apply isolated single-space edits spaced >= 3 scalars apart.
        std::u32string hyp = ref;
        std::size_t planted = 0;
        std::size_t pos = 2;
        while (pos + 2 < hyp.size()) {
            const std::uint64_t dice = rng.below(6);
            if (dice == 0 && hyp[pos] == U' ') {
                hyp.erase(pos, 1); // merge
                ++planted;
                pos += 3;
            } else if (dice == 1 && hyp[pos] != U' ' && hyp[pos - 1] != U' ' && hyp[pos + 1] != U' ') {
                hyp.insert(pos, 1, U' '); // split
                ++planted;
                pos += 4;
            } else {
                ++pos;
            }
        }
        const auto ca = char_align(ref, hyp);
        const auto events = detect_boundary_errors(normalize(ref), normalize(hyp), ca);
        REQUIRE(events.size() == planted);
        REQUIRE(events.size() == ca.distance);
    }
}

TEST_CASE("single-op glyph confusion via the default table") {
    const auto ref = normalize(U"ſummon");
    const auto hyp = normalize(U"fummon");
    const auto events = detect_glyph_confusions(char_align(ref, hyp), default_confusion_table());
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == ProxyKind::GlyphConfusion);
    CHECK(events[0].pattern_from == U"ſ");
    CHECK(events[0].pattern_to == U"f");
    CHECK(events[0].ref_offset == 0);
}

TEST_CASE("multi-op windows match sequence pairs") {
    // Substitute ae->a + Insert e inside a table declaring (æ, ae) as Glyph.
    ConfusionTable table;
    table.add(ConfusionPair{U"æ", U"ae", ConfusionCategory::Glyph});
    const auto ref = normalize(U"Celtæ");
    const auto hyp = normalize(U"Celtae");
    const auto events = detect_glyph_confusions(char_align(ref, hyp), table);
    REQUIRE(events.size() == 1);
    CHECK(events[0].pattern_from == U"æ");
    CHECK(events[0].pattern_to == U"ae");
}

TEST_CASE("three-op ligature window") {
    const auto ref = normalize(U"eﬃcacy");
    const auto hyp = normalize(U"efficacy");
    const auto events = detect_normalizations(token_align(tokenize(ref), tokenize(hyp)),
                                              char_align(ref, hyp), default_confusion_table(),
                                              make_lexicon({"word"}), nullptr);
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == ProxyKind::NormalizationGraphemic);
    CHECK(events[0].pattern_from == U"ﬃ");
    CHECK(events[0].pattern_to == U"ffi");
}

TEST_CASE("substitutions outside the table are not glyph confusions") {
    const auto ref = normalize(U"kite");
    const auto hyp = normalize(U"xite");
    CHECK(detect_glyph_confusions(char_align(ref, hyp), default_confusion_table()).empty());
}

TEST_CASE("windows are consumed greedily without overlap") {
    const auto ref = normalize(U"ſſ");
    const auto hyp = normalize(U"ss");
    const auto events = detect_glyph_confusions(char_align(ref, hyp), default_confusion_table());
    CHECK(events.size() == 2);
}

TEST_CASE("default table contents") {
    const ConfusionTable t = default_confusion_table();
    CHECK(t.contains(U"ſ", U"s", ConfusionCategory::Glyph));
    CHECK(t.contains(U"ſ", U"f", ConfusionCategory::Glyph));
    CHECK(t.contains(U"ﬁ", U"fi", ConfusionCategory::NormalizationGraphemic));
    CHECK(t.contains(U"Æ", U"Ae", ConfusionCategory::NormalizationGraphemic));
    CHECK_FALSE(t.contains(U"a", U"b", ConfusionCategory::Glyph));
}

TEST_CASE("confusion table validation") {
    ConfusionTable t;
    CHECK_THROWS_AS(t.add(ConfusionPair{U"a", U"a", ConfusionCategory::Glyph}), ConfusionTableError);
    CHECK_THROWS_AS(t.add(ConfusionPair{U"abcd", U"x", ConfusionCategory::Glyph}), ConfusionTableError);
    CHECK_THROWS_AS(t.add(ConfusionPair{U"", U"x", ConfusionCategory::Glyph}), ConfusionTableError);
    CHECK_THROWS_AS(t.add(ConfusionPair{U"a b", U"x", ConfusionCategory::Glyph}), ConfusionTableError);
}

TEST_CASE("confusion table file format") {
    std::stringstream good("# comment\nſ\ts\tglyph\næ\tae\tnormalization-graphemic\n");
    const ConfusionTable t = load_confusion_table(good);
    CHECK(t.contains(U"ſ", U"s", ConfusionCategory::Glyph));
    CHECK(t.contains(U"æ", U"ae", ConfusionCategory::NormalizationGraphemic));

    std::stringstream bad_cat("a\tb\tnonsense\n");
    CHECK_THROWS_AS(load_confusion_table(bad_cat), ConfusionTableError);
    std::stringstream bad_cols("a,b,glyph\n");
    CHECK_THROWS_AS(load_confusion_table(bad_cols), ConfusionTableError);
}

TEST_CASE("lexical normalization requires the modern lexicon and distance cap") {
    const auto ref = normalize(U"Antient history");
    const auto hyp = normalize(U"Ancient history");
    const auto ta = token_align(tokenize(ref), tokenize(hyp));
    const auto ca = char_align(ref, hyp);
    const Lexicon historical = make_lexicon({"antient", "history"});
    const Lexicon modern = make_lexicon({"ancient", "history"});

    const auto with_modern =
        detect_normalizations(ta, ca, default_confusion_table(), historical, &modern);
    REQUIRE(with_modern.size() == 1);
    CHECK(with_modern[0].kind == ProxyKind::NormalizationLexical);
    CHECK(with_modern[0].ref_surface == U"Antient");
    CHECK(with_modern[0].hyp_surface == U"Ancient");

    CHECK(detect_normalizations(ta, ca, default_confusion_table(), historical, nullptr).empty());
}

TEST_CASE("graphemic normalization fires independently of lexica") {
    const auto ref = normalize(U"Cæſar");
    const auto hyp = normalize(U"Caeſar");
    const auto events = detect_normalizations(token_align(tokenize(ref), tokenize(hyp)),
                                              char_align(ref, hyp), default_confusion_table(),
                                              make_lexicon({"x"}), nullptr);
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == ProxyKind::NormalizationGraphemic);
    CHECK(events[0].pattern_from == U"æ");
}

TEST_CASE("lexical normalization respects the edit-distance cap") {
    const auto ref = normalize(U"imploy");
    const auto hyp = normalize(U"engagement");
    const Lexicon historical = make_lexicon({"imploy"});
    const Lexicon modern = make_lexicon({"engagement"});
    CHECK(detect_normalizations(token_align(tokenize(ref), tokenize(hyp)), char_align(ref, hyp),
                                default_confusion_table(), historical, &modern)
              .empty());
}

TEST_CASE("graphemic decomposition neutralizes ligature distance in the cap") {
    const auto ref = normalize(U"phænomena");
    const auto hyp = normalize(U"phaenomena");
    const Lexicon historical = make_lexicon({"ph\xc3\xa6nomena"});
    const Lexicon modern = make_lexicon({"phaenomena"});
    const auto events = detect_normalizations(token_align(tokenize(ref), tokenize(hyp)),
                                              char_align(ref, hyp), default_confusion_table(),
                                              historical, &modern);
    // One graphemic event for the æ -> ae window plus the lexical event.
    REQUIRE(events.size() == 2);
    CHECK(events[0].kind == ProxyKind::NormalizationGraphemic);
    CHECK(events[1].kind == ProxyKind::NormalizationLexical);
}

TEST_CASE("lexicon extremes flip every word error class") {
    const auto ref = normalize(U"alpha beta gamma");
    const auto hyp = normalize(U"alpho betb gammc");
    const auto ta = token_align(tokenize(ref), tokenize(hyp));
    const Lexicon empty_like = make_lexicon({"unrelated"});
    for (const auto& ev : classify_word_errors(ta, empty_like)) CHECK(ev.kind == ProxyKind::NonWord);
    const Lexicon universal = make_lexicon({"alpho", "betb", "gammc"});
    for (const auto& ev : classify_word_errors(ta, universal)) CHECK(ev.kind == ProxyKind::RealWord);
}

TEST_CASE("classify_line flags word events shadowed by structural errors") {
    // One merge, one glyph confusion, one clean real-word swap.
    const auto ref = normalize(U"the cat ſummon power lives");
    const auto hyp = normalize(U"thecat fummon tower lives");
    const auto ca = char_align(ref, hyp);
    const auto ta = token_align(tokenize(ref), tokenize(hyp));
    const Lexicon lex = make_lexicon({"the", "cat", "\xc5\xbfummon", "power", "tower", "lives"});
    const auto cls = classify_line(ref, hyp, ca, ta, default_confusion_table(), lex, nullptr, "L9");

    REQUIRE(cls.boundary_events.size() == 1);
    CHECK(cls.boundary_events[0].kind == ProxyKind::BoundaryMerge);
    REQUIRE(cls.glyph_events.size() == 1);

    std::size_t pure = 0, overlapping = 0;
    for (const auto& ev : cls.word_events) {
        if (ev.overlaps_structural)
            ++overlapping;
        else
            ++pure;
    }
    CHECK(overlapping == 2); // "thecat" (merge shadow) and "fummon" (glyph shadow)
    REQUIRE(pure == 1);      // power -> tower survives as a genuine word error
    for (const auto& ev : cls.word_events)
        if (!ev.overlaps_structural) {
            CHECK(ev.kind == ProxyKind::RealWord);
            CHECK(ev.hyp_surface == U"tower");
        }
}

TEST_CASE("planted mutations are recovered exactly at small scale") {
    // 1 split, 1 merge, 1 glyph confusion, 1 attested swap, placed on
    // separate lines.
    const Lexicon lex = make_lexicon({"alpha", "beta", "gamma", "delta", "power", "tower",
                                      "pre\xc5\xbf" "ent", "words"});
    const ConfusionTable table = default_confusion_table();
    struct Case {
        std::u32string ref, hyp;
    };
    const std::vector<Case> cases = {
        {U"alpha beta gamma", U"al pha beta gamma"},
        {U"alpha beta gamma", U"alphabeta gamma"},
        {U"preſent words here", U"prefent words here"},
        {U"power beta gamma", U"tower beta gamma"},
    };
    std::size_t splits = 0, merges = 0, glyphs = 0, pure_real = 0;
    for (const auto& c : cases) {
        const auto ref = normalize(c.ref);
        const auto hyp = normalize(c.hyp);
        const auto ca = char_align(ref, hyp);
        const auto ta = token_align(tokenize(ref), tokenize(hyp));
        const auto cls = classify_line(ref, hyp, ca, ta, table, lex, nullptr);
        for (const auto& ev : cls.boundary_events) {
            if (ev.kind == ProxyKind::BoundarySplit) ++splits;
            if (ev.kind == ProxyKind::BoundaryMerge) ++merges;
        }
        glyphs += cls.glyph_events.size();
        for (const auto& ev : cls.word_events)
            if (!ev.overlaps_structural && ev.kind == ProxyKind::RealWord) ++pure_real;
    }
    CHECK(splits == 1);
    CHECK(merges == 1);
    CHECK(glyphs == 1);
    CHECK(pure_real == 1);
}
