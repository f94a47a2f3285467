#include <catch2/catch_amalgamated.hpp>

#include "histocr/analysis.hpp"
#include "histocr/report_io.hpp"
#include "histocr/rng.hpp"
#include "histocr/synthetic.hpp"

using histocr::boundary_breakdown;
using histocr::char_align;
using histocr::CharAlignment;
using histocr::confusion_top_k;
using histocr::Distribution;
using histocr::edit_distance_histogram;
using histocr::LengthCategory;
using histocr::LinePositions;
using histocr::normalize;
using histocr::positional_profile;
using histocr::ProxyEvent;
using histocr::ProxyKind;
using histocr::span_statistics;
using histocr::word_nonword_shares;

namespace {

double share_sum(const Distribution& d) {
    double s = 0.0;
    for (const auto& b : d.buckets) s += b.share;
    return s;
}

ProxyEvent event(ProxyKind kind, bool punct = false) {
    ProxyEvent ev;
    ev.kind = kind;
    ev.punctuation_related = punct;
    return ev;
}

} // namespace

TEST_CASE("confusion ranking counts substitutions with deterministic ties") {
    std::vector<CharAlignment> alignments;
    alignments.push_back(char_align(U"ſſſe", U"sssc"));
    const auto ranked = confusion_top_k(alignments, 25);
    REQUIRE(ranked.size() == 2);
    CHECK(ranked[0].from == U'ſ');
    CHECK(ranked[0].to == U's');
    CHECK(ranked[0].count == 3);
    CHECK(ranked[1].from == U'e');
    CHECK(ranked[1].to == U'c');
    CHECK(ranked[1].count == 1);

    CHECK(confusion_top_k(std::vector<CharAlignment>{char_align(U"same", U"same")}, 5).empty());

    std::vector<std::pair<char32_t, char32_t>> tie = {{U'a', U'b'}, {U'b', U'a'}, {U'a', U'b'}, {U'b', U'a'}};
    const auto tied = confusion_top_k(std::span<const std::pair<char32_t, char32_t>>(tie), 5);
    REQUIRE(tied.size() == 2);
    CHECK(tied[0].from == U'a'); // lexicographic on equal counts
    CHECK(tied[1].from == U'b');

    const auto capped = confusion_top_k(std::span<const std::pair<char32_t, char32_t>>(tie), 1);
    CHECK(capped.size() == 1);
}

TEST_CASE("edit distance histogram buckets errored lines") {
    const std::vector<std::size_t> distances = {1, 1, 2, 5, 0, 0};
    const auto d = edit_distance_histogram(distances, 10);
    CHECK(d.total == 4);
    CHECK(d.find("1")->count == 2);
    CHECK(d.find("1")->share == 0.5);
    CHECK(d.find("2")->share == 0.25);
    CHECK(d.find("5")->share == 0.25);
    CHECK(share_sum(d) == Catch::Approx(1.0).epsilon(1e-9));

    CHECK(edit_distance_histogram(std::vector<std::size_t>{0, 0}, 10).total == 0);
    CHECK(edit_distance_histogram(std::vector<std::size_t>{0, 0}, 10).buckets.empty());

    const std::vector<std::size_t> big = {3, 12, 40};
    const auto capped = edit_distance_histogram(big, 10);
    CHECK(capped.find(">=10")->count == 2);
}

TEST_CASE("cumulative low-distance share on a planted corpus") {
    std::vector<std::size_t> distances;
    for (int i = 0; i < 5; ++i) distances.push_back(1);
    for (int i = 0; i < 3; ++i) distances.push_back(2);
    distances.push_back(7);
    distances.push_back(9);
    const auto d = edit_distance_histogram(distances, 10);
    const double low = d.find("1")->share + d.find("2")->share;
    CHECK(low == Catch::Approx(0.8));
}

TEST_CASE("positional profile buckets normalized anchor positions") {
    std::vector<LinePositions> lines;
    lines.push_back(LinePositions{{0}, 10, LengthCategory::Short});
    auto profile = positional_profile(lines, 10);
    const auto& dist = profile.per_category.at("Short");
    CHECK(dist.total == 1);
    CHECK(dist.find("1")->count == 1);
    CHECK(share_sum(dist) == Catch::Approx(1.0).epsilon(1e-9));

    std::vector<std::size_t> uniform;
    for (std::size_t i = 0; i < 10; ++i) uniform.push_back(i);
    lines.clear();
    lines.push_back(LinePositions{uniform, 10, LengthCategory::Long});
    profile = positional_profile(lines, 10);
    for (const auto& b : profile.per_category.at("Long").buckets) CHECK(b.share == Catch::Approx(0.1));

    // Skew: everything in the first fifth of the line.
    lines.clear();
    lines.push_back(LinePositions{{0, 1, 5, 9}, 50, LengthCategory::Long});
    profile = positional_profile(lines, 10);
    const auto& skew = profile.per_category.at("Long");
    CHECK(skew.find("1")->count + skew.find("2")->count == skew.total);
}

TEST_CASE("positional profile skips and counts zero-length references") {
    std::vector<LinePositions> lines;
    lines.push_back(LinePositions{{0, 0}, 0, LengthCategory::Short});
    lines.push_back(LinePositions{{1}, 4, LengthCategory::Short});
    const auto profile = positional_profile(lines, 10);
    CHECK(profile.skipped_zero_length_lines == 1);
    CHECK(profile.per_category.at("Short").total == 1);
    CHECK_THROWS_AS(positional_profile(lines, 1), std::invalid_argument);
}

TEST_CASE("word and non-word shares") {
    std::vector<ProxyEvent> events = {event(ProxyKind::RealWord), event(ProxyKind::RealWord),
                                      event(ProxyKind::RealWord), event(ProxyKind::NonWord)};
    const auto d = word_nonword_shares(events);
    CHECK(d.total == 4);
    CHECK(d.find("real-word")->share == 0.75);
    CHECK(d.find("non-word")->share == 0.25);

    CHECK(word_nonword_shares({}).total == 0);
    CHECK(word_nonword_shares({}).buckets.empty());

    std::vector<ProxyEvent> all_real = {event(ProxyKind::RealWord), event(ProxyKind::RealWord)};
    CHECK(word_nonword_shares(all_real).find("real-word")->share == 1.0);
}

TEST_CASE("boundary breakdown fills the four cells") {
    std::vector<ProxyEvent> events = {event(ProxyKind::BoundaryMerge, true),
                                      event(ProxyKind::BoundaryMerge, false),
                                      event(ProxyKind::BoundarySplit, true)};
    const auto b = boundary_breakdown(events);
    CHECK(b.split_punctuation == 1);
    CHECK(b.split_plain == 0);
    CHECK(b.merge_punctuation == 1);
    CHECK(b.merge_plain == 1);
    CHECK(b.total() == 3);

    CHECK(boundary_breakdown({}).total() == 0);
}

TEST_CASE("span statistics match the worked example") {
    std::vector<std::vector<histocr::ErrorSpan>> lines;
    lines.push_back({histocr::ErrorSpan{0, 2, 3}, histocr::ErrorSpan{5, 5, 1}});
    const auto stats = span_statistics(lines);
    REQUIRE(stats.has_value());
    CHECK(stats->mean_span_length == 2.0);
    CHECK(stats->max_span_length == 3);
    CHECK(stats->spans_per_errored_line == 2.0);
    CHECK(stats->share_of_errors_in_longest_span == 0.75);
    CHECK(stats->errored_lines == 1);

    CHECK_FALSE(span_statistics(std::vector<std::vector<histocr::ErrorSpan>>{{}, {}}).has_value());

    std::vector<std::vector<histocr::ErrorSpan>> unit_lines(4, {histocr::ErrorSpan{1, 1, 1}});
    const auto unit = span_statistics(unit_lines);
    CHECK(unit->mean_span_length == 1.0);
    CHECK(unit->max_span_length == 1);
    CHECK(unit->spans_per_errored_line == 1.0);
    CHECK(unit->share_of_errors_in_longest_span == 1.0);
}

namespace {

histocr::RunConfig fast_config() {
    histocr::RunConfig config;
    config.bootstrap.resamples = 200;
    config.bootstrap.seed = 11;
    return config;
}

} // namespace

TEST_CASE("report tallies are conserved and rebuildable from per-line records") {
    const histocr::PlantedSpec spec{60, 5, 4, 2, 6, 5, 3, 77};
    const histocr::PlantedCorpus corpus = histocr::make_planted_corpus(spec);
    auto supplier = [lines = corpus.lexicon_lines, i = std::size_t(0)]() mutable -> std::optional<std::string> {
        if (i >= lines.size()) return std::nullopt;
        return lines[i++];
    };
    const histocr::Lexicon lex = histocr::build_lexicon(supplier, 1);
    const histocr::RunConfig config = fast_config();
    const histocr::AnalysisReport report = histocr::build_report(
        corpus.records, histocr::default_confusion_table(), lex, nullptr, config);

    REQUIRE(report.models.size() == 1);
    const histocr::ModelAnalysis& m = report.models[0];
    const auto& lines = report.lines.at("planted");

    // Conservation: substitution total equals the full (k = infinity) ranking mass.
    std::uint64_t ranked_total = 0;
    std::vector<std::pair<char32_t, char32_t>> subs;
    for (const auto& line : lines) subs.insert(subs.end(), line.substitutions.begin(), line.substitutions.end());
    for (const auto& c : confusion_top_k(std::span<const std::pair<char32_t, char32_t>>(subs), subs.size() + 1))
        ranked_total += c.count;
    CHECK(ranked_total == m.substitution_total);

    // Conservation: positional bin counts equal non-Match op count.
    std::uint64_t anchors = 0, binned = 0;
    for (const auto& line : lines) anchors += line.anchors.size();
    for (const auto& [cat, dist] : m.positional.per_category) binned += dist.total;
    CHECK(binned == anchors);

    for (const auto& [cat, dist] : m.positional.per_category)
        if (dist.total > 0) CHECK(share_sum(dist) == Catch::Approx(1.0).epsilon(1e-9));
    if (m.edit_histogram.total > 0)
        CHECK(share_sum(m.edit_histogram) == Catch::Approx(1.0).epsilon(1e-9));

    // Purity: re-aggregating the serialized per-line records reproduces the tallies.
    std::vector<histocr::LineAnalysis> rebuilt;
    for (const auto& line : lines)
        rebuilt.push_back(histocr::line_analysis_from_json(histocr::to_json(line)));
    const histocr::ModelAnalysis again = histocr::aggregate_model("planted", rebuilt, config);
    CHECK(histocr::to_json(again).dump() == histocr::to_json(m).dump());
}

TEST_CASE("reports are identical for any worker count") {
    const histocr::DemoCorpus demo = histocr::make_demo_corpus(5, 40);
    auto supplier = [lines = demo.historical_corpus, i = std::size_t(0)]() mutable -> std::optional<std::string> {
        if (i >= lines.size()) return std::nullopt;
        return lines[i++];
    };
    const histocr::Lexicon lex = histocr::build_lexicon(supplier, 1);

    histocr::RunConfig one = fast_config();
    one.bootstrap.workers = 1;
    histocr::RunConfig eight = fast_config();
    eight.bootstrap.workers = 8;

    const auto ra = histocr::build_report(demo.records, histocr::default_confusion_table(), lex, nullptr, one);
    const auto rb = histocr::build_report(demo.records, histocr::default_confusion_table(), lex, nullptr, eight);
    // Worker count affects wall time only, never bytes.
    CHECK(histocr::to_json(ra, true).dump() == histocr::to_json(rb, true).dump());
}

TEST_CASE("evaluation metrics report covers subsets") {
    const histocr::DemoCorpus demo = histocr::make_demo_corpus(9, 30);
    histocr::RunConfig config = fast_config();
    const histocr::EvaluationReport report = histocr::evaluate_metrics(demo.records, config);
    REQUIRE(report.models.count("cascade") == 1);
    REQUIRE(report.models.count("bounded") == 1);
    const auto& subsets = report.models.at("cascade");
    REQUIRE(subsets.count("all") == 1);
    CHECK(subsets.at("all").lines == 30);
    CHECK(subsets.at("all").cer.has_value());
    CHECK(subsets.at("all").wer.has_value());
    bool has_modality = false, has_length = false;
    for (const auto& [name, subset] : subsets) {
        if (name.rfind("modality:", 0) == 0) has_modality = true;
        if (name.rfind("length:", 0) == 0) has_length = true;
    }
    CHECK(has_modality);
    CHECK(has_length);
}

TEST_CASE("evaluate and analyze agree on every metric estimate") {
    const histocr::DemoCorpus demo = histocr::make_demo_corpus(31, 24);
    auto supplier = [lines = demo.historical_corpus, i = std::size_t(0)]() mutable -> std::optional<std::string> {
        if (i >= lines.size()) return std::nullopt;
        return lines[i++];
    };
    const histocr::Lexicon lex = histocr::build_lexicon(supplier, 1);
    const histocr::RunConfig config = fast_config();
    const auto eval = histocr::evaluate_metrics(demo.records, config);
    const auto full = histocr::build_report(demo.records, histocr::default_confusion_table(), lex, nullptr, config);
    for (const auto& m : full.models) {
        const auto& from_eval = eval.models.at(m.model);
        REQUIRE(from_eval.size() == m.metrics.size());
        for (const auto& [subset, sm] : m.metrics) {
            const auto& esm = from_eval.at(subset);
            CHECK(esm.lines == sm.lines);
            CHECK(esm.cer == sm.cer);
            CHECK(esm.wer == sm.wer);
        }
    }
}

TEST_CASE("comparison requires both hypotheses on every line") {
    histocr::DemoCorpus demo = histocr::make_demo_corpus(9, 10);
    demo.records[4].hypotheses.erase("bounded");
    histocr::RunConfig config = fast_config();
    try {
        histocr::compare_models(demo.records, "cascade", "bounded", config);
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("demo-5") != std::string::npos);
    }
}

TEST_CASE("self comparison yields an exactly zero delta") {
    const histocr::DemoCorpus demo = histocr::make_demo_corpus(9, 12);
    histocr::RunConfig config = fast_config();
    const auto report = histocr::compare_models(demo.records, "cascade", "cascade", config);
    CHECK(report.delta_cer.point == 0.0);
    CHECK(report.delta_cer.ci_low == 0.0);
    CHECK(report.delta_cer.ci_high == 0.0);
    CHECK(report.delta_wer.ci_low == 0.0);
    CHECK(report.delta_wer.ci_high == 0.0);
}

TEST_CASE("empty references are diagnosed, not fatal") {
    histocr::DemoCorpus demo = histocr::make_demo_corpus(9, 8);
    histocr::LineRecord empty_line;
    empty_line.id = "empty-1";
    empty_line.reference = normalize(U"   ");
    empty_line.hypotheses["cascade"] = normalize(U"ghost words");
    empty_line.hypotheses["bounded"] = normalize(U"");
    demo.records.push_back(empty_line);

    auto supplier = [lines = demo.historical_corpus, i = std::size_t(0)]() mutable -> std::optional<std::string> {
        if (i >= lines.size()) return std::nullopt;
        return lines[i++];
    };
    const histocr::Lexicon lex = histocr::build_lexicon(supplier, 1);
    const auto report = histocr::build_report(demo.records, histocr::default_confusion_table(), lex,
                                              nullptr, fast_config());
    REQUIRE(report.diagnostics.empty_reference_lines.size() == 1);
    CHECK(report.diagnostics.empty_reference_lines[0] == "empty-1");
    for (const auto& m : report.models) {
        const auto& all = m.metrics.at("all");
        REQUIRE(all.cer.has_value());
        CHECK(all.cer->excluded_zero_length_lines == 1);
    }
}
