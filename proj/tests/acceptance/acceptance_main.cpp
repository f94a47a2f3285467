// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Time budgets are enforced, not advisory.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "histocr/histocr.hpp"

#include "../support/oracles.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", s);
    return buf;
}

histocr::Lexicon lexicon_from_lines(const std::vector<std::string>& lines, std::uint64_t min_freq = 1) {
    std::size_t i = 0;
    return histocr::build_lexicon(
        [&]() -> std::optional<std::string> {
            if (i >= lines.size()) return std::nullopt;
            return lines[i++];
        },
        min_freq);
}

unsigned bench_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 4u : std::min(hw, 4u);
}

// ---------------------------------------------------------------------------

Outcome criterion_1_edit_distance_oracle() {
    const auto start = Clock::now();
    std::size_t mismatches = 0, checked = 0;

    // Exhaustive: every pair of strings of length <= 4 over {a, b, ſ, space}.
    const std::u32string alphabet = U"abſ ";
    std::vector<std::u32string> all;
    all.emplace_back();
    std::size_t first = 0;
    for (int len = 1; len <= 4; ++len) {
        const std::size_t last = all.size();
        for (std::size_t i = first; i < last; ++i)
            for (char32_t c : alphabet) all.push_back(all[i] + c);
        first = last;
    }
    for (const auto& r : all)
        for (const auto& h : all) {
            if (histocr::char_align(r, h).distance != oracle::naive_edit_distance(r, h)) ++mismatches;
            ++checked;
        }
    const std::size_t exhaustive = checked;

    // 10,000 seeded random pairs of length <= 7.
    histocr::SplitMix64 rng(416);
    const std::u32string rich = U"abcſæ ";
    for (int i = 0; i < 10000; ++i) {
        std::u32string r, h;
        for (std::size_t k = rng.below(8); k > 0; --k) r.push_back(rich[rng.below(rich.size())]);
        for (std::size_t k = rng.below(8); k > 0; --k) h.push_back(rich[rng.below(rich.size())]);
        if (histocr::char_align(r, h).distance != oracle::naive_edit_distance(r, h)) ++mismatches;
        ++checked;
    }

    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    std::ostringstream detail;
    detail << exhaustive << " exhaustive + 10000 random pairs, " << mismatches << " mismatches, "
           << fmt_seconds(elapsed);
    return {mismatches == 0 && elapsed < 60.0, detail.str()};
}

Outcome criterion_2_metric_identities() {
    bool ok = true;
    std::ostringstream detail;

    // Self-comparison corpus.
    const auto records = histocr::make_throughput_corpus(100, 5);
    std::vector<histocr::LineMetrics> self;
    for (const auto& r : records)
        self.push_back(histocr::line_metrics(r.reference, r.reference));
    ok = ok && histocr::corpus_cer(self) == 0.0 && histocr::corpus_wer(self) == 0.0;

    // Hand-built two-line corpus.
    histocr::LineMetrics a, b;
    a.char_distance = 1;
    a.ref_chars = 10;
    b.char_distance = 3;
    b.ref_chars = 90;
    const std::vector<histocr::LineMetrics> two = {a, b};
    ok = ok && histocr::corpus_cer(two) == 0.04;

    // 50 random corpora against independent summation.
    histocr::SplitMix64 rng(52);
    std::size_t corpora_ok = 0;
    for (int c = 0; c < 50; ++c) {
        std::vector<histocr::LineMetrics> lines;
        std::uint64_t d = 0, n = 0, wd = 0, wn = 0;
        for (std::size_t i = 1 + rng.below(60); i > 0; --i) {
            histocr::LineMetrics m;
            m.ref_chars = 1 + rng.below(100);
            m.char_distance = rng.below(m.ref_chars + 4);
            m.ref_words = 1 + rng.below(16);
            m.word_distance = rng.below(m.ref_words + 2);
            lines.push_back(m);
            d += m.char_distance;
            n += m.ref_chars;
            wd += m.word_distance;
            wn += m.ref_words;
        }
        const bool cer_ok = histocr::corpus_cer(lines) == static_cast<double>(d) / static_cast<double>(n);
        const bool wer_ok = histocr::corpus_wer(lines) == static_cast<double>(wd) / static_cast<double>(wn);
        if (cer_ok && wer_ok) ++corpora_ok;
    }
    ok = ok && corpora_ok == 50;
    detail << "self-comparison CER=WER=0, two-line corpus CER=0.04, " << corpora_ok
           << "/50 random corpora match independent summation";
    return {ok, detail.str()};
}

Outcome criterion_3_planted_proxies() {
    const histocr::PlantedSpec spec; // 200 lines, 20/15(5)/30/25/10
    const histocr::PlantedCorpus corpus = histocr::make_planted_corpus(spec);
    const histocr::Lexicon lex = lexicon_from_lines(corpus.lexicon_lines);

    histocr::RunConfig config;
    config.bootstrap.resamples = 50; // metrics are incidental here
    const auto report =
        histocr::build_report(corpus.records, histocr::default_confusion_table(), lex, nullptr, config);
    const histocr::ModelAnalysis& m = report.models.at(0);

    std::ostringstream detail;
    detail << "splits " << m.boundary.splits() << "/" << spec.boundary_splits << " (punct "
           << m.boundary.split_punctuation << "/0), merges " << m.boundary.merges() << "/"
           << spec.boundary_merges << " (punct " << m.boundary.merge_punctuation << "/"
           << spec.merges_punctuation << "), glyph " << m.glyph_confusions << "/" << spec.glyph_confusions
           << ", real-word " << m.word_tally.real_word_pure << "/" << spec.real_word_swaps << ", non-word "
           << m.word_tally.non_word_pure << "/" << spec.non_word_mutations;

    const bool ok = m.boundary.splits() == spec.boundary_splits && m.boundary.split_punctuation == 0 &&
                    m.boundary.merges() == spec.boundary_merges &&
                    m.boundary.merge_punctuation == spec.merges_punctuation &&
                    m.glyph_confusions == spec.glyph_confusions &&
                    m.word_tally.real_word_pure == spec.real_word_swaps &&
                    m.word_tally.non_word_pure == spec.non_word_mutations;
    return {ok, detail.str()};
}

Outcome criterion_4_bootstrap_contract() {
    const auto start = Clock::now();
    bool ok = true;
    std::ostringstream detail;

    histocr::BootstrapParams params;
    params.resamples = 10000;
    params.seed = 1766;

    // Constant-CER corpus: zero-width interval.
    std::vector<histocr::LineMetrics> constant;
    for (int i = 0; i < 40; ++i) {
        histocr::LineMetrics m;
        m.char_distance = 2;
        m.ref_chars = 20;
        m.ref_words = 4;
        constant.push_back(m);
    }
    const auto zw = histocr::bootstrap_ci(constant, histocr::Statistic::CER, params);
    ok = ok && zw.ci_low == zw.ci_high && zw.ci_low == 0.1;

    // Determinism across runs and worker counts, compared on serialized bytes.
    histocr::SplitMix64 rng(4444);
    std::vector<histocr::LineMetrics> mixed;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
    for (int i = 0; i < 10; ++i) {
        histocr::LineMetrics m;
        m.ref_chars = 10 + rng.below(70);
        m.char_distance = rng.below(m.ref_chars / 3 + 1);
        m.ref_words = 2 + rng.below(12);
        m.word_distance = rng.below(m.ref_words);
        mixed.push_back(m);
        raw.emplace_back(m.char_distance, m.ref_chars);
    }
    const auto run1 = histocr::bootstrap_ci(mixed, histocr::Statistic::CER, params);
    const auto run2 = histocr::bootstrap_ci(mixed, histocr::Statistic::CER, params);
    auto wide = params;
    wide.workers = 8;
    const auto run8 = histocr::bootstrap_ci(mixed, histocr::Statistic::CER, wide);
    const std::string bytes1 = histocr::to_json(run1).dump();
    ok = ok && bytes1 == histocr::to_json(run2).dump() && bytes1 == histocr::to_json(run8).dump();

    // Paired self-delta is exactly [0, 0].
    std::vector<histocr::PairedLineMetrics> self;
    for (const auto& m : mixed) self.push_back(histocr::PairedLineMetrics{m, m});
    const auto delta = histocr::paired_bootstrap_delta(self, histocr::Statistic::CER, params);
    ok = ok && delta.point == 0.0 && delta.ci_low == 0.0 && delta.ci_high == 0.0;

    // Independent scripted oracle, exact endpoints on the 10-line corpus.
    const auto expected = oracle::scripted_bootstrap(raw, params.resamples, params.seed, params.level);
    ok = ok && run1.point == expected.point && run1.ci_low == expected.lo && run1.ci_high == expected.hi;

    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    detail << "zero-width on constant corpus, byte-identical across runs and 1 vs 8 workers, paired "
              "self-delta [0,0], oracle endpoints exact, "
           << fmt_seconds(elapsed);
    return {ok && elapsed < 30.0, detail.str()};
}

Outcome criterion_5_normalization_properties() {
    const auto core = [](std::u32string_view s) {
        std::multiset<char32_t> out;
        for (char32_t cp : s)
            if (!histocr::uni::is_white_space(cp) && !histocr::uni::is_dash(cp)) out.insert(cp);
        return out;
    };

    // 10,000 cases over the stated alphabet: long-s, ligatures, mixed dashes,
    // exotic whitespace (plus combining marks for the NFC interaction).
    const std::u32string alphabet = U"ab cſﬀﬁﬃæœ"
                                    U"\t    　"
                                    U"-‐–—−－,.;ééq̣";
    histocr::SplitMix64 rng(5555);
    std::size_t violations = 0;
    for (int round = 0; round < 10000; ++round) {
        std::u32string raw;
        for (std::size_t k = rng.below(40); k > 0; --k) raw.push_back(alphabet[rng.below(alphabet.size())]);
        const auto once = histocr::normalize(raw);
        if (histocr::normalize(once.content).content != once.content) ++violations;
        if (core(once.content) != core(histocr::uni::nfc(raw))) ++violations;
    }

    // Additional zero-width-artifact cases; stripping the artifact first is
    // part of the documented normalization semantics.
    const std::u32string zw_alphabet = alphabet + U"​﻿⁠";
    std::size_t zw_cases = 2000, zw_violations = 0;
    for (std::size_t round = 0; round < zw_cases; ++round) {
        std::u32string raw;
        for (std::size_t k = rng.below(40); k > 0; --k)
            raw.push_back(zw_alphabet[rng.below(zw_alphabet.size())]);
        const auto once = histocr::normalize(raw);
        if (histocr::normalize(once.content).content != once.content) ++zw_violations;
        std::u32string visible;
        for (char32_t cp : raw)
            if (!histocr::uni::is_zero_width_artifact(cp)) visible.push_back(cp);
        if (core(once.content) != core(histocr::uni::nfc(visible))) ++zw_violations;
    }

    std::ostringstream detail;
    detail << "10000 fuzz cases (long-s, ligatures, dashes, exotic whitespace): " << violations
           << " violations; 2000 zero-width artifact cases: " << zw_violations << " violations";
    return {violations == 0 && zw_violations == 0, detail.str()};
}

Outcome criterion_6_distribution_conservation(const histocr::AnalysisReport& report) {
    bool ok = true;
    std::size_t checked_models = 0;
    for (const auto& m : report.models) {
        ++checked_models;
        const auto& lines = report.lines.at(m.model);

        const auto shares_ok = [&](const histocr::Distribution& d) {
            if (d.total == 0) return d.buckets.empty();
            double s = 0.0;
            std::uint64_t c = 0;
            for (const auto& b : d.buckets) {
                s += b.share;
                c += b.count;
            }
            return std::abs(s - 1.0) <= 1e-9 && c == d.total;
        };
        ok = ok && shares_ok(m.edit_histogram) && shares_ok(m.word_shares);
        for (const auto& [cat, dist] : m.positional.per_category) ok = ok && shares_ok(dist);

        // Confusion counts (unbounded K) must sum to the substitution total.
        std::vector<std::pair<char32_t, char32_t>> subs;
        for (const auto& line : lines) subs.insert(subs.end(), line.substitutions.begin(), line.substitutions.end());
        std::uint64_t ranked = 0;
        for (const auto& c :
             histocr::confusion_top_k(std::span<const std::pair<char32_t, char32_t>>(subs), subs.size() + 1))
            ranked += c.count;
        ok = ok && ranked == m.substitution_total && m.substitution_total == subs.size();

        // Positional bins hold every non-Match op of nonzero-length lines.
        std::uint64_t anchors = 0, binned = 0;
        for (const auto& line : lines)
            if (line.metrics.ref_chars > 0) anchors += line.anchors.size();
        for (const auto& [cat, dist] : m.positional.per_category) binned += dist.total;
        ok = ok && binned == anchors;
    }
    std::ostringstream detail;
    detail << "shares sum to 1 +/- 1e-9, confusion and positional masses conserved over " << checked_models
           << " model sections";
    return {ok, detail.str()};
}

Outcome criterion_7_demo_pipeline(histocr::AnalysisReport& report_out) {
    const auto start = Clock::now();

    const histocr::DemoCorpus demo = histocr::make_demo_corpus();
    const histocr::Lexicon historical = lexicon_from_lines(demo.historical_corpus);
    const histocr::Lexicon modern = lexicon_from_lines(demo.modern_corpus);

    histocr::RunConfig config;
    config.bootstrap.resamples = 2000;
    config.bootstrap.workers = bench_workers();

    const auto run = [&] {
        return histocr::build_report(demo.records, histocr::default_confusion_table(), historical, &modern,
                                     config);
    };
    histocr::AnalysisReport report = run();
    const histocr::AnalysisReport repeat = run();
    const bool deterministic =
        histocr::to_json(report, true).dump() == histocr::to_json(repeat, true).dump();

    const histocr::ModelAnalysis* cascade = nullptr;
    const histocr::ModelAnalysis* bounded = nullptr;
    for (const auto& m : report.models) {
        if (m.model == "cascade") cascade = &m;
        if (m.model == "bounded") bounded = &m;
    }

    bool ok = deterministic && cascade && bounded && demo.records.size() >= 100;
    std::ostringstream detail;
    if (cascade && bounded && cascade->spans && bounded->spans) {
        const double span_cascade = cascade->spans->mean_span_length;
        const double span_bounded = bounded->spans->mean_span_length;
        const auto lex_cascade = cascade->normalization.lexical;
        const auto lex_bounded = bounded->normalization.lexical;
        ok = ok && span_cascade > span_bounded && lex_bounded > lex_cascade;
        const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
        ok = ok && elapsed < 10.0;
        detail << demo.records.size() << " lines; mean span cascade " << span_cascade << " > bounded "
               << span_bounded << "; lexical normalizations bounded " << lex_bounded << " > cascade "
               << lex_cascade << "; deterministic=" << (deterministic ? "yes" : "no") << ", "
               << fmt_seconds(elapsed);
    } else {
        ok = false;
        detail << "missing model sections or span statistics";
    }
    report_out = std::move(report);
    return {ok, detail.str()};
}

Outcome criterion_8_throughput() {
    const auto records = histocr::make_throughput_corpus(10000);
    double mean_len = 0.0;
    for (const auto& r : records) mean_len += static_cast<double>(r.reference.size());
    mean_len /= static_cast<double>(records.size());

    const histocr::Lexicon lex = lexicon_from_lines(histocr::synth::lexicon_corpus_lines());
    histocr::RunConfig config;
    config.bootstrap.workers = bench_workers(); // capped at 4
    const std::filesystem::path out_dir =
        std::filesystem::temp_directory_path() / "histocr-acceptance-throughput";

    const auto start = Clock::now();
    const auto evaluation = histocr::evaluate_metrics(records, config);
    const auto report =
        histocr::build_report(records, histocr::default_confusion_table(), lex, nullptr, config);
    histocr::write_evaluation(evaluation, out_dir.string());
    histocr::write_report(report, out_dir.string());
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    std::filesystem::remove_all(out_dir);

    std::ostringstream detail;
    detail << records.size() << " lines (mean " << mean_len << " scalars), evaluate+analyze+write in "
           << fmt_seconds(elapsed) << " with " << config.bootstrap.workers << " workers";
    return {elapsed < 10.0, detail.str()};
}

} // namespace

int main() {
    int failures = 0;
    const auto report_line = [&](int number, const std::string& name, const Outcome& outcome) {
        std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << name << " — "
                  << outcome.detail << "\n";
        if (!outcome.pass) ++failures;
    };

    report_line(1, "edit-distance oracle equivalence", criterion_1_edit_distance_oracle());
    report_line(2, "metric identities", criterion_2_metric_identities());
    report_line(3, "planted-proxy exactness", criterion_3_planted_proxies());
    report_line(4, "bootstrap contract", criterion_4_bootstrap_contract());
    report_line(5, "normalization properties", criterion_5_normalization_properties());

    histocr::AnalysisReport demo_report;
    const Outcome demo_outcome = criterion_7_demo_pipeline(demo_report);

    // Conservation is checked on the planted corpus and the demo (fuzz-style)
    // reports produced above.
    {
        const histocr::PlantedCorpus corpus = histocr::make_planted_corpus();
        const histocr::Lexicon lex = lexicon_from_lines(corpus.lexicon_lines);
        histocr::RunConfig config;
        config.bootstrap.resamples = 50;
        const auto planted_report =
            histocr::build_report(corpus.records, histocr::default_confusion_table(), lex, nullptr, config);
        const Outcome planted = criterion_6_distribution_conservation(planted_report);
        const Outcome demo_side = criterion_6_distribution_conservation(demo_report);
        report_line(6, "distribution conservation",
                    Outcome{planted.pass && demo_side.pass,
                            planted.detail + " (planted corpus) and demo corpus"});
    }

    report_line(7, "paper-shaped pipeline demo", demo_outcome);
    report_line(8, "throughput", criterion_8_throughput());

    if (failures) std::cout << failures << " criterion(s) failed\n";
    return failures == 0 ? 0 : 1;
}
