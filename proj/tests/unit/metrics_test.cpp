#include <catch2/catch_amalgamated.hpp>

#include "histocr/metrics.hpp"
#include "histocr/rng.hpp"
#include "histocr/textnorm.hpp"

#include "../support/oracles.hpp"

using histocr::BootstrapParams;
using histocr::bootstrap_ci;
using histocr::corpus_cer;
using histocr::corpus_wer;
using histocr::length_category;
using histocr::LengthCategory;
using histocr::LengthThresholds;
using histocr::line_metrics;
using histocr::LineMetrics;
using histocr::MetricEstimate;
using histocr::normalize;
using histocr::paired_bootstrap_delta;
using histocr::PairedLineMetrics;
using histocr::Statistic;
using histocr::UndefinedMetricError;

namespace {

LineMetrics lm(std::size_t d, std::size_t n, std::size_t wd = 0, std::size_t wn = 1) {
    LineMetrics m;
    m.char_distance = d;
    m.ref_chars = n;
    m.word_distance = wd;
    m.ref_words = wn;
    return m;
}

} // namespace

TEST_CASE("line metrics on identical and merged lines") {
    const auto same = line_metrics(normalize(U"abcde"), normalize(U"abcde"));
    CHECK(same.char_distance == 0);
    CHECK(same.word_distance == 0);
    CHECK(same.ref_chars == 5);
    CHECK(same.ref_words == 1);

    const auto merged = line_metrics(normalize(U"the cat"), normalize(U"thecat"));
    CHECK(merged.char_distance == 1);
    CHECK(merged.word_distance == 2);
    CHECK(merged.ref_words == 2);

    const auto from_empty = line_metrics(normalize(U""), normalize(U"x"));
    CHECK(from_empty.char_distance == 1);
    CHECK(from_empty.ref_chars == 0);
    CHECK(from_empty.ref_words == 0);
}

TEST_CASE("corpus CER is the pooled micro-average") {
    const std::vector<LineMetrics> lines = {lm(1, 10), lm(3, 90)};
    CHECK(corpus_cer(lines) == 0.04);

    const std::vector<LineMetrics> perfect = {lm(0, 10), lm(0, 5)};
    CHECK(corpus_cer(perfect) == 0.0);

    const std::vector<LineMetrics> single = {lm(3, 6)};
    CHECK(corpus_cer(single) == 0.5);
}

TEST_CASE("corpus WER pools word counts") {
    const std::vector<LineMetrics> lines = {lm(0, 1, 1, 4), lm(0, 1, 1, 16)};
    CHECK(corpus_wer(lines) == 0.10);
    const std::vector<LineMetrics> single = {lm(0, 1, 2, 8)};
    CHECK(corpus_wer(single) == 0.25);
    const std::vector<LineMetrics> perfect = {lm(0, 1, 0, 3)};
    CHECK(corpus_wer(perfect) == 0.0);
}

TEST_CASE("zero denominators are an error") {
    const std::vector<LineMetrics> empty_refs = {lm(2, 0, 2, 0)};
    CHECK_THROWS_AS(corpus_cer(empty_refs), UndefinedMetricError);
    CHECK_THROWS_AS(corpus_wer(empty_refs), UndefinedMetricError);
}

TEST_CASE("micro-average equals independent summation on random corpora") {
    histocr::SplitMix64 rng(41);
    for (int corpus = 0; corpus < 50; ++corpus) {
        std::vector<LineMetrics> lines;
        std::uint64_t d = 0, n = 0;
        const std::size_t count = 1 + rng.below(40);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t len = 1 + rng.below(80);
            const std::size_t dist = rng.below(len + 3);
            lines.push_back(lm(dist, len));
            d += dist;
            n += len;
        }
        REQUIRE(corpus_cer(lines) == static_cast<double>(d) / static_cast<double>(n));
    }
}

TEST_CASE("corpus CER of a concatenation lies between the parts") {
    histocr::SplitMix64 rng(43);
    for (int round = 0; round < 50; ++round) {
        std::vector<LineMetrics> a, b;
        for (std::size_t i = 1 + rng.below(10); i > 0; --i) a.push_back(lm(rng.below(5), 1 + rng.below(40)));
        for (std::size_t i = 1 + rng.below(10); i > 0; --i) b.push_back(lm(rng.below(5), 1 + rng.below(40)));
        std::vector<LineMetrics> both = a;
        both.insert(both.end(), b.begin(), b.end());
        const double ca = corpus_cer(a), cb = corpus_cer(b), cboth = corpus_cer(both);
        CHECK(cboth >= std::min(ca, cb));
        CHECK(cboth <= std::max(ca, cb));
    }
}

TEST_CASE("length categories use inclusive boundaries") {
    const LengthThresholds t{15, 34};
    CHECK(length_category(10, t) == LengthCategory::Short);
    CHECK(length_category(15, t) == LengthCategory::Short);
    CHECK(length_category(16, t) == LengthCategory::Medium);
    CHECK(length_category(34, t) == LengthCategory::Medium);
    CHECK(length_category(35, t) == LengthCategory::Long);
    CHECK_THROWS_AS(length_category(1, LengthThresholds{20, 20}), std::invalid_argument);
}

TEST_CASE("constant-rate corpus gives a zero-width interval") {
    std::vector<LineMetrics> lines(12, lm(1, 10));
    BootstrapParams params;
    params.resamples = 400;
    const MetricEstimate est = bootstrap_ci(lines, Statistic::CER, params);
    CHECK(est.point == 0.1);
    CHECK(est.ci_low == 0.1);
    CHECK(est.ci_high == 0.1);
    CHECK(est.half_width() == 0.0);
}

TEST_CASE("bootstrap is deterministic in seed and worker count") {
    histocr::SplitMix64 rng(47);
    std::vector<LineMetrics> lines;
    for (int i = 0; i < 25; ++i) lines.push_back(lm(rng.below(6), 10 + rng.below(50)));

    BootstrapParams params;
    params.resamples = 2000;
    params.seed = 7;
    const auto a = bootstrap_ci(lines, Statistic::CER, params);
    const auto b = bootstrap_ci(lines, Statistic::CER, params);
    CHECK(a == b);

    params.workers = 8;
    const auto c = bootstrap_ci(lines, Statistic::CER, params);
    CHECK(a == c);

    params.workers = 1;
    params.seed = 8;
    const auto d = bootstrap_ci(lines, Statistic::CER, params);
    CHECK(a != d);
}

TEST_CASE("bootstrap interval matches the independent scripted oracle exactly") {
    histocr::SplitMix64 rng(53);
    std::vector<LineMetrics> lines;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
    for (int i = 0; i < 10; ++i) {
        const std::uint64_t n = 5 + rng.below(60);
        const std::uint64_t d = rng.below(n / 2 + 1);
        lines.push_back(lm(d, n));
        raw.emplace_back(d, n);
    }
    BootstrapParams params;
    params.resamples = 1000;
    params.seed = 20250810;
    params.level = 0.95;
    const MetricEstimate est = bootstrap_ci(lines, Statistic::CER, params);
    const oracle::Interval expected = oracle::scripted_bootstrap(raw, params.resamples, params.seed, params.level);
    CHECK(est.point == expected.point);
    CHECK(est.ci_low == expected.lo);
    CHECK(est.ci_high == expected.hi);
}

TEST_CASE("two-line corpus endpoints come from the resample-mix grid") {
    // Lines (d=0,N=10) and (d=10,N=10): every resample statistic is one of
    // {0.0, 0.5, 1.0} (all-first, mixed, all-second draws).
    const std::vector<LineMetrics> lines = {lm(0, 10), lm(10, 10)};
    BootstrapParams params;
    params.resamples = 10000;
    const auto est = bootstrap_ci(lines, Statistic::CER, params);
    CHECK(est.point == 0.5);
    const auto on_grid = [](double v) { return v == 0.0 || v == 0.5 || v == 1.0; };
    CHECK(on_grid(est.ci_low));
    CHECK(on_grid(est.ci_high));
    CHECK(est.ci_low <= est.ci_high);
    // At B=10000 and level 0.95 both extreme mixes appear in the tails.
    CHECK(est.ci_low == 0.0);
    CHECK(est.ci_high == 1.0);
}

TEST_CASE("widening the level never shrinks the interval") {
    histocr::SplitMix64 rng(59);
    std::vector<LineMetrics> lines;
    for (int i = 0; i < 30; ++i) lines.push_back(lm(rng.below(8), 10 + rng.below(40)));
    BootstrapParams narrow, wide;
    narrow.resamples = wide.resamples = 1500;
    narrow.seed = wide.seed = 3;
    narrow.level = 0.90;
    wide.level = 0.99;
    const auto n = bootstrap_ci(lines, Statistic::CER, narrow);
    const auto w = bootstrap_ci(lines, Statistic::CER, wide);
    CHECK(w.ci_low <= n.ci_low);
    CHECK(w.ci_high >= n.ci_high);
}

TEST_CASE("zero-length reference lines are excluded and reported") {
    std::vector<LineMetrics> lines = {lm(1, 10), lm(2, 0), lm(1, 10)};
    BootstrapParams params;
    params.resamples = 100;
    const auto est = bootstrap_ci(lines, Statistic::CER, params);
    CHECK(est.excluded_zero_length_lines == 1);
    CHECK(est.point == 0.1);

    const std::vector<LineMetrics> only_empty = {lm(1, 0)};
    CHECK_THROWS_AS(bootstrap_ci(only_empty, Statistic::CER, params), UndefinedMetricError);
}

TEST_CASE("paired delta of a model against itself is exactly zero") {
    histocr::SplitMix64 rng(61);
    std::vector<PairedLineMetrics> paired;
    for (int i = 0; i < 20; ++i) {
        const auto m = lm(rng.below(5), 10 + rng.below(30), rng.below(3), 2 + rng.below(8));
        paired.push_back(PairedLineMetrics{m, m});
    }
    BootstrapParams params;
    params.resamples = 1000;
    const auto est = paired_bootstrap_delta(paired, Statistic::CER, params);
    CHECK(est.point == 0.0);
    CHECK(est.ci_low == 0.0);
    CHECK(est.ci_high == 0.0);
}

TEST_CASE("paired delta of perfect vs total failure is exactly minus one") {
    histocr::SplitMix64 rng(67);
    std::vector<PairedLineMetrics> paired;
    for (int i = 0; i < 15; ++i) {
        const std::size_t n = 5 + rng.below(30);
        paired.push_back(PairedLineMetrics{lm(0, n), lm(n, n)});
    }
    BootstrapParams params;
    params.resamples = 500;
    const auto est = paired_bootstrap_delta(paired, Statistic::CER, params);
    CHECK(est.point == -1.0);
    CHECK(est.ci_low == -1.0);
    CHECK(est.ci_high == -1.0);
}

TEST_CASE("paired delta matches the independent scripted oracle exactly") {
    histocr::SplitMix64 rng(71);
    std::vector<PairedLineMetrics> paired;
    std::vector<std::pair<std::pair<std::uint64_t, std::uint64_t>, std::pair<std::uint64_t, std::uint64_t>>> raw;
    for (int i = 0; i < 12; ++i) {
        const std::uint64_t n = 8 + rng.below(40);
        const std::uint64_t da = rng.below(6), db = rng.below(6);
        paired.push_back(PairedLineMetrics{lm(da, n), lm(db, n)});
        raw.push_back({{da, n}, {db, n}});
    }
    BootstrapParams params;
    params.resamples = 800;
    params.seed = 99;
    const auto est = paired_bootstrap_delta(paired, Statistic::CER, params);
    const auto expected = oracle::scripted_paired_bootstrap(raw, params.resamples, params.seed, params.level);
    CHECK(est.point == expected.point);
    CHECK(est.ci_low == expected.lo);
    CHECK(est.ci_high == expected.hi);
}

TEST_CASE("interval bounds are ordered and bracket the point on resampled corpora") {
    histocr::SplitMix64 rng(73);
    for (int round = 0; round < 20; ++round) {
        std::vector<LineMetrics> lines;
        for (std::size_t i = 2 + rng.below(30); i > 0; --i)
            lines.push_back(lm(rng.below(6), 5 + rng.below(60)));
        BootstrapParams params;
        params.resamples = 300;
        params.seed = 1000 + round;
        const auto est = bootstrap_ci(lines, Statistic::CER, params);
        REQUIRE(est.ci_low <= est.ci_high);
        // The point is the full-corpus statistic; with every line present it
        // lies within the convex hull of resample statistics here.
        CHECK(est.ci_low <= est.point);
        CHECK(est.point <= est.ci_high);
    }
}

TEST_CASE("bootstrap parameter validation") {
    const std::vector<LineMetrics> lines = {lm(1, 10)};
    BootstrapParams params;
    params.resamples = 0;
    CHECK_THROWS_AS(bootstrap_ci(lines, Statistic::CER, params), std::invalid_argument);
    params.resamples = 10;
    params.level = 1.0;
    CHECK_THROWS_AS(bootstrap_ci(lines, Statistic::CER, params), std::invalid_argument);
}
