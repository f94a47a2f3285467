#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "histocr/alignment.hpp"
#include "histocr/rng.hpp"
#include "histocr/textnorm.hpp"

namespace histocr {

class UndefinedMetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class LengthCategory : std::uint8_t { Short, Medium, Long };

inline const char* to_string(LengthCategory c) {
    switch (c) {
        case LengthCategory::Short: return "Short";
        case LengthCategory::Medium: return "Medium";
        case LengthCategory::Long: return "Long";
    }
    return "?";
}

struct LengthThresholds {
    std::size_t short_max = 15;  // Short: ref_chars <= short_max
    std::size_t medium_max = 34; // Medium: short_max < ref_chars <= medium_max
};

inline LengthCategory length_category(std::size_t ref_chars, const LengthThresholds& t) {
    if (t.short_max >= t.medium_max)
        throw std::invalid_argument("length thresholds must satisfy short_max < medium_max");
    if (ref_chars <= t.short_max) return LengthCategory::Short;
    if (ref_chars <= t.medium_max) return LengthCategory::Medium;
    return LengthCategory::Long;
}

struct LineMetrics {
    std::size_t char_distance = 0;
    std::size_t ref_chars = 0;
    std::size_t word_distance = 0;
    std::size_t ref_words = 0;
    LengthCategory category = LengthCategory::Short;
};

inline LineMetrics line_metrics(const NormalizedText& ref, const NormalizedText& hyp,
                                const LengthThresholds& thresholds = {}) {
    LineMetrics m;
    m.ref_chars = ref.content.size();
    m.char_distance = char_align(ref, hyp).distance;
    const auto ref_tokens = tokenize(ref);
    const auto hyp_tokens = tokenize(hyp);
    m.ref_words = ref_tokens.size();
    m.word_distance = token_align(ref_tokens, hyp_tokens).word_distance;
    m.category = length_category(m.ref_chars, thresholds);
    return m;
}

// Length-weighted (micro-averaged) corpus rates: pooled edit counts over
// pooled reference lengths.
inline double corpus_cer(std::span<const LineMetrics> lines) {
    std::uint64_t d = 0, n = 0;
    for (const auto& l : lines) {
        d += l.char_distance;
        n += l.ref_chars;
    }
    if (n == 0) throw UndefinedMetricError("corpus CER undefined: total reference length is zero");
    return static_cast<double>(d) / static_cast<double>(n);
}

inline double corpus_wer(std::span<const LineMetrics> lines) {
    std::uint64_t d = 0, n = 0;
    for (const auto& l : lines) {
        d += l.word_distance;
        n += l.ref_words;
    }
    if (n == 0) throw UndefinedMetricError("corpus WER undefined: total reference word count is zero");
    return static_cast<double>(d) / static_cast<double>(n);
}

enum class Statistic : std::uint8_t { CER, WER };

struct MetricEstimate {
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double level = 0.95;
    std::uint64_t resamples = 0;
    std::uint64_t seed = 0;
    std::size_t excluded_zero_length_lines = 0; // reported separately, never resampled

    double half_width() const { return (ci_high - ci_low) / 2.0; }

    bool operator==(const MetricEstimate&) const = default;
};

namespace detail_metrics {

struct Counts {
    std::uint64_t distance = 0;
    std::uint64_t length = 0;
};

inline Counts pick(const LineMetrics& l, Statistic s) {
    if (s == Statistic::CER) return {l.char_distance, l.ref_chars};
    return {l.word_distance, l.ref_words};
}

// Percentile endpoints over the sorted resample statistics, nearest-rank rule:
// index(q) = clamp(ceil(q*B) - 1, 0, B-1). Documented in the README so the
// interval can be reproduced externally.
inline std::pair<double, double> percentile_interval(std::vector<double>& stats, double level) {
    std::sort(stats.begin(), stats.end());
    const auto b = static_cast<double>(stats.size());
    const auto index_for = [&](double q) {
        double idx = std::ceil(q * b) - 1.0;
        if (idx < 0.0) idx = 0.0;
        if (idx > b - 1.0) idx = b - 1.0;
        return static_cast<std::size_t>(idx);
    };
    return {stats[index_for((1.0 - level) / 2.0)], stats[index_for((1.0 + level) / 2.0)]};
}

// Runs `fn(b)` for every resample index, split over `workers` threads. Each
// resample writes to its own slot, so worker count never affects the result.
template <typename Fn>
void for_each_resample(std::uint64_t resamples, unsigned workers, Fn fn) {
    if (workers <= 1 || resamples < 2) {
        for (std::uint64_t b = 0; b < resamples; ++b) fn(b);
        return;
    }
    const unsigned nthreads = std::min<std::uint64_t>(workers, resamples);
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
        threads.emplace_back([=] {
            for (std::uint64_t b = t; b < resamples; b += nthreads) fn(b);
        });
    }
    for (auto& th : threads) th.join();
}

} // namespace detail_metrics

struct BootstrapParams {
    std::uint64_t resamples = 10000;
    std::uint64_t seed = 1766;
    double level = 0.95;
    unsigned workers = 1;
};

// Nonparametric bootstrap over line instances. Lines with zero reference
// length (or zero reference words for WER) are excluded from the resampling
// pool and surfaced via `excluded_zero_length_lines`.
inline MetricEstimate bootstrap_ci(std::span<const LineMetrics> lines, Statistic statistic,
                                   const BootstrapParams& params) {
    if (params.resamples < 1) throw std::invalid_argument("bootstrap requires resamples >= 1");
    if (!(params.level > 0.0 && params.level < 1.0))
        throw std::invalid_argument("bootstrap level must lie in (0, 1)");

    std::vector<detail_metrics::Counts> pool;
    pool.reserve(lines.size());
    std::size_t excluded = 0;
    for (const auto& l : lines) {
        const auto c = detail_metrics::pick(l, statistic);
        if (c.length == 0) {
            ++excluded;
            continue;
        }
        pool.push_back(c);
    }
    if (pool.empty())
        throw UndefinedMetricError("bootstrap undefined: no lines with nonzero reference length");

    MetricEstimate est;
    est.level = params.level;
    est.resamples = params.resamples;
    est.seed = params.seed;
    est.excluded_zero_length_lines = excluded;

    std::uint64_t d = 0, n = 0;
    for (const auto& c : pool) {
        d += c.distance;
        n += c.length;
    }
    est.point = static_cast<double>(d) / static_cast<double>(n);

    const std::size_t count = pool.size();
    std::vector<double> stats(params.resamples);
    detail_metrics::for_each_resample(params.resamples, params.workers, [&](std::uint64_t b) {
        SplitMix64 rng(resample_stream_seed(params.seed, b));
        std::uint64_t rd = 0, rn = 0;
        for (std::size_t k = 0; k < count; ++k) {
            const auto& c = pool[rng.below(count)];
            rd += c.distance;
            rn += c.length;
        }
        stats[b] = static_cast<double>(rd) / static_cast<double>(rn);
    });

    const auto [lo, hi] = detail_metrics::percentile_interval(stats, params.level);
    est.ci_low = lo;
    est.ci_high = hi;
    return est;
}

// One evaluation line carrying the per-system counts needed for the paired
// bootstrap; both systems share the same reference.
struct PairedLineMetrics {
    LineMetrics a;
    LineMetrics b;
};

// Paired bootstrap of (metric_A - metric_B): every resample applies the same
// index multiset to both systems, so the interval reflects per-line deltas.
inline MetricEstimate paired_bootstrap_delta(std::span<const PairedLineMetrics> lines, Statistic statistic,
                                             const BootstrapParams& params) {
    if (params.resamples < 1) throw std::invalid_argument("bootstrap requires resamples >= 1");
    if (!(params.level > 0.0 && params.level < 1.0))
        throw std::invalid_argument("bootstrap level must lie in (0, 1)");

    struct PairCounts {
        detail_metrics::Counts a, b;
    };
    std::vector<PairCounts> pool;
    pool.reserve(lines.size());
    std::size_t excluded = 0;
    for (const auto& l : lines) {
        const PairCounts c{detail_metrics::pick(l.a, statistic), detail_metrics::pick(l.b, statistic)};
        if (c.a.length == 0 || c.b.length == 0) {
            ++excluded;
            continue;
        }
        pool.push_back(c);
    }
    if (pool.empty())
        throw UndefinedMetricError("paired bootstrap undefined: no lines with nonzero reference length");

    MetricEstimate est;
    est.level = params.level;
    est.resamples = params.resamples;
    est.seed = params.seed;
    est.excluded_zero_length_lines = excluded;

    const auto delta_of = [](std::uint64_t da, std::uint64_t na, std::uint64_t db, std::uint64_t nb) {
        return static_cast<double>(da) / static_cast<double>(na) -
               static_cast<double>(db) / static_cast<double>(nb);
    };

    std::uint64_t da = 0, na = 0, db = 0, nb = 0;
    for (const auto& c : pool) {
        da += c.a.distance;
        na += c.a.length;
        db += c.b.distance;
        nb += c.b.length;
    }
    est.point = delta_of(da, na, db, nb);

    const std::size_t count = pool.size();
    std::vector<double> stats(params.resamples);
    detail_metrics::for_each_resample(params.resamples, params.workers, [&](std::uint64_t b) {
        SplitMix64 rng(resample_stream_seed(params.seed, b));
        std::uint64_t rda = 0, rna = 0, rdb = 0, rnb = 0;
        for (std::size_t k = 0; k < count; ++k) {
            const auto& c = pool[rng.below(count)];
            rda += c.a.distance;
            rna += c.a.length;
            rdb += c.b.distance;
            rnb += c.b.length;
        }
        stats[b] = delta_of(rda, rna, rdb, rnb);
    });

    const auto [lo, hi] = detail_metrics::percentile_interval(stats, params.level);
    est.ci_low = lo;
    est.ci_high = hi;
    return est;
}

} // namespace histocr
