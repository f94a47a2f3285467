#pragma once

// Independent oracles used by the unit and acceptance suites. Everything here
// deliberately avoids the library's DP/bootstrap implementations: edit
// distances come from plain exponential recursion, bootstrap intervals from a
// from-scratch reimplementation of the documented resampling recipe.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace oracle {

// Exponential-time recursive Levenshtein distance (unit costs).
inline std::size_t naive_edit_distance(std::u32string_view a, std::u32string_view b) {
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();
    const std::size_t diag = naive_edit_distance(a.substr(1), b.substr(1)) + (a[0] == b[0] ? 0 : 1);
    const std::size_t del = naive_edit_distance(a.substr(1), b) + 1;
    const std::size_t ins = naive_edit_distance(a, b.substr(1)) + 1;
    return std::min(diag, std::min(del, ins));
}

// Same recursion over token sequences.
inline std::size_t naive_token_distance(const std::vector<std::u32string>& a,
                                        const std::vector<std::u32string>& b, std::size_t i = 0,
                                        std::size_t j = 0) {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    const std::size_t diag = naive_token_distance(a, b, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    const std::size_t del = naive_token_distance(a, b, i + 1, j) + 1;
    const std::size_t ins = naive_token_distance(a, b, i, j + 1) + 1;
    return std::min(diag, std::min(del, ins));
}

// From-scratch SplitMix64, written from the documented recipe.
struct Splitmix {
    std::uint64_t s;
    std::uint64_t next() {
        s += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

struct Interval {
    double point;
    double lo;
    double hi;
};

// Independent scripted bootstrap following the documented scheme:
//   stream seed of resample b = seed + (b+1) * 0x9E3779B97F4A7C15 (wrapping),
//   n draws of SplitMix64 % n per resample, pooled-ratio statistic,
//   nearest-rank percentile endpoints index(q) = clamp(ceil(q*B)-1, 0, B-1).
inline Interval scripted_bootstrap(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& lines,
                                   std::uint64_t resamples, std::uint64_t seed, double level) {
    const std::size_t n = lines.size();
    std::uint64_t d = 0, len = 0;
    for (const auto& [ld, ln] : lines) {
        d += ld;
        len += ln;
    }
    Interval result{static_cast<double>(d) / static_cast<double>(len), 0.0, 0.0};

    std::vector<double> stats;
    stats.reserve(resamples);
    for (std::uint64_t b = 0; b < resamples; ++b) {
        Splitmix rng{seed + (b + 1) * 0x9E3779B97F4A7C15ULL};
        std::uint64_t rd = 0, rn = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto& [ld, ln] = lines[rng.next() % n];
            rd += ld;
            rn += ln;
        }
        stats.push_back(static_cast<double>(rd) / static_cast<double>(rn));
    }
    std::sort(stats.begin(), stats.end());
    const auto index_for = [&](double q) {
        double idx = std::ceil(q * static_cast<double>(resamples)) - 1.0;
        if (idx < 0.0) idx = 0.0;
        if (idx > static_cast<double>(resamples) - 1.0) idx = static_cast<double>(resamples) - 1.0;
        return static_cast<std::size_t>(idx);
    };
    result.lo = stats[index_for((1.0 - level) / 2.0)];
    result.hi = stats[index_for((1.0 + level) / 2.0)];
    return result;
}

// Paired variant: same index stream applied to both systems per resample.
inline Interval scripted_paired_bootstrap(
    const std::vector<std::pair<std::pair<std::uint64_t, std::uint64_t>,
                                std::pair<std::uint64_t, std::uint64_t>>>& lines,
    std::uint64_t resamples, std::uint64_t seed, double level) {
    const std::size_t n = lines.size();
    std::uint64_t da = 0, na = 0, db = 0, nb = 0;
    for (const auto& [a, b] : lines) {
        da += a.first;
        na += a.second;
        db += b.first;
        nb += b.second;
    }
    Interval result{static_cast<double>(da) / static_cast<double>(na) -
                        static_cast<double>(db) / static_cast<double>(nb),
                    0.0, 0.0};

    std::vector<double> stats;
    stats.reserve(resamples);
    for (std::uint64_t r = 0; r < resamples; ++r) {
        Splitmix rng{seed + (r + 1) * 0x9E3779B97F4A7C15ULL};
        std::uint64_t rda = 0, rna = 0, rdb = 0, rnb = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto& [a, b] = lines[rng.next() % n];
            rda += a.first;
            rna += a.second;
            rdb += b.first;
            rnb += b.second;
        }
        stats.push_back(static_cast<double>(rda) / static_cast<double>(rna) -
                        static_cast<double>(rdb) / static_cast<double>(rnb));
    }
    std::sort(stats.begin(), stats.end());
    const auto index_for = [&](double q) {
        double idx = std::ceil(q * static_cast<double>(resamples)) - 1.0;
        if (idx < 0.0) idx = 0.0;
        if (idx > static_cast<double>(resamples) - 1.0) idx = static_cast<double>(resamples) - 1.0;
        return static_cast<std::size_t>(idx);
    };
    result.lo = stats[index_for((1.0 - level) / 2.0)];
    result.hi = stats[index_for((1.0 + level) / 2.0)];
    return result;
}

} // namespace oracle
