#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "histocr/alignment.hpp"
#include "histocr/config.hpp"
#include "histocr/ingest.hpp"
#include "histocr/lexicon.hpp"
#include "histocr/metrics.hpp"
#include "histocr/taxonomy.hpp"

namespace histocr {

struct Bucket {
    std::string label;
    std::uint64_t count = 0;
    double share = 0.0;
};

struct Distribution {
    std::vector<Bucket> buckets;
    std::uint64_t total = 0;

    const Bucket* find(std::string_view label) const {
        for (const auto& b : buckets)
            if (b.label == label) return &b;
        return nullptr;
    }
};

namespace detail_analysis {

inline Distribution finish_distribution(std::vector<std::pair<std::string, std::uint64_t>> counts) {
    Distribution d;
    for (const auto& [label, count] : counts) d.total += count;
    if (d.total == 0) return d;
    d.buckets.reserve(counts.size());
    for (auto& [label, count] : counts)
        d.buckets.push_back(Bucket{std::move(label), count, static_cast<double>(count) / static_cast<double>(d.total)});
    return d;
}

} // namespace detail_analysis

struct ConfusionCount {
    char32_t from;
    char32_t to;
    std::uint64_t count;

    bool operator==(const ConfusionCount&) const = default;
};

// Substitute-op confusions ranked by count; ties break lexicographically by
// (from, to) code points for reproducible tables.
inline std::vector<ConfusionCount> confusion_top_k(std::span<const CharAlignment> alignments, std::size_t k) {
    std::map<std::pair<char32_t, char32_t>, std::uint64_t> counts;
    for (const auto& a : alignments)
        for (const auto& op : a.ops)
            if (op.kind == EditKind::Substitute) ++counts[{op.ref_scalar, op.hyp_scalar}];
    std::vector<ConfusionCount> ranked;
    ranked.reserve(counts.size());
    for (const auto& [pair, count] : counts) ranked.push_back(ConfusionCount{pair.first, pair.second, count});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const ConfusionCount& a, const ConfusionCount& b) { return a.count > b.count; });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

// Overload used by aggregation paths that only kept (from, to) pairs.
inline std::vector<ConfusionCount> confusion_top_k(
    std::span<const std::pair<char32_t, char32_t>> substitutions, std::size_t k) {
    std::map<std::pair<char32_t, char32_t>, std::uint64_t> counts;
    for (const auto& s : substitutions) ++counts[s];
    std::vector<ConfusionCount> ranked;
    ranked.reserve(counts.size());
    for (const auto& [pair, count] : counts) ranked.push_back(ConfusionCount{pair.first, pair.second, count});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const ConfusionCount& a, const ConfusionCount& b) { return a.count > b.count; });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

// Distribution of errored lines over their per-line edit distance: buckets
// 1 .. cap-1 plus ">=cap". Distance-0 lines do not count as errors.
inline Distribution edit_distance_histogram(std::span<const std::size_t> line_distances, std::size_t cap = 10) {
    std::vector<std::uint64_t> counts(cap, 0); // slot i = distance i+1; last slot = >=cap
    std::uint64_t total = 0;
    for (std::size_t d : line_distances) {
        if (d == 0) continue;
        ++total;
        if (d >= cap)
            ++counts[cap - 1];
        else
            ++counts[d - 1];
    }
    Distribution dist;
    dist.total = total;
    if (total == 0) return dist;
    for (std::size_t i = 0; i + 1 < cap; ++i)
        dist.buckets.push_back(Bucket{std::to_string(i + 1), counts[i],
                                      static_cast<double>(counts[i]) / static_cast<double>(total)});
    dist.buckets.push_back(Bucket{">=" + std::to_string(cap), counts[cap - 1],
                                  static_cast<double>(counts[cap - 1]) / static_cast<double>(total)});
    return dist;
}

// Positions of non-Match ops normalized by reference length and bucketed into
// equal-width bins (anchor i in a length-N line falls in bin i*bins/N).
// Profiles are kept per length category; zero-length references are skipped
// and counted.
struct PositionalProfile {
    std::map<std::string, Distribution> per_category;
    std::size_t skipped_zero_length_lines = 0;
};

struct LinePositions {
    std::vector<std::size_t> anchors; // ref anchor of every non-Match op
    std::size_t ref_length = 0;
    LengthCategory category = LengthCategory::Short;
};

inline std::vector<std::size_t> non_match_anchors(const CharAlignment& a) {
    std::vector<std::size_t> anchors;
    std::size_t last_ref = 0;
    for (const EditOp& op : a.ops) {
        if (op.kind == EditKind::Match) {
            last_ref = *op.ref_index;
            continue;
        }
        anchors.push_back(ref_anchor(op, last_ref));
        if (op.ref_index) last_ref = *op.ref_index;
    }
    return anchors;
}

inline PositionalProfile positional_profile(std::span<const LinePositions> lines, std::size_t bins = 10) {
    if (bins < 2) throw std::invalid_argument("positional profile requires bins >= 2");
    PositionalProfile profile;
    std::map<std::string, std::vector<std::uint64_t>> counts;
    for (const auto& line : lines) {
        if (line.ref_length == 0) {
            if (!line.anchors.empty()) ++profile.skipped_zero_length_lines;
            continue;
        }
        auto& c = counts[to_string(line.category)];
        if (c.empty()) c.assign(bins, 0);
        for (std::size_t anchor : line.anchors) {
            std::size_t bin = anchor * bins / line.ref_length;
            if (bin >= bins) bin = bins - 1;
            ++c[bin];
        }
    }
    for (auto& [category, c] : counts) {
        std::vector<std::pair<std::string, std::uint64_t>> labelled;
        labelled.reserve(bins);
        for (std::size_t i = 0; i < bins; ++i) labelled.emplace_back(std::to_string(i + 1), c[i]);
        profile.per_category[category] = detail_analysis::finish_distribution(std::move(labelled));
    }
    return profile;
}

// Share of word-level errors that still form attested words.
inline Distribution word_nonword_shares(std::span<const ProxyEvent> events) {
    std::uint64_t real = 0, non = 0;
    for (const auto& ev : events) {
        if (ev.kind == ProxyKind::RealWord) ++real;
        if (ev.kind == ProxyKind::NonWord) ++non;
    }
    if (real + non == 0) return Distribution{};
    return detail_analysis::finish_distribution({{"real-word", real}, {"non-word", non}});
}

struct BoundaryBreakdown {
    std::uint64_t split_punctuation = 0;
    std::uint64_t split_plain = 0;
    std::uint64_t merge_punctuation = 0;
    std::uint64_t merge_plain = 0;

    std::uint64_t splits() const { return split_punctuation + split_plain; }
    std::uint64_t merges() const { return merge_punctuation + merge_plain; }
    std::uint64_t total() const { return splits() + merges(); }

    bool operator==(const BoundaryBreakdown&) const = default;
};

inline BoundaryBreakdown boundary_breakdown(std::span<const ProxyEvent> events) {
    BoundaryBreakdown b;
    for (const auto& ev : events) {
        if (ev.kind == ProxyKind::BoundarySplit)
            ++(ev.punctuation_related ? b.split_punctuation : b.split_plain);
        else if (ev.kind == ProxyKind::BoundaryMerge)
            ++(ev.punctuation_related ? b.merge_punctuation : b.merge_plain);
    }
    return b;
}

// Contiguity statistics over lines with at least one error span; absent when
// the corpus has no errored lines.
struct SpanStats {
    double mean_span_length = 0.0;
    std::size_t max_span_length = 0;
    double spans_per_errored_line = 0.0;
    double share_of_errors_in_longest_span = 0.0; // mean over errored lines
    std::size_t errored_lines = 0;
};

inline std::optional<SpanStats> span_statistics(std::span<const std::vector<ErrorSpan>> spans_per_line) {
    SpanStats s;
    std::uint64_t span_count = 0, op_sum = 0;
    double share_sum = 0.0;
    for (const auto& spans : spans_per_line) {
        if (spans.empty()) continue;
        ++s.errored_lines;
        std::uint64_t line_ops = 0, line_max = 0;
        for (const auto& sp : spans) {
            ++span_count;
            op_sum += sp.op_count;
            line_ops += sp.op_count;
            line_max = std::max<std::uint64_t>(line_max, sp.op_count);
            s.max_span_length = std::max(s.max_span_length, sp.op_count);
        }
        share_sum += static_cast<double>(line_max) / static_cast<double>(line_ops);
    }
    if (s.errored_lines == 0) return std::nullopt;
    s.mean_span_length = static_cast<double>(op_sum) / static_cast<double>(span_count);
    s.spans_per_errored_line = static_cast<double>(span_count) / static_cast<double>(s.errored_lines);
    s.share_of_errors_in_longest_span = share_sum / static_cast<double>(s.errored_lines);
    return s;
}

// ---------------------------------------------------------------------------
// Per-line analysis records and report aggregation

// Everything the report tallies need from one (line, model) pair. Reports are
// pure aggregations of these records; persisting them and re-aggregating
// reproduces the report exactly.
struct LineAnalysis {
    std::string line_id;
    std::optional<std::string> modality;
    LineMetrics metrics;
    std::vector<std::pair<char32_t, char32_t>> substitutions;
    std::vector<std::size_t> anchors; // ref anchor per non-Match op
    std::vector<ErrorSpan> spans;
    std::vector<ProxyEvent> events; // word, boundary, glyph, normalization
    bool lexical_detection_enabled = false;
};

// Full per-line pipeline for one model hypothesis.
inline LineAnalysis analyze_line(const std::string& line_id, const std::optional<std::string>& modality,
                                 const NormalizedText& ref, const NormalizedText& hyp,
                                 const ConfusionTable& table, const Lexicon& historical,
                                 const Lexicon* modern, const LengthThresholds& thresholds) {
    LineAnalysis out;
    out.line_id = line_id;
    out.modality = modality;

    const CharAlignment ca = char_align(ref, hyp);
    const TokenAlignment ta = token_align(tokenize(ref), tokenize(hyp));

    out.metrics.ref_chars = ref.content.size();
    out.metrics.char_distance = ca.distance;
    out.metrics.ref_words = ta.ref_tokens.size();
    out.metrics.word_distance = ta.word_distance;
    out.metrics.category = length_category(out.metrics.ref_chars, thresholds);

    for (const EditOp& op : ca.ops)
        if (op.kind == EditKind::Substitute) out.substitutions.emplace_back(op.ref_scalar, op.hyp_scalar);
    out.anchors = non_match_anchors(ca);
    out.spans = error_spans(ca);

    LineClassification cls = classify_line(ref, hyp, ca, ta, table, historical, modern, line_id);
    out.lexical_detection_enabled = cls.lexical_detection_enabled;
    out.events.reserve(cls.word_events.size() + cls.boundary_events.size() + cls.glyph_events.size() +
                       cls.normalization_events.size());
    for (auto* bucket : {&cls.word_events, &cls.boundary_events, &cls.glyph_events, &cls.normalization_events})
        for (ProxyEvent& ev : *bucket) out.events.push_back(std::move(ev));
    return out;
}

struct WordErrorTally {
    std::uint64_t real_word = 0;
    std::uint64_t non_word = 0;
    std::uint64_t real_word_pure = 0; // not overlapping boundary/pattern events
    std::uint64_t non_word_pure = 0;
    std::uint64_t overlapping_structural = 0;

    bool operator==(const WordErrorTally&) const = default;
};

struct NormalizationTally {
    std::uint64_t graphemic = 0;
    std::uint64_t lexical = 0;
    bool lexical_detection_enabled = false;

    bool operator==(const NormalizationTally&) const = default;
};

struct SubsetMetrics {
    std::size_t lines = 0;
    std::optional<MetricEstimate> cer; // absent when the subset denominator is empty
    std::optional<MetricEstimate> wer;
};

// Aggregated view of one model over the whole corpus.
struct ModelAnalysis {
    std::string model;
    std::map<std::string, SubsetMetrics> metrics; // "all", "modality:...", "length:..."
    std::vector<ConfusionCount> confusions;
    std::uint64_t substitution_total = 0;
    std::uint64_t glyph_confusions = 0;
    Distribution edit_histogram;
    PositionalProfile positional;
    Distribution word_shares;
    WordErrorTally word_tally;
    BoundaryBreakdown boundary;
    std::optional<SpanStats> spans;
    NormalizationTally normalization;
};

namespace detail_analysis {

inline void add_subset(std::map<std::string, SubsetMetrics>& out, const std::string& name,
                       std::span<const LineMetrics> lines, const BootstrapParams& params) {
    SubsetMetrics subset;
    subset.lines = lines.size();
    try {
        subset.cer = bootstrap_ci(lines, Statistic::CER, params);
    } catch (const UndefinedMetricError&) {
    }
    try {
        subset.wer = bootstrap_ci(lines, Statistic::WER, params);
    } catch (const UndefinedMetricError&) {
    }
    out.emplace(name, std::move(subset));
}

} // namespace detail_analysis

// Pure aggregation of per-line records into the per-model report section.
inline ModelAnalysis aggregate_model(const std::string& model, std::span<const LineAnalysis> lines,
                                     const RunConfig& config) {
    ModelAnalysis m;
    m.model = model;

    std::vector<LineMetrics> all_metrics;
    std::map<std::string, std::vector<LineMetrics>> by_modality;
    std::map<std::string, std::vector<LineMetrics>> by_category;
    std::vector<std::pair<char32_t, char32_t>> substitutions;
    std::vector<std::size_t> distances;
    std::vector<LinePositions> positions;
    std::vector<std::vector<ErrorSpan>> spans_per_line;
    std::vector<ProxyEvent> word_events;

    for (const LineAnalysis& line : lines) {
        all_metrics.push_back(line.metrics);
        if (line.modality) by_modality["modality:" + *line.modality].push_back(line.metrics);
        by_category[std::string("length:") + to_string(line.metrics.category)].push_back(line.metrics);
        substitutions.insert(substitutions.end(), line.substitutions.begin(), line.substitutions.end());
        distances.push_back(line.metrics.char_distance);
        positions.push_back(LinePositions{line.anchors, line.metrics.ref_chars, line.metrics.category});
        spans_per_line.push_back(line.spans);
        for (const ProxyEvent& ev : line.events) {
            switch (ev.kind) {
                case ProxyKind::RealWord:
                    ++m.word_tally.real_word;
                    if (ev.overlaps_structural)
                        ++m.word_tally.overlapping_structural;
                    else
                        ++m.word_tally.real_word_pure;
                    word_events.push_back(ev);
                    break;
                case ProxyKind::NonWord:
                    ++m.word_tally.non_word;
                    if (ev.overlaps_structural)
                        ++m.word_tally.overlapping_structural;
                    else
                        ++m.word_tally.non_word_pure;
                    word_events.push_back(ev);
                    break;
                case ProxyKind::BoundarySplit:
                case ProxyKind::BoundaryMerge:
                    if (ev.kind == ProxyKind::BoundarySplit)
                        ++(ev.punctuation_related ? m.boundary.split_punctuation : m.boundary.split_plain);
                    else
                        ++(ev.punctuation_related ? m.boundary.merge_punctuation : m.boundary.merge_plain);
                    break;
                case ProxyKind::GlyphConfusion:
                    ++m.glyph_confusions;
                    break;
                case ProxyKind::NormalizationGraphemic:
                    ++m.normalization.graphemic;
                    break;
                case ProxyKind::NormalizationLexical:
                    ++m.normalization.lexical;
                    break;
            }
        }
        m.normalization.lexical_detection_enabled |= line.lexical_detection_enabled;
    }

    detail_analysis::add_subset(m.metrics, "all", all_metrics, config.bootstrap);
    for (const auto& [name, subset] : by_modality)
        detail_analysis::add_subset(m.metrics, name, subset, config.bootstrap);
    for (const auto& [name, subset] : by_category)
        detail_analysis::add_subset(m.metrics, name, subset, config.bootstrap);

    m.confusions = confusion_top_k(std::span<const std::pair<char32_t, char32_t>>(substitutions), config.top_k);
    m.substitution_total = substitutions.size();
    m.edit_histogram = edit_distance_histogram(distances, config.histogram_cap);
    m.positional = positional_profile(positions, config.positional_bins);
    m.word_shares = word_nonword_shares(word_events);
    m.spans = span_statistics(spans_per_line);
    return m;
}

struct ReportDiagnostics {
    std::vector<std::string> empty_reference_lines;
    std::vector<ManifestDiagnostic> skipped_records;
};

struct AnalysisReport {
    int schema_version = 1;
    RunConfig config;
    std::size_t line_count = 0;
    std::vector<std::string> model_ids;
    std::map<std::string, std::size_t> modality_counts;
    std::vector<ModelAnalysis> models;
    // Per-model per-line records backing every tally above.
    std::map<std::string, std::vector<LineAnalysis>> lines;
    ReportDiagnostics diagnostics;
};

namespace detail_analysis {

template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn fn) {
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
        threads.emplace_back([=] {
            for (std::size_t i = t; i < count; i += nthreads) fn(i);
        });
    }
    for (auto& th : threads) th.join();
}

} // namespace detail_analysis

// Metrics-only evaluation (Table-1/Table-2 shape): length-weighted CER/WER
// with bootstrap intervals per subset, no taxonomy.
struct EvaluationReport {
    RunConfig config;
    std::size_t line_count = 0;
    std::vector<std::string> model_ids;
    std::map<std::string, std::size_t> modality_counts;
    std::map<std::string, std::map<std::string, SubsetMetrics>> models;
    ReportDiagnostics diagnostics;
};

inline EvaluationReport evaluate_metrics(std::span<const LineRecord> records, const RunConfig& config) {
    if (records.empty()) throw std::invalid_argument("evaluation requires at least one record");

    EvaluationReport report;
    report.config = config;
    report.line_count = records.size();

    std::vector<std::string> models = config.models;
    if (models.empty()) {
        std::set<std::string> ids;
        for (const auto& r : records)
            for (const auto& [model, hyp] : r.hypotheses) ids.insert(model);
        models.assign(ids.begin(), ids.end());
    }
    report.model_ids = models;

    for (const auto& r : records) {
        if (r.modality) ++report.modality_counts[*r.modality];
        if (r.reference.empty()) report.diagnostics.empty_reference_lines.push_back(r.id);
    }

    for (const std::string& model : models) {
        std::vector<const LineRecord*> with_model;
        for (const auto& r : records)
            if (r.hypotheses.count(model)) with_model.push_back(&r);

        std::vector<LineMetrics> all(with_model.size());
        detail_analysis::parallel_for(with_model.size(), config.bootstrap.workers, [&](std::size_t i) {
            const LineRecord& r = *with_model[i];
            all[i] = line_metrics(r.reference, r.hypotheses.at(model), config.thresholds);
        });

        std::map<std::string, std::vector<LineMetrics>> by_modality, by_category;
        for (std::size_t i = 0; i < with_model.size(); ++i) {
            if (with_model[i]->modality)
                by_modality["modality:" + *with_model[i]->modality].push_back(all[i]);
            by_category[std::string("length:") + to_string(all[i].category)].push_back(all[i]);
        }
        std::map<std::string, SubsetMetrics> subsets;
        detail_analysis::add_subset(subsets, "all", all, config.bootstrap);
        for (const auto& [name, lines] : by_modality)
            detail_analysis::add_subset(subsets, name, lines, config.bootstrap);
        for (const auto& [name, lines] : by_category)
            detail_analysis::add_subset(subsets, name, lines, config.bootstrap);
        report.models.emplace(model, std::move(subsets));
    }
    return report;
}

// Paired comparison of two models over the same lines: every line must carry
// both hypotheses; the offending line id is reported otherwise.
struct ComparisonReport {
    RunConfig config;
    std::string model_a;
    std::string model_b;
    std::size_t line_count = 0;
    MetricEstimate delta_cer; // metric(A) - metric(B)
    MetricEstimate delta_wer;
};

inline ComparisonReport compare_models(std::span<const LineRecord> records, const std::string& model_a,
                                       const std::string& model_b, const RunConfig& config) {
    if (records.empty()) throw std::invalid_argument("comparison requires at least one record");
    for (const auto& r : records) {
        if (!r.hypotheses.count(model_a))
            throw std::invalid_argument("line '" + r.id + "' lacks a hypothesis for model '" + model_a + "'");
        if (!r.hypotheses.count(model_b))
            throw std::invalid_argument("line '" + r.id + "' lacks a hypothesis for model '" + model_b + "'");
    }

    std::vector<PairedLineMetrics> paired(records.size());
    detail_analysis::parallel_for(records.size(), config.bootstrap.workers, [&](std::size_t i) {
        const LineRecord& r = records[i];
        paired[i].a = line_metrics(r.reference, r.hypotheses.at(model_a), config.thresholds);
        paired[i].b = line_metrics(r.reference, r.hypotheses.at(model_b), config.thresholds);
    });

    ComparisonReport report;
    report.config = config;
    report.model_a = model_a;
    report.model_b = model_b;
    report.line_count = records.size();
    report.delta_cer = paired_bootstrap_delta(paired, Statistic::CER, config.bootstrap);
    report.delta_wer = paired_bootstrap_delta(paired, Statistic::WER, config.bootstrap);
    return report;
}

// End-to-end analysis: per-line classification for every requested model,
// then pure aggregation. Per-line failures (empty references) are reported in
// diagnostics, never fatal. Deterministic for any worker count.
inline AnalysisReport build_report(std::span<const LineRecord> records, const ConfusionTable& table,
                                   const Lexicon& historical, const Lexicon* modern, const RunConfig& config) {
    if (records.empty()) throw std::invalid_argument("analysis requires at least one record");

    AnalysisReport report;
    report.config = config;
    report.line_count = records.size();

    std::vector<std::string> models = config.models;
    if (models.empty()) {
        std::set<std::string> ids;
        for (const auto& r : records)
            for (const auto& [model, hyp] : r.hypotheses) ids.insert(model);
        models.assign(ids.begin(), ids.end());
    }
    report.model_ids = models;

    for (const auto& r : records) {
        if (r.modality) ++report.modality_counts[*r.modality];
        if (r.reference.empty()) report.diagnostics.empty_reference_lines.push_back(r.id);
    }

    for (const std::string& model : models) {
        std::vector<const LineRecord*> with_model;
        with_model.reserve(records.size());
        for (const auto& r : records)
            if (r.hypotheses.count(model)) with_model.push_back(&r);

        std::vector<LineAnalysis> lines(with_model.size());
        detail_analysis::parallel_for(with_model.size(), config.bootstrap.workers, [&](std::size_t i) {
            const LineRecord& r = *with_model[i];
            lines[i] = analyze_line(r.id, r.modality, r.reference, r.hypotheses.at(model), table, historical,
                                    modern, config.thresholds);
        });
        report.models.push_back(aggregate_model(model, lines, config));
        report.lines.emplace(model, std::move(lines));
    }
    return report;
}

} // namespace histocr
