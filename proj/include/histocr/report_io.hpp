#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "histocr/analysis.hpp"
#include "histocr/config.hpp"
#include "histocr/version.hpp"

namespace histocr {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// JSON building blocks. Key order is fixed so identical reports serialize to
// identical bytes.

// Worker count is deliberately not echoed: it can never change output bytes,
// and leaving it out keeps reports byte-identical across 1..N workers.
inline ordered_json to_json(const RunConfig& c) {
    ordered_json j;
    j["manifest"] = c.manifest;
    j["historical_lexicon"] = c.historical_lexicon;
    j["modern_lexicon"] = c.modern_lexicon;
    j["confusion_table"] = c.confusion_table.empty() ? "<built-in>" : c.confusion_table;
    j["models"] = c.models;
    j["modalities"] = std::vector<std::string>(c.modalities.begin(), c.modalities.end());
    j["thresholds"] = {{"short_max", c.thresholds.short_max}, {"medium_max", c.thresholds.medium_max}};
    j["bootstrap"] = {{"resamples", c.bootstrap.resamples},
                      {"seed", c.bootstrap.seed},
                      {"level", c.bootstrap.level}};
    j["positional_bins"] = c.positional_bins;
    j["histogram_cap"] = c.histogram_cap;
    j["top_k"] = c.top_k;
    j["out_dir"] = c.out_dir;
    j["formats"] = c.formats;
    j["skip_bad_records"] = c.skip_bad_records;
    return j;
}

inline ordered_json to_json(const MetricEstimate& e) {
    ordered_json j;
    j["point"] = e.point;
    j["ci_low"] = e.ci_low;
    j["ci_high"] = e.ci_high;
    j["half_width"] = e.half_width();
    j["level"] = e.level;
    j["resamples"] = e.resamples;
    j["seed"] = e.seed;
    j["excluded_zero_length_lines"] = e.excluded_zero_length_lines;
    return j;
}

inline MetricEstimate metric_estimate_from_json(const ordered_json& j) {
    MetricEstimate e;
    e.point = j.at("point").get<double>();
    e.ci_low = j.at("ci_low").get<double>();
    e.ci_high = j.at("ci_high").get<double>();
    e.level = j.at("level").get<double>();
    e.resamples = j.at("resamples").get<std::uint64_t>();
    e.seed = j.at("seed").get<std::uint64_t>();
    e.excluded_zero_length_lines = j.at("excluded_zero_length_lines").get<std::size_t>();
    return e;
}

inline ordered_json to_json(const Distribution& d) {
    ordered_json j;
    j["total"] = d.total;
    j["buckets"] = ordered_json::array();
    for (const auto& b : d.buckets)
        j["buckets"].push_back({{"label", b.label}, {"count", b.count}, {"share", b.share}});
    return j;
}

inline ordered_json to_json(const ProxyEvent& ev) {
    ordered_json j;
    j["kind"] = to_string(ev.kind);
    j["ref"] = uni::encode_utf8(ev.ref_surface);
    j["hyp"] = uni::encode_utf8(ev.hyp_surface);
    j["ref_offset"] = ev.ref_offset;
    if (ev.kind == ProxyKind::BoundarySplit || ev.kind == ProxyKind::BoundaryMerge)
        j["punctuation_related"] = ev.punctuation_related;
    if (!ev.pattern_from.empty() || !ev.pattern_to.empty()) {
        j["from"] = uni::encode_utf8(ev.pattern_from);
        j["to"] = uni::encode_utf8(ev.pattern_to);
    }
    if (ev.kind == ProxyKind::RealWord || ev.kind == ProxyKind::NonWord) {
        j["ref_attested"] = ev.ref_attested;
        j["overlaps_structural"] = ev.overlaps_structural;
    }
    return j;
}

inline ordered_json to_json(const LineAnalysis& line) {
    ordered_json j;
    j["id"] = line.line_id;
    if (line.modality) j["modality"] = *line.modality;
    j["category"] = to_string(line.metrics.category);
    j["char_distance"] = line.metrics.char_distance;
    j["ref_chars"] = line.metrics.ref_chars;
    j["word_distance"] = line.metrics.word_distance;
    j["ref_words"] = line.metrics.ref_words;
    j["substitutions"] = ordered_json::array();
    for (const auto& [from, to] : line.substitutions)
        j["substitutions"].push_back({uni::encode_utf8(from), uni::encode_utf8(to)});
    j["anchors"] = line.anchors;
    j["spans"] = ordered_json::array();
    for (const auto& s : line.spans)
        j["spans"].push_back({{"start_ref", s.start_ref}, {"end_ref", s.end_ref}, {"op_count", s.op_count}});
    j["events"] = ordered_json::array();
    for (const auto& ev : line.events) j["events"].push_back(to_json(ev));
    j["lexical_detection_enabled"] = line.lexical_detection_enabled;
    return j;
}

inline ProxyKind proxy_kind_from_string(const std::string& s) {
    for (ProxyKind k : {ProxyKind::RealWord, ProxyKind::NonWord, ProxyKind::BoundarySplit,
                        ProxyKind::BoundaryMerge, ProxyKind::GlyphConfusion,
                        ProxyKind::NormalizationLexical, ProxyKind::NormalizationGraphemic})
        if (s == to_string(k)) return k;
    throw std::invalid_argument("unknown proxy kind: " + s);
}

inline LengthCategory length_category_from_string(const std::string& s) {
    for (LengthCategory c : {LengthCategory::Short, LengthCategory::Medium, LengthCategory::Long})
        if (s == to_string(c)) return c;
    throw std::invalid_argument("unknown length category: " + s);
}

// Inverse of to_json(LineAnalysis); backs the report-purity checks and lets
// external tools re-aggregate persisted events.
inline LineAnalysis line_analysis_from_json(const ordered_json& j, const std::string& line_id_key = "id") {
    LineAnalysis line;
    line.line_id = j.at(line_id_key).get<std::string>();
    if (j.contains("modality")) line.modality = j.at("modality").get<std::string>();
    line.metrics.category = length_category_from_string(j.at("category").get<std::string>());
    line.metrics.char_distance = j.at("char_distance").get<std::size_t>();
    line.metrics.ref_chars = j.at("ref_chars").get<std::size_t>();
    line.metrics.word_distance = j.at("word_distance").get<std::size_t>();
    line.metrics.ref_words = j.at("ref_words").get<std::size_t>();
    for (const auto& s : j.at("substitutions")) {
        const std::u32string from = uni::decode_utf8(s.at(0).get<std::string>());
        const std::u32string to = uni::decode_utf8(s.at(1).get<std::string>());
        line.substitutions.emplace_back(from.at(0), to.at(0));
    }
    for (const auto& a : j.at("anchors")) line.anchors.push_back(a.get<std::size_t>());
    for (const auto& s : j.at("spans"))
        line.spans.push_back(ErrorSpan{s.at("start_ref").get<std::size_t>(), s.at("end_ref").get<std::size_t>(),
                                       s.at("op_count").get<std::size_t>()});
    for (const auto& e : j.at("events")) {
        ProxyEvent ev;
        ev.kind = proxy_kind_from_string(e.at("kind").get<std::string>());
        ev.line_id = line.line_id;
        ev.ref_surface = uni::decode_utf8(e.at("ref").get<std::string>());
        ev.hyp_surface = uni::decode_utf8(e.at("hyp").get<std::string>());
        ev.ref_offset = e.at("ref_offset").get<std::size_t>();
        if (e.contains("punctuation_related")) ev.punctuation_related = e.at("punctuation_related").get<bool>();
        if (e.contains("from")) ev.pattern_from = uni::decode_utf8(e.at("from").get<std::string>());
        if (e.contains("to")) ev.pattern_to = uni::decode_utf8(e.at("to").get<std::string>());
        if (e.contains("ref_attested")) ev.ref_attested = e.at("ref_attested").get<bool>();
        if (e.contains("overlaps_structural")) ev.overlaps_structural = e.at("overlaps_structural").get<bool>();
        line.events.push_back(std::move(ev));
    }
    line.lexical_detection_enabled = j.at("lexical_detection_enabled").get<bool>();
    return line;
}

inline ordered_json to_json(const ModelAnalysis& m) {
    ordered_json j;
    j["model"] = m.model;
    j["metrics"] = ordered_json::object();
    for (const auto& [subset, sm] : m.metrics) {
        ordered_json s;
        s["lines"] = sm.lines;
        s["cer"] = sm.cer ? to_json(*sm.cer) : ordered_json(nullptr);
        s["wer"] = sm.wer ? to_json(*sm.wer) : ordered_json(nullptr);
        j["metrics"][subset] = std::move(s);
    }
    j["confusions"] = ordered_json::array();
    for (const auto& c : m.confusions)
        j["confusions"].push_back(
            {{"from", uni::encode_utf8(c.from)}, {"to", uni::encode_utf8(c.to)}, {"count", c.count}});
    j["substitution_total"] = m.substitution_total;
    j["glyph_confusions"] = m.glyph_confusions;
    j["edit_distance_histogram"] = to_json(m.edit_histogram);
    j["positional"] = ordered_json::object();
    for (const auto& [category, dist] : m.positional.per_category) j["positional"][category] = to_json(dist);
    j["positional_skipped_zero_length_lines"] = m.positional.skipped_zero_length_lines;
    j["word_errors"] = {{"shares", to_json(m.word_shares)},
                        {"real_word", m.word_tally.real_word},
                        {"non_word", m.word_tally.non_word},
                        {"real_word_pure", m.word_tally.real_word_pure},
                        {"non_word_pure", m.word_tally.non_word_pure},
                        {"overlapping_structural", m.word_tally.overlapping_structural}};
    j["boundaries"] = {{"split", {{"punctuation", m.boundary.split_punctuation}, {"plain", m.boundary.split_plain}}},
                       {"merge", {{"punctuation", m.boundary.merge_punctuation}, {"plain", m.boundary.merge_plain}}},
                       {"splits", m.boundary.splits()},
                       {"merges", m.boundary.merges()},
                       {"total", m.boundary.total()}};
    if (m.spans) {
        j["spans"] = {{"mean_span_length", m.spans->mean_span_length},
                      {"max_span_length", m.spans->max_span_length},
                      {"spans_per_errored_line", m.spans->spans_per_errored_line},
                      {"share_of_errors_in_longest_span", m.spans->share_of_errors_in_longest_span},
                      {"errored_lines", m.spans->errored_lines}};
    } else {
        j["spans"] = nullptr;
    }
    j["normalization"] = {{"graphemic", m.normalization.graphemic},
                          {"lexical", m.normalization.lexical},
                          {"lexical_detection_enabled", m.normalization.lexical_detection_enabled}};
    return j;
}

inline ordered_json to_json(const AnalysisReport& report, bool include_lines = false) {
    ordered_json j;
    j["schema_version"] = report.schema_version;
    j["tool"] = {{"name", "histocr"}, {"version", kVersion}};
    j["config"] = to_json(report.config);
    j["corpus"] = {{"lines", report.line_count},
                   {"models", report.model_ids},
                   {"modalities", report.modality_counts}};
    j["models"] = ordered_json::object();
    for (const auto& m : report.models) j["models"][m.model] = to_json(m);
    j["diagnostics"] = ordered_json::object();
    j["diagnostics"]["empty_reference_lines"] = report.diagnostics.empty_reference_lines;
    j["diagnostics"]["skipped_records"] = ordered_json::array();
    for (const auto& d : report.diagnostics.skipped_records)
        j["diagnostics"]["skipped_records"].push_back({{"line", d.line_no}, {"message", d.message}});
    if (include_lines) {
        j["lines"] = ordered_json::object();
        for (const auto& [model, lines] : report.lines) {
            auto arr = ordered_json::array();
            for (const auto& line : lines) arr.push_back(to_json(line));
            j["lines"][model] = std::move(arr);
        }
    }
    return j;
}

// ---------------------------------------------------------------------------
// CSV emission (plot-ready, one file per figure panel)

namespace detail_report {

inline std::string csv_escape(const std::string& s) {
    bool need_quotes = false;
    for (char c : s) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            need_quotes = true;
            break;
        }
    }
    if (!need_quotes) return s;
    std::string out;
    out.reserve(s.size() + 2);
    out.push_back('"');
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// Shortest round-trip formatting, matching the JSON output.
inline std::string format_double(double v) { return nlohmann::json(v).dump(); }

inline std::string sanitize_for_filename(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '-' || c == '_' || c == '.';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? std::string("_") : out;
}

inline void write_file(const std::filesystem::path& path, const std::string& contents,
                       std::vector<std::string>& written) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << contents;
    if (!out) throw IoError("write failure on " + path.string());
    written.push_back(path.string());
}

} // namespace detail_report

inline ordered_json to_json(const EvaluationReport& report) {
    ordered_json j;
    j["schema_version"] = 1;
    j["tool"] = {{"name", "histocr"}, {"version", kVersion}};
    j["config"] = to_json(report.config);
    j["corpus"] = {{"lines", report.line_count},
                   {"models", report.model_ids},
                   {"modalities", report.modality_counts}};
    j["models"] = ordered_json::object();
    for (const auto& [model, subsets] : report.models) {
        ordered_json ms = ordered_json::object();
        for (const auto& [subset, sm] : subsets) {
            ordered_json s;
            s["lines"] = sm.lines;
            s["cer"] = sm.cer ? to_json(*sm.cer) : ordered_json(nullptr);
            s["wer"] = sm.wer ? to_json(*sm.wer) : ordered_json(nullptr);
            ms[subset] = std::move(s);
        }
        j["models"][model] = std::move(ms);
    }
    j["diagnostics"] = {{"empty_reference_lines", report.diagnostics.empty_reference_lines}};
    return j;
}

inline ordered_json to_json(const ComparisonReport& report) {
    ordered_json j;
    j["schema_version"] = 1;
    j["tool"] = {{"name", "histocr"}, {"version", kVersion}};
    j["config"] = to_json(report.config);
    j["models"] = {report.model_a, report.model_b};
    j["lines"] = report.line_count;
    j["delta_cer"] = to_json(report.delta_cer);
    j["delta_wer"] = to_json(report.delta_wer);
    return j;
}

// Writes report.json plus the per-model CSV panels into out_dir. Returns the
// list of files written. Byte-deterministic for identical reports.
inline std::vector<std::string> write_report(const AnalysisReport& report, const std::string& out_dir,
                                             const std::vector<std::string>& formats = {"json", "csv"}) {
    namespace fs = std::filesystem;
    using detail_report::csv_escape;
    using detail_report::format_double;

    fs::create_directories(out_dir);
    std::vector<std::string> written;
    const bool want_json = std::find(formats.begin(), formats.end(), "json") != formats.end();
    const bool want_csv = std::find(formats.begin(), formats.end(), "csv") != formats.end();

    // Every run directory carries the effective configuration, whatever the
    // selected formats.
    detail_report::write_file(fs::path(out_dir) / "config.json", to_json(report.config).dump(2) + "\n",
                              written);

    if (want_json) {
        detail_report::write_file(fs::path(out_dir) / "report.json", to_json(report).dump(2) + "\n", written);
        // Per-line event records, one JSON object per line per model.
        for (const auto& [model, lines] : report.lines) {
            std::string body;
            for (const auto& line : lines) body += to_json(line).dump() + "\n";
            detail_report::write_file(
                fs::path(out_dir) / ("events_" + detail_report::sanitize_for_filename(model) + ".jsonl"), body,
                written);
        }
    }

    if (want_csv) {
        for (const auto& m : report.models) {
            const std::string tag = detail_report::sanitize_for_filename(m.model);

            std::string confusions = "from,to,count\n";
            for (const auto& c : m.confusions)
                confusions += csv_escape(uni::encode_utf8(c.from)) + "," + csv_escape(uni::encode_utf8(c.to)) +
                              "," + std::to_string(c.count) + "\n";
            detail_report::write_file(fs::path(out_dir) / ("confusions_" + tag + ".csv"), confusions, written);

            std::string hist = "distance,count,share\n";
            for (const auto& b : m.edit_histogram.buckets)
                hist += csv_escape(b.label) + "," + std::to_string(b.count) + "," + format_double(b.share) + "\n";
            detail_report::write_file(fs::path(out_dir) / ("edit_hist_" + tag + ".csv"), hist, written);

            for (const auto& [category, dist] : m.positional.per_category) {
                std::string pos = "bin,count,share\n";
                for (const auto& b : dist.buckets)
                    pos += csv_escape(b.label) + "," + std::to_string(b.count) + "," + format_double(b.share) + "\n";
                detail_report::write_file(fs::path(out_dir) / ("positional_" + tag + "_" + category + ".csv"),
                                          pos, written);
            }

            std::string shares = "kind,count,share\n";
            for (const auto& b : m.word_shares.buckets)
                shares += csv_escape(b.label) + "," + std::to_string(b.count) + "," + format_double(b.share) + "\n";
            detail_report::write_file(fs::path(out_dir) / ("shares_" + tag + ".csv"), shares, written);

            std::string boundary = "kind,punctuation_related,count\n";
            boundary += "split,true," + std::to_string(m.boundary.split_punctuation) + "\n";
            boundary += "split,false," + std::to_string(m.boundary.split_plain) + "\n";
            boundary += "merge,true," + std::to_string(m.boundary.merge_punctuation) + "\n";
            boundary += "merge,false," + std::to_string(m.boundary.merge_plain) + "\n";
            detail_report::write_file(fs::path(out_dir) / ("boundary_" + tag + ".csv"), boundary, written);

            std::string spans = "stat,value\n";
            if (m.spans) {
                spans += "mean_span_length," + format_double(m.spans->mean_span_length) + "\n";
                spans += "max_span_length," + std::to_string(m.spans->max_span_length) + "\n";
                spans += "spans_per_errored_line," + format_double(m.spans->spans_per_errored_line) + "\n";
                spans += "share_of_errors_in_longest_span," +
                         format_double(m.spans->share_of_errors_in_longest_span) + "\n";
                spans += "errored_lines," + std::to_string(m.spans->errored_lines) + "\n";
            }
            detail_report::write_file(fs::path(out_dir) / ("spans_" + tag + ".csv"), spans, written);
        }
    }

    return written;
}

// Writes metrics.json (and metrics.csv in Table-1/Table-2 shape: one row per
// subset x model x metric).
inline std::vector<std::string> write_evaluation(const EvaluationReport& report, const std::string& out_dir,
                                                 const std::vector<std::string>& formats = {"json", "csv"}) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    const bool want_json = std::find(formats.begin(), formats.end(), "json") != formats.end();
    const bool want_csv = std::find(formats.begin(), formats.end(), "csv") != formats.end();

    detail_report::write_file(fs::path(out_dir) / "config.json", to_json(report.config).dump(2) + "\n",
                              written);

    if (want_json)
        detail_report::write_file(fs::path(out_dir) / "metrics.json", to_json(report).dump(2) + "\n", written);

    if (want_csv) {
        std::string csv = "subset,model,metric,lines,point,ci_low,ci_high,half_width\n";
        for (const auto& [model, subsets] : report.models) {
            for (const auto& [subset, sm] : subsets) {
                const auto row = [&](const char* name, const std::optional<MetricEstimate>& e) {
                    csv += detail_report::csv_escape(subset) + "," + detail_report::csv_escape(model) + "," +
                           name + "," + std::to_string(sm.lines) + ",";
                    if (e) {
                        csv += detail_report::format_double(e->point) + "," +
                               detail_report::format_double(e->ci_low) + "," +
                               detail_report::format_double(e->ci_high) + "," +
                               detail_report::format_double(e->half_width());
                    } else {
                        csv += ",,,";
                    }
                    csv += "\n";
                };
                row("cer", sm.cer);
                row("wer", sm.wer);
            }
        }
        detail_report::write_file(fs::path(out_dir) / "metrics.csv", csv, written);
    }
    return written;
}

inline std::vector<std::string> write_comparison(const ComparisonReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    const std::string name = "compare_" + detail_report::sanitize_for_filename(report.model_a) + "_vs_" +
                             detail_report::sanitize_for_filename(report.model_b) + ".json";
    detail_report::write_file(fs::path(out_dir) / name, to_json(report).dump(2) + "\n", written);
    return written;
}

} // namespace histocr
