// histocr — line-level OCR evaluation for historical print.
//
// Subcommands:
//   normalize      apply the minimal diplomatic normalization (stdin -> stdout)
//   lexicon build  build an attestation lexicon from corpus files
//   evaluate       length-weighted CER/WER with bootstrap CIs (Table shape)
//   analyze        full error-taxonomy report with plot-ready CSV panels
//   compare        paired bootstrap delta between two models
//   synth-demo     regenerate the bundled synthetic demo corpus
//
// Exit codes: 0 success, 1 validation failure, 2 I/O failure.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "histocr/histocr.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

class ValidationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

histocr::Lexicon load_lexicon_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw histocr::IoError("cannot open lexicon: " + path);
    return histocr::load_lexicon(in);
}

histocr::ConfusionTable load_table_or_default(const std::string& path) {
    if (path.empty()) return histocr::default_confusion_table();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw histocr::IoError("cannot open confusion table: " + path);
    return histocr::load_confusion_table(in);
}

histocr::Manifest read_manifest_checked(const histocr::RunConfig& config) {
    histocr::ManifestOptions options;
    options.skip_bad_records = config.skip_bad_records;
    options.modalities = config.modalities;
    return histocr::read_manifest_file(config.manifest, options);
}

void check_formats(const histocr::RunConfig& config) {
    for (const auto& f : config.formats)
        if (f != "json" && f != "csv")
            throw ValidationFailure("unknown output format '" + f + "' (expected json or csv)");
}

void check_requested_models(const histocr::Manifest& manifest, const std::vector<std::string>& models) {
    for (const auto& model : models) {
        bool found = false;
        for (const auto& r : manifest.records)
            if (r.hypotheses.count(model)) {
                found = true;
                break;
            }
        if (!found)
            throw ValidationFailure("model '" + model + "' does not appear in any manifest record");
    }
}

void add_manifest_flags(CLI::App* cmd, histocr::RunConfig& config, std::vector<std::string>& modalities_buf) {
    cmd->add_flag("--skip-bad-records", config.skip_bad_records,
                  "Skip invalid manifest records with a diagnostic instead of aborting");
    cmd->add_option("--modalities", modalities_buf,
                    "Accepted modality values (default: color bw); pass none to disable validation");
}

void add_bootstrap_flags(CLI::App* cmd, histocr::RunConfig& config) {
    cmd->add_option("--seed", config.bootstrap.seed, "Bootstrap seed (default 1766)");
    cmd->add_option("--resamples", config.bootstrap.resamples, "Bootstrap resamples (default 10000)");
    cmd->add_option("--level", config.bootstrap.level, "Confidence level in (0,1) (default 0.95)");
    cmd->add_option("--workers", config.bootstrap.workers, "Worker threads (affects wall time only)");
}

void add_threshold_flags(CLI::App* cmd, histocr::RunConfig& config) {
    cmd->add_option("--short-max", config.thresholds.short_max,
                    "Max reference scalars for a Short line (default 15)");
    cmd->add_option("--medium-max", config.thresholds.medium_max,
                    "Max reference scalars for a Medium line (default 34)");
}

int run_normalize(const std::string& in_path, const std::string& out_path) {
    std::istream* in = &std::cin;
    std::ifstream in_file;
    if (!in_path.empty()) {
        in_file.open(in_path, std::ios::binary);
        if (!in_file) throw histocr::IoError("cannot open input: " + in_path);
        in = &in_file;
    }
    std::ostream* out = &std::cout;
    std::ofstream out_file;
    if (!out_path.empty()) {
        out_file.open(out_path, std::ios::binary | std::ios::trunc);
        if (!out_file) throw histocr::IoError("cannot open output: " + out_path);
        out = &out_file;
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(*in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        try {
            *out << histocr::to_utf8(histocr::normalize_utf8(line)) << "\n";
        } catch (const histocr::Utf8Error& e) {
            throw ValidationFailure("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    out->flush();
    if (!*out) throw histocr::IoError("write failure");
    return kExitOk;
}

int run_lexicon_build(const std::vector<std::string>& corpus_paths, std::uint64_t min_freq,
                      const std::string& out_path) {
    histocr::CorpusReader reader(corpus_paths);
    histocr::LexiconMetadata meta;
    meta.sources = corpus_paths;
    meta.built_at = utc_timestamp();
    const histocr::Lexicon lex = histocr::build_lexicon(reader.as_supplier(), min_freq, meta);
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw histocr::IoError("cannot open output: " + out_path);
    histocr::save_lexicon(lex, out);
    std::cerr << "lexicon: " << lex.size() << " entries -> " << out_path << "\n";
    return kExitOk;
}

void print_estimate_row(const std::string& subset, const std::string& model, const char* metric,
                        const std::optional<histocr::MetricEstimate>& est, std::size_t lines) {
    std::printf("  %-16s %-12s %-4s %6zu lines  ", subset.c_str(), model.c_str(), metric, lines);
    if (est)
        std::printf("%8.4f%% ± %.4f  [%.4f%%, %.4f%%]\n", est->point * 100.0, est->half_width() * 100.0,
                    est->ci_low * 100.0, est->ci_high * 100.0);
    else
        std::printf("undefined (empty denominator)\n");
}

int run_evaluate(histocr::RunConfig config) {
    check_formats(config);
    const histocr::Manifest manifest = read_manifest_checked(config);
    if (manifest.records.empty()) throw ValidationFailure("manifest contains no records");
    check_requested_models(manifest, config.models);
    histocr::EvaluationReport report = histocr::evaluate_metrics(manifest.records, config);
    for (const auto& d : manifest.skipped)
        report.diagnostics.skipped_records.push_back(d);
    const auto files = histocr::write_evaluation(report, config.out_dir, config.formats);
    for (const auto& f : files) std::cerr << "wrote " << f << "\n";

    std::printf("%zu lines, %zu model(s); level %.2f, %llu resamples, seed %llu\n", report.line_count,
                report.models.size(), config.bootstrap.level,
                static_cast<unsigned long long>(config.bootstrap.resamples),
                static_cast<unsigned long long>(config.bootstrap.seed));
    for (const auto& [model, subsets] : report.models) {
        for (const auto& [subset, sm] : subsets) {
            print_estimate_row(subset, model, "CER", sm.cer, sm.lines);
            print_estimate_row(subset, model, "WER", sm.wer, sm.lines);
        }
    }
    return kExitOk;
}

int run_analyze(histocr::RunConfig config) {
    check_formats(config);
    if (config.historical_lexicon.empty())
        throw ValidationFailure(
            "analyze requires a historical lexicon; build one with `histocr lexicon build "
            "--corpus <files...> --out <lexicon>` and pass it via --lexicon");
    const histocr::Lexicon historical = load_lexicon_file(config.historical_lexicon);
    std::optional<histocr::Lexicon> modern;
    if (!config.modern_lexicon.empty()) modern = load_lexicon_file(config.modern_lexicon);
    const histocr::ConfusionTable table = load_table_or_default(config.confusion_table);

    const histocr::Manifest manifest = read_manifest_checked(config);
    if (manifest.records.empty()) throw ValidationFailure("manifest contains no records");
    check_requested_models(manifest, config.models);
    histocr::AnalysisReport report =
        histocr::build_report(manifest.records, table, historical, modern ? &*modern : nullptr, config);
    for (const auto& d : manifest.skipped)
        report.diagnostics.skipped_records.push_back(d);
    const auto files = histocr::write_report(report, config.out_dir, config.formats);
    for (const auto& f : files) std::cerr << "wrote " << f << "\n";

    for (const auto& m : report.models) {
        const auto& all = m.metrics.at("all");
        print_estimate_row("all", m.model, "CER", all.cer, all.lines);
        print_estimate_row("all", m.model, "WER", all.wer, all.lines);
        std::printf("  %-16s %-12s word errors %llu real / %llu non (pure %llu/%llu), boundaries %llu "
                    "(split %llu, merge %llu), glyph confusions %llu, normalization %llu graphemic / %llu "
                    "lexical%s\n",
                    "", m.model.c_str(), static_cast<unsigned long long>(m.word_tally.real_word),
                    static_cast<unsigned long long>(m.word_tally.non_word),
                    static_cast<unsigned long long>(m.word_tally.real_word_pure),
                    static_cast<unsigned long long>(m.word_tally.non_word_pure),
                    static_cast<unsigned long long>(m.boundary.total()),
                    static_cast<unsigned long long>(m.boundary.splits()),
                    static_cast<unsigned long long>(m.boundary.merges()),
                    static_cast<unsigned long long>(m.glyph_confusions),
                    static_cast<unsigned long long>(m.normalization.graphemic),
                    static_cast<unsigned long long>(m.normalization.lexical),
                    m.normalization.lexical_detection_enabled ? "" : " (lexical detection disabled)");
        if (m.spans)
            std::printf("  %-16s %-12s spans: mean %.2f, max %zu, %.2f per errored line (%zu errored)\n", "",
                        m.model.c_str(), m.spans->mean_span_length, m.spans->max_span_length,
                        m.spans->spans_per_errored_line, m.spans->errored_lines);
    }
    return kExitOk;
}

int run_compare(histocr::RunConfig config, const std::vector<std::string>& models) {
    const histocr::Manifest manifest = read_manifest_checked(config);
    if (manifest.records.empty()) throw ValidationFailure("manifest contains no records");
    config.models = models;
    histocr::ComparisonReport report;
    try {
        report = histocr::compare_models(manifest.records, models[0], models[1], config);
    } catch (const std::invalid_argument& e) {
        throw ValidationFailure(e.what());
    }
    const auto files = histocr::write_comparison(report, config.out_dir);
    for (const auto& f : files) std::cerr << "wrote " << f << "\n";
    std::cout << "delta CER (" << models[0] << " - " << models[1] << "): " << report.delta_cer.point << " ["
              << report.delta_cer.ci_low << ", " << report.delta_cer.ci_high << "]\n";
    std::cout << "delta WER (" << models[0] << " - " << models[1] << "): " << report.delta_wer.point << " ["
              << report.delta_wer.ci_low << ", " << report.delta_wer.ci_high << "]\n";
    return kExitOk;
}

int run_synth_demo(const std::string& out_dir, std::uint64_t seed, std::size_t lines) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const histocr::DemoCorpus demo = histocr::make_demo_corpus(seed, lines);
    const auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream out(fs::path(out_dir) / name, std::ios::binary | std::ios::trunc);
        if (!out) throw histocr::IoError("cannot write " + name + " in " + out_dir);
        out << body;
        std::cerr << "wrote " << (fs::path(out_dir) / name).string() << "\n";
    };
    write("manifest.jsonl", histocr::to_manifest_jsonl(demo.records));
    std::string hist_corpus, modern_corpus;
    for (const auto& l : demo.historical_corpus) hist_corpus += l + "\n";
    for (const auto& l : demo.modern_corpus) modern_corpus += l + "\n";
    write("historical_corpus.txt", hist_corpus);
    write("modern_corpus.txt", modern_corpus);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Line-level OCR evaluation for historical print"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI-style key=value file");
    app.set_version_flag("--version", std::string("histocr ") + histocr::kVersion);

    histocr::RunConfig config;
    std::vector<std::string> modalities_buf;

    // normalize
    std::string norm_in, norm_out;
    CLI::App* normalize = app.add_subcommand("normalize", "Normalize UTF-8 text line by line");
    normalize->add_option("--in", norm_in, "Input file (default stdin)");
    normalize->add_option("--out", norm_out, "Output file (default stdout)");

    // lexicon build
    CLI::App* lexicon = app.add_subcommand("lexicon", "Lexicon utilities");
    lexicon->require_subcommand(1);
    CLI::App* lexicon_build = lexicon->add_subcommand("build", "Build an attestation lexicon");
    std::vector<std::string> corpus_paths;
    std::uint64_t min_freq = 1;
    std::string lexicon_out;
    lexicon_build->add_option("--corpus", corpus_paths, "Corpus text files (one line per transcription line)")
        ->required()
        ->expected(-1);
    lexicon_build->add_option("--min-freq", min_freq, "Minimum token frequency (default 1)");
    lexicon_build->add_option("--out", lexicon_out, "Output lexicon file")->required();

    // evaluate
    CLI::App* evaluate = app.add_subcommand("evaluate", "Length-weighted CER/WER with bootstrap CIs");
    evaluate->add_option("--manifest", config.manifest, "JSON-lines manifest")->required();
    evaluate->add_option("--models", config.models, "Restrict to these model ids");
    evaluate->add_option("--out-dir", config.out_dir, "Output directory (default .)");
    evaluate->add_option("--formats", config.formats, "Output formats: json csv");
    add_manifest_flags(evaluate, config, modalities_buf);
    add_bootstrap_flags(evaluate, config);
    add_threshold_flags(evaluate, config);

    // analyze
    CLI::App* analyze = app.add_subcommand("analyze", "Full error-structure analysis report");
    analyze->add_option("--manifest", config.manifest, "JSON-lines manifest")->required();
    analyze->add_option("--lexicon", config.historical_lexicon, "Historical attestation lexicon");
    analyze->add_option("--modern-lexicon", config.modern_lexicon,
                        "Modern attestation lexicon (enables lexical-normalization detection)");
    analyze->add_option("--confusions", config.confusion_table,
                        "Confusion table TSV (default: built-in long-s/ligature table)");
    analyze->add_option("--models", config.models, "Restrict to these model ids");
    analyze->add_option("--top-k", config.top_k, "Confusion ranking size (default 25)");
    analyze->add_option("--bins", config.positional_bins, "Positional profile bins (default 10)");
    analyze->add_option("--histogram-cap", config.histogram_cap,
                        "Edit-distance histogram cap bucket (default 10)");
    analyze->add_option("--out-dir", config.out_dir, "Output directory (default .)");
    analyze->add_option("--formats", config.formats, "Output formats: json csv");
    add_manifest_flags(analyze, config, modalities_buf);
    add_bootstrap_flags(analyze, config);
    add_threshold_flags(analyze, config);

    // compare
    CLI::App* compare = app.add_subcommand("compare", "Paired bootstrap delta between two models");
    std::vector<std::string> compare_models_arg;
    compare->add_option("--manifest", config.manifest, "JSON-lines manifest")->required();
    compare->add_option("--models", compare_models_arg, "Exactly two model ids")->required()->expected(2);
    compare->add_option("--out-dir", config.out_dir, "Output directory (default .)");
    add_manifest_flags(compare, config, modalities_buf);
    add_bootstrap_flags(compare, config);
    add_threshold_flags(compare, config);

    // synth-demo
    CLI::App* synth = app.add_subcommand("synth-demo", "Regenerate the bundled synthetic demo corpus");
    std::string synth_out = "data/demo";
    std::uint64_t synth_seed = 1766;
    std::size_t synth_lines = 120;
    synth->add_option("--out-dir", synth_out, "Output directory (default data/demo)");
    synth->add_option("--seed", synth_seed, "Generator seed (default 1766)");
    synth->add_option("--lines", synth_lines, "Number of reference lines (default 120)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }
    if (!modalities_buf.empty())
        config.modalities = std::set<std::string>(modalities_buf.begin(), modalities_buf.end());

    try {
        if (normalize->parsed()) return run_normalize(norm_in, norm_out);
        if (lexicon_build->parsed()) return run_lexicon_build(corpus_paths, min_freq, lexicon_out);
        if (evaluate->parsed()) return run_evaluate(config);
        if (analyze->parsed()) return run_analyze(config);
        if (compare->parsed()) return run_compare(config, compare_models_arg);
        if (synth->parsed()) return run_synth_demo(synth_out, synth_seed, synth_lines);
    } catch (const ValidationFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const histocr::ManifestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const histocr::LexiconError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const histocr::ConfusionTableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const histocr::UndefinedMetricError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const histocr::Utf8Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const histocr::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
