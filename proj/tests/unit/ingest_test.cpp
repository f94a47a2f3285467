#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "histocr/ingest.hpp"
#include "histocr/report_io.hpp"
#include "histocr/synthetic.hpp"

using histocr::CorpusReader;
using histocr::Manifest;
using histocr::ManifestError;
using histocr::ManifestOptions;
using histocr::read_manifest;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("histocr-test-" + std::to_string(::getpid()) + "-" +
                                            std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static inline int counter = 0;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("manifest records parse and normalize") {
    std::stringstream in(R"({"id":"L1","ref":"the  cat","hyp":{"m1":"thecat"},"modality":"color"})"
                         "\n");
    const Manifest m = read_manifest(in);
    REQUIRE(m.records.size() == 1);
    CHECK(m.records[0].id == "L1");
    CHECK(m.records[0].reference.content == U"the cat"); // double space collapsed at ingest
    CHECK(m.records[0].hypotheses.at("m1").content == U"thecat");
    CHECK(m.records[0].modality == "color");
}

TEST_CASE("duplicate ids are rejected with the line number") {
    std::stringstream in(R"({"id":"L1","ref":"a","hyp":{"m":"a"}})"
                         "\n"
                         R"({"id":"L1","ref":"b","hyp":{"m":"b"}})"
                         "\n");
    try {
        read_manifest(in);
        FAIL("expected ManifestError");
    } catch (const ManifestError& e) {
        CHECK(e.line_no() == 2);
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }
}

TEST_CASE("missing keys are schema errors naming the key") {
    std::stringstream in(R"({"id":"L1","hyp":{"m":"a"}})"
                         "\n");
    try {
        read_manifest(in);
        FAIL("expected ManifestError");
    } catch (const ManifestError& e) {
        CHECK(std::string(e.what()).find("'ref'") != std::string::npos);
        CHECK(e.line_no() == 1);
    }
}

TEST_CASE("schema violations cover hyp and modality") {
    std::stringstream no_hyp(R"({"id":"L1","ref":"a"})"
                             "\n");
    CHECK_THROWS_AS(read_manifest(no_hyp), ManifestError);
    std::stringstream empty_hyp(R"({"id":"L1","ref":"a","hyp":{}})"
                                "\n");
    CHECK_THROWS_AS(read_manifest(empty_hyp), ManifestError);
    std::stringstream bad_modality(R"({"id":"L1","ref":"a","hyp":{"m":"a"},"modality":"sepia"})"
                                   "\n");
    CHECK_THROWS_AS(read_manifest(bad_modality), ManifestError);
    std::stringstream bad_json("{not json}\n");
    CHECK_THROWS_AS(read_manifest(bad_json), ManifestError);
}

TEST_CASE("skip-bad-records collects diagnostics and keeps order") {
    std::stringstream in(R"({"id":"L1","ref":"a","hyp":{"m":"a"}})"
                         "\n"
                         "{broken\n"
                         R"({"id":"L3","ref":"c","hyp":{"m":"c"}})"
                         "\n");
    ManifestOptions options;
    options.skip_bad_records = true;
    const Manifest m = read_manifest(in, options);
    REQUIRE(m.records.size() == 2);
    CHECK(m.records[0].id == "L1");
    CHECK(m.records[1].id == "L3");
    REQUIRE(m.skipped.size() == 1);
    CHECK(m.skipped[0].line_no == 2);
}

TEST_CASE("manifest round trip through the generated JSONL") {
    const histocr::DemoCorpus demo = histocr::make_demo_corpus(3, 12);
    std::stringstream buffer(histocr::to_manifest_jsonl(demo.records));
    const Manifest parsed = read_manifest(buffer);
    REQUIRE(parsed.records.size() == demo.records.size());
    for (std::size_t i = 0; i < parsed.records.size(); ++i) {
        CHECK(parsed.records[i].id == demo.records[i].id);
        CHECK(parsed.records[i].reference.content == demo.records[i].reference.content);
        CHECK(parsed.records[i].modality == demo.records[i].modality);
        for (const auto& [model, hyp] : demo.records[i].hypotheses)
            CHECK(parsed.records[i].hypotheses.at(model).content == hyp.content);
    }
}

TEST_CASE("corpus reader streams files with error context") {
    TempDir dir;
    {
        std::ofstream a(dir.path / "a.txt", std::ios::binary);
        a << "alpha beta\ngamma\n";
        std::ofstream b(dir.path / "b.txt", std::ios::binary);
        b << "delta\n";
    }
    CorpusReader reader({(dir.path / "a.txt").string(), (dir.path / "b.txt").string()});
    std::vector<std::string> lines;
    while (auto line = reader.next_line()) lines.push_back(*line);
    REQUIRE(lines == std::vector<std::string>{"alpha beta", "gamma", "delta"});

    {
        std::ofstream bad(dir.path / "bad.txt", std::ios::binary);
        bad << "fine\n\xff\xfe broken\n";
    }
    CorpusReader bad_reader({(dir.path / "bad.txt").string()});
    CHECK(bad_reader.next_line().has_value());
    try {
        bad_reader.next_line();
        FAIL("expected IoError");
    } catch (const histocr::IoError& e) {
        const std::string what = e.what();
        CHECK(what.find("bad.txt") != std::string::npos);
        CHECK(what.find("line 2") != std::string::npos);
    }

    CorpusReader missing({(dir.path / "nope.txt").string()});
    CHECK_THROWS_AS(missing.next_line(), histocr::IoError);
}

TEST_CASE("report writing is byte-deterministic") {
    const histocr::DemoCorpus demo = histocr::make_demo_corpus(21, 16);
    auto supplier = [lines = demo.historical_corpus, i = std::size_t(0)]() mutable -> std::optional<std::string> {
        if (i >= lines.size()) return std::nullopt;
        return lines[i++];
    };
    const histocr::Lexicon lex = histocr::build_lexicon(supplier, 1);
    histocr::RunConfig config;
    config.bootstrap.resamples = 100;
    const auto report = histocr::build_report(demo.records, histocr::default_confusion_table(), lex,
                                              nullptr, config);

    TempDir d1, d2;
    const auto files1 = histocr::write_report(report, d1.path.string());
    const auto files2 = histocr::write_report(report, d2.path.string());
    REQUIRE(files1.size() == files2.size());
    for (std::size_t i = 0; i < files1.size(); ++i) {
        const std::string a = slurp(files1[i]);
        const std::string b = slurp(files2[i]);
        CHECK(a == b);
        CHECK(!a.empty());
    }
    // The full CSV panel set exists for both models.
    for (const char* model : {"cascade", "bounded"}) {
        for (const char* prefix : {"confusions_", "edit_hist_", "shares_", "boundary_", "spans_"}) {
            CHECK(fs::exists(d1.path / (std::string(prefix) + model + ".csv")));
        }
        CHECK(fs::exists(d1.path / (std::string("events_") + model + ".jsonl")));
    }
    CHECK(fs::exists(d1.path / "report.json"));
}
