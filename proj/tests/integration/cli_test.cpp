#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks of the installed CLI binary (path injected by CMake).

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("histocr-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static inline int counter = 0;
};

std::string cli() { return HISTOCR_CLI_PATH; }

int run(const std::string& args, const fs::path& log) {
    const std::string cmd = cli() + " " + args + " >" + log.string() + ".out 2>" + log.string() + ".err";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << body;
}

} // namespace

TEST_CASE("normalize subcommand maps files line by line") {
    TempDir dir;
    write(dir.path / "in.txt", "pre\xe2\x80\x8b\xc5\xbf"
                               "ent  conduct \ncovenant\xe2\x80\x94\xe2\x80\x94\n");
    const int rc = run("normalize --in " + (dir.path / "in.txt").string() + " --out " +
                           (dir.path / "out.txt").string(),
                       dir.path / "log");
    REQUIRE(rc == 0);
    CHECK(slurp(dir.path / "out.txt") == "pre\xc5\xbf"
                                         "ent conduct\ncovenant-\n");
}

TEST_CASE("full pipeline: synth-demo, lexicon build, evaluate, analyze, compare") {
    TempDir dir;
    const auto demo = (dir.path / "demo").string();
    REQUIRE(run("synth-demo --out-dir " + demo + " --lines 60", dir.path / "synth") == 0);

    REQUIRE(run("lexicon build --corpus " + demo + "/historical_corpus.txt --out " + demo + "/hist.lex",
                dir.path / "lexb") == 0);
    REQUIRE(run("lexicon build --corpus " + demo + "/modern_corpus.txt --out " + demo + "/modern.lex",
                dir.path / "lexm") == 0);

    // The identical evaluate invocation run twice is byte-identical.
    const std::string eval_args = "evaluate --manifest " + demo + "/manifest.jsonl --seed 7 --resamples 500" +
                                  " --out-dir " + demo + "/eval";
    REQUIRE(run(eval_args, dir.path / "e1") == 0);
    const std::string first_json = slurp(demo + "/eval/metrics.json");
    const std::string first_csv = slurp(demo + "/eval/metrics.csv");
    REQUIRE(run(eval_args, dir.path / "e2") == 0);
    CHECK(slurp(demo + "/eval/metrics.json") == first_json);
    CHECK(slurp(demo + "/eval/metrics.csv") == first_csv);
    CHECK(!first_json.empty());

    // analyze with both lexica; repeated run is byte-identical too.
    const std::string analyze_args = "analyze --manifest " + demo + "/manifest.jsonl --lexicon " + demo +
                                     "/hist.lex --modern-lexicon " + demo +
                                     "/modern.lex --resamples 300 --seed 3";
    REQUIRE(run(analyze_args + " --out-dir " + demo + "/an1", dir.path / "a1") == 0);
    REQUIRE(run(analyze_args + " --out-dir " + demo + "/an2 --workers 8", dir.path / "a2") == 0);
    const std::string r1 = slurp(demo + "/an1/report.json");
    REQUIRE(!r1.empty());
    CHECK(r1.find("\"cascade\"") != std::string::npos);
    CHECK(slurp(demo + "/an1/events_cascade.jsonl") == slurp(demo + "/an2/events_cascade.jsonl"));
    CHECK(slurp(demo + "/an1/confusions_bounded.csv") == slurp(demo + "/an2/confusions_bounded.csv"));

    // compare a model with itself: exactly zero delta.
    REQUIRE(run("compare --manifest " + demo + "/manifest.jsonl --models cascade cascade --out-dir " + demo +
                    "/cmp --resamples 200",
                dir.path / "c1") == 0);
    const std::string cmp = slurp(demo + "/cmp/compare_cascade_vs_cascade.json");
    CHECK(cmp.find("\"point\": 0.0") != std::string::npos);
}

TEST_CASE("analyze without a historical lexicon points at lexicon build") {
    TempDir dir;
    write(dir.path / "m.jsonl", R"({"id":"L1","ref":"a","hyp":{"m":"a"}})"
                                "\n");
    const int rc = run("analyze --manifest " + (dir.path / "m.jsonl").string(), dir.path / "log");
    CHECK(rc == 1);
    CHECK(slurp(dir.path / "log.err").find("lexicon build") != std::string::npos);
}

TEST_CASE("compare names the line missing a hypothesis") {
    TempDir dir;
    write(dir.path / "m.jsonl",
          R"({"id":"L1","ref":"a b","hyp":{"qwen":"a b","trocr":"a b"}})"
          "\n"
          R"({"id":"L2","ref":"c d","hyp":{"qwen":"c d"}})"
          "\n");
    const int rc = run("compare --manifest " + (dir.path / "m.jsonl").string() +
                           " --models qwen trocr --out-dir " + (dir.path / "out").string(),
                       dir.path / "log");
    CHECK(rc == 1);
    const std::string err = slurp(dir.path / "log.err");
    CHECK(err.find("L2") != std::string::npos);
}

TEST_CASE("unknown model ids and formats are validation failures") {
    TempDir dir;
    write(dir.path / "m.jsonl", R"({"id":"L1","ref":"a b","hyp":{"m1":"a b"}})"
                                "\n");
    CHECK(run("evaluate --manifest " + (dir.path / "m.jsonl").string() + " --models nope", dir.path / "l1") ==
          1);
    CHECK(slurp(dir.path / "l1.err").find("nope") != std::string::npos);
    CHECK(run("evaluate --manifest " + (dir.path / "m.jsonl").string() + " --formats xml", dir.path / "l2") ==
          1);
}

TEST_CASE("invalid manifests exit with code 1, missing files with 2") {
    TempDir dir;
    write(dir.path / "bad.jsonl", "{broken\n");
    CHECK(run("evaluate --manifest " + (dir.path / "bad.jsonl").string(), dir.path / "log1") == 1);

    write(dir.path / "dup.jsonl", R"({"id":"L1","ref":"a","hyp":{"m":"a"}})"
                                  "\n"
                                  R"({"id":"L1","ref":"b","hyp":{"m":"b"}})"
                                  "\n");
    CHECK(run("evaluate --manifest " + (dir.path / "dup.jsonl").string(), dir.path / "log2") == 1);
    CHECK(slurp(dir.path / "log2.err").find("line 2") != std::string::npos);

    CHECK(run("evaluate --manifest " + (dir.path / "nope.jsonl").string(), dir.path / "log3") == 2);
    CHECK(run("lexicon build --corpus " + (dir.path / "nope.txt").string() + " --out " +
                  (dir.path / "x.lex").string(),
              dir.path / "log4") == 2);
}

TEST_CASE("config file supplies defaults that flags override") {
    TempDir dir;
    const auto demo = (dir.path / "demo").string();
    REQUIRE(run("synth-demo --out-dir " + demo + " --lines 20", dir.path / "synth") == 0);
    write(dir.path / "run.ini", "[evaluate]\nmanifest=" + demo + "/manifest.jsonl\nresamples=200\nseed=5\n");

    REQUIRE(run("--config " + (dir.path / "run.ini").string() + " evaluate --out-dir " + demo + "/cfg",
                dir.path / "cfg1") == 0);
    const std::string report = slurp(demo + "/cfg/metrics.json");
    CHECK(report.find("\"seed\": 5") != std::string::npos);
    CHECK(report.find("\"resamples\": 200") != std::string::npos);

    REQUIRE(run("--config " + (dir.path / "run.ini").string() + " evaluate --seed 9 --out-dir " + demo +
                    "/cfg2",
                dir.path / "cfg2") == 0);
    CHECK(slurp(demo + "/cfg2/metrics.json").find("\"seed\": 9") != std::string::npos);
}

TEST_CASE("synth-demo regeneration is deterministic") {
    TempDir dir;
    REQUIRE(run("synth-demo --out-dir " + (dir.path / "a").string(), dir.path / "s1") == 0);
    REQUIRE(run("synth-demo --out-dir " + (dir.path / "b").string(), dir.path / "s2") == 0);
    CHECK(slurp(dir.path / "a/manifest.jsonl") == slurp(dir.path / "b/manifest.jsonl"));
    CHECK(!slurp(dir.path / "a/manifest.jsonl").empty());
}
