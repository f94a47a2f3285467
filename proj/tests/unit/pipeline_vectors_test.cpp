#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <string>
#include <vector>

#include "histocr/alignment.hpp"
#include "histocr/textnorm.hpp"

// Frozen cross-implementation vectors: tests/data/pipeline_vectors.tsv holds
// normalized forms and char/word distances computed by an independent
// implementation of the documented behavior.

namespace {

std::u32string unescape(const std::string& s) {
    std::u32string out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '\\' && i + 1 < s.size() && (s[i + 1] == 'u' || s[i + 1] == 'U')) {
            const std::size_t digits = s[i + 1] == 'u' ? 4 : 8;
            out.push_back(static_cast<char32_t>(std::stoul(s.substr(i + 2, digits), nullptr, 16)));
            i += 2 + digits;
        } else {
            out.push_back(static_cast<unsigned char>(s[i]));
            ++i;
        }
    }
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return fields;
}

} // namespace

TEST_CASE("full pipeline matches the frozen cross-implementation vectors") {
    std::ifstream in(std::string(HISTOCR_TEST_DATA_DIR) + "/pipeline_vectors.tsv");
    REQUIRE(in.is_open());
    std::string line;
    std::size_t cases = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_tabs(line);
        REQUIRE(fields.size() == 6);
        const std::u32string raw_ref = unescape(fields[0]);
        const std::u32string raw_hyp = unescape(fields[1]);
        const std::u32string want_ref = unescape(fields[2]);
        const std::u32string want_hyp = unescape(fields[3]);
        const std::size_t want_cd = std::stoul(fields[4]);
        const std::size_t want_wd = std::stoul(fields[5]);

        INFO("case " << cases << ": " << line);
        const histocr::NormalizedText ref = histocr::normalize(raw_ref);
        const histocr::NormalizedText hyp = histocr::normalize(raw_hyp);
        REQUIRE(ref.content == want_ref);
        REQUIRE(hyp.content == want_hyp);
        REQUIRE(histocr::char_align(ref, hyp).distance == want_cd);
        REQUIRE(histocr::token_align(histocr::tokenize(ref), histocr::tokenize(hyp)).word_distance == want_wd);
        ++cases;
    }
    REQUIRE(cases == 400);
}
