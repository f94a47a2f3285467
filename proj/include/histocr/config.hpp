#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "histocr/metrics.hpp"

namespace histocr {

// Effective run configuration. Everything that influences output bytes lives
// here and is echoed into every JSON the tools write.
struct RunConfig {
    std::string manifest;
    std::string historical_lexicon;
    std::string modern_lexicon;  // optional; empty = lexical normalization disabled
    std::string confusion_table; // optional; empty = built-in default table
    std::vector<std::string> models; // empty = all models present in the manifest
    std::set<std::string> modalities = {"color", "bw"}; // accepted values; empty disables validation
    LengthThresholds thresholds;
    BootstrapParams bootstrap; // seed defaults to 1766, documented in the README
    std::size_t positional_bins = 10;
    std::size_t histogram_cap = 10;
    std::size_t top_k = 25;
    std::string out_dir = ".";
    std::vector<std::string> formats = {"json", "csv"};
    bool skip_bad_records = false;
};

} // namespace histocr
