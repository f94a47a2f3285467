#pragma once

#include <cstddef>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "histocr/textnorm.hpp"

namespace histocr {

class ManifestError : public std::runtime_error {
public:
    ManifestError(std::size_t line_no, const std::string& what)
        : std::runtime_error("manifest line " + std::to_string(line_no) + ": " + what), line_no_(line_no) {}
    std::size_t line_no() const { return line_no_; }

private:
    std::size_t line_no_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One evaluation unit: a reference line and the per-model hypotheses for it.
// Normalization is applied exactly once, here, at ingest.
struct LineRecord {
    std::string id;
    NormalizedText reference;
    std::map<std::string, NormalizedText> hypotheses; // model id -> normalized hypothesis
    std::optional<std::string> modality;
    std::optional<std::string> source;
};

struct ManifestDiagnostic {
    std::size_t line_no;
    std::string message;
};

struct ManifestOptions {
    bool skip_bad_records = false;
    // Accepted modality values; empty set disables validation.
    std::set<std::string> modalities = {"color", "bw"};
};

struct Manifest {
    std::vector<LineRecord> records;
    std::vector<ManifestDiagnostic> skipped; // populated only with skip_bad_records
};

// Reads a JSON-lines manifest: one object per line with keys
//   id (string), ref (string), hyp (object model->string),
//   modality? (string), source? (string).
// Validation failures throw ManifestError with the line number, or are
// collected when options.skip_bad_records is set.
inline Manifest read_manifest(std::istream& in, const ManifestOptions& options = {}) {
    Manifest manifest;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            nlohmann::json j = nlohmann::json::parse(line);
            if (!j.is_object()) throw ManifestError(line_no, "record is not a JSON object");
            const auto require_string = [&](const char* key) -> std::string {
                if (!j.contains(key)) throw ManifestError(line_no, std::string("missing key '") + key + "'");
                if (!j[key].is_string())
                    throw ManifestError(line_no, std::string("key '") + key + "' must be a string");
                return j[key].get<std::string>();
            };
            LineRecord record;
            record.id = require_string("id");
            if (record.id.empty()) throw ManifestError(line_no, "key 'id' must be non-empty");
            if (!seen_ids.insert(record.id).second)
                throw ManifestError(line_no, "duplicate id '" + record.id + "'");
            record.reference = normalize_utf8(require_string("ref"));
            if (!j.contains("hyp") || !j["hyp"].is_object())
                throw ManifestError(line_no, "key 'hyp' must be an object of model -> text");
            for (const auto& [model, value] : j["hyp"].items()) {
                if (!value.is_string())
                    throw ManifestError(line_no, "hypothesis for model '" + model + "' must be a string");
                record.hypotheses[model] = normalize_utf8(value.get<std::string>());
            }
            if (record.hypotheses.empty())
                throw ManifestError(line_no, "key 'hyp' must contain at least one model");
            if (j.contains("modality")) {
                if (!j["modality"].is_string())
                    throw ManifestError(line_no, "key 'modality' must be a string");
                record.modality = j["modality"].get<std::string>();
                if (!options.modalities.empty() && !options.modalities.count(*record.modality))
                    throw ManifestError(line_no, "unknown modality '" + *record.modality + "'");
            }
            if (j.contains("source")) {
                if (!j["source"].is_string()) throw ManifestError(line_no, "key 'source' must be a string");
                record.source = j["source"].get<std::string>();
            }
            manifest.records.push_back(std::move(record));
        } catch (const ManifestError& e) {
            if (!options.skip_bad_records) throw;
            manifest.skipped.push_back(ManifestDiagnostic{line_no, e.what()});
        } catch (const nlohmann::json::exception& e) {
            if (!options.skip_bad_records) throw ManifestError(line_no, e.what());
            manifest.skipped.push_back(ManifestDiagnostic{line_no, e.what()});
        } catch (const Utf8Error& e) {
            if (!options.skip_bad_records) throw ManifestError(line_no, e.what());
            manifest.skipped.push_back(ManifestDiagnostic{line_no, e.what()});
        }
    }
    return manifest;
}

inline Manifest read_manifest_file(const std::string& path, const ManifestOptions& options = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest: " + path);
    return read_manifest(in, options);
}

// Streams corpus lines from a list of UTF-8 text files without loading them
// whole. Decode errors carry the path and line number.
class CorpusReader {
public:
    explicit CorpusReader(std::vector<std::string> paths) : paths_(std::move(paths)) {}

    // Returns the next line, or std::nullopt at end of the last file.
    std::optional<std::string> next_line() {
        while (true) {
            if (!stream_.is_open()) {
                if (path_index_ >= paths_.size()) return std::nullopt;
                stream_.open(paths_[path_index_], std::ios::binary);
                if (!stream_) throw IoError("cannot open corpus file: " + paths_[path_index_]);
                line_no_ = 0;
            }
            std::string line;
            if (std::getline(stream_, line)) {
                ++line_no_;
                if (!line.empty() && line.back() == '\r') line.pop_back();
                try {
                    uni::decode_utf8(line); // validate early, with context
                } catch (const Utf8Error& e) {
                    throw IoError(paths_[path_index_] + " line " + std::to_string(line_no_) + ": " + e.what());
                }
                return line;
            }
            stream_.close();
            ++path_index_;
        }
    }

    // Adapter for build_lexicon.
    std::function<std::optional<std::string>()> as_supplier() {
        return [this] { return next_line(); };
    }

    const std::vector<std::string>& paths() const { return paths_; }

private:
    std::vector<std::string> paths_;
    std::size_t path_index_ = 0;
    std::ifstream stream_;
    std::size_t line_no_ = 0;
};

} // namespace histocr
