#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "histocr/ingest.hpp"
#include "histocr/rng.hpp"
#include "histocr/textnorm.hpp"
#include "histocr/unicode.hpp"

namespace histocr {

// Seeded synthetic corpora with labelled, planted error patterns. These back
// the bundled demo pipeline and give downstream users a way to validate a
// configuration (lexicon + confusion table) against known ground truth.

namespace synth {

// Vocabulary kept deliberately small and fixed so generated corpora and the
// lexica built from them are stable across releases.
inline const std::vector<std::u32string>& plain_vocabulary() {
    static const std::vector<std::u32string> words = {
        U"the",       U"and",       U"of",         U"to",         U"in",        U"by",
        U"with",      U"under",     U"upon",       U"for",        U"was",       U"were",
        U"their",     U"this",      U"that",       U"which",      U"had",       U"have",
        U"been",      U"not",       U"but",        U"are",        U"conduct",   U"affairs",
        U"entertained", U"covenant", U"influence",  U"execution",  U"enforced",  U"kingdom",
        U"parliament", U"liberty",  U"government", U"dominion",   U"provinces", U"religion",
        U"thoughts",  U"between",   U"therefore",  U"against",    U"without",   U"within",
        U"during",    U"among",     U"prince",     U"barons",     U"duties",    U"commerce",
        U"nation",    U"people",    U"crown",      U"treaty",     U"army",      U"council",
    };
    return words;
}

inline const std::vector<std::u32string>& historical_vocabulary() {
    static const std::vector<std::u32string> words = {
        U"preſent",        // preſent
        U"apprehenſions",  // apprehenſions
        U"ſummon",         // ſummon
        U"eſtabliſhed",
        U"ſubdued",
        U"rigorouſly",
        U"hiſtory",
        U"ſuch",
        U"Cæſar",     // Cæſar
        U"Celtæ",
        U"Ætius",
        U"phænomena",
        U"Antient",
        U"imploy",
        U"futurity",
        U"ﬁdelity",        // ﬁdelity
        U"aﬀairs",         // aﬀairs
    };
    return words;
}

// Attested substitution pairs (both sides ASCII and both attested); used for
// planting real-word errors that no structural event can explain.
inline const std::vector<std::pair<std::u32string, std::u32string>>& real_word_swap_pairs() {
    static const std::vector<std::pair<std::u32string, std::u32string>> pairs = {
        {U"tarded", U"seemed"}, {U"ward", U"used"},     {U"groans", U"gentleman"},
        {U"artay", U"free"},    {U"manner", U"matter"}, {U"common", U"cannon"},
        {U"reason", U"season"}, {U"power", U"tower"},
    };
    return pairs;
}

inline std::u32string join_tokens(const std::vector<std::u32string>& tokens) {
    std::u32string line;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) line.push_back(U' ');
        line += tokens[i];
    }
    return line;
}

inline std::vector<std::u32string> sample_tokens(SplitMix64& rng, std::size_t count, bool with_historical) {
    std::vector<std::u32string> tokens;
    tokens.reserve(count);
    const auto& plain = plain_vocabulary();
    const auto& hist = historical_vocabulary();
    for (std::size_t i = 0; i < count; ++i) {
        if (with_historical && rng.below(4) == 0)
            tokens.push_back(hist[rng.below(hist.size())]);
        else
            tokens.push_back(plain[rng.below(plain.size())]);
    }
    return tokens;
}

// Every vocabulary word on its own line; feeds build_lexicon.
inline std::vector<std::string> lexicon_corpus_lines() {
    std::vector<std::string> lines;
    for (const auto& w : plain_vocabulary()) lines.push_back(uni::encode_utf8(w));
    for (const auto& w : historical_vocabulary()) lines.push_back(uni::encode_utf8(w));
    for (const auto& [a, b] : real_word_swap_pairs()) {
        lines.push_back(uni::encode_utf8(a));
        lines.push_back(uni::encode_utf8(b));
    }
    return lines;
}

} // namespace synth

// ---------------------------------------------------------------------------
// Planted-proxy corpus: each mutated line carries exactly one labelled
// mutation, so taxonomy tallies over the corpus are known in advance.

struct PlantedSpec {
    std::size_t lines = 200;
    std::size_t boundary_splits = 20;
    std::size_t boundary_merges = 15;
    std::size_t merges_punctuation = 5; // subset of boundary_merges
    std::size_t glyph_confusions = 30;
    std::size_t real_word_swaps = 25;
    std::size_t non_word_mutations = 10;
    std::uint64_t seed = 1766;
};

struct PlantedCorpus {
    std::vector<LineRecord> records;        // single model "planted"
    std::vector<std::string> lexicon_lines; // corpus for the historical lexicon
    PlantedSpec spec;
};

namespace synth_detail {

enum class Mutation { SplitPlain, MergePlain, MergePunct, Glyph, RealWordSwap, NonWord, None };

inline bool has_scalar(const std::u32string& s, char32_t cp) {
    return s.find(cp) != std::u32string::npos;
}

inline bool is_plain_ascii(const std::u32string& t, std::size_t min_len) {
    if (t.size() < min_len) return false;
    for (char32_t cp : t)
        if (!((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z'))) return false;
    return true;
}

inline std::size_t find_plain_token(const std::vector<std::u32string>& tokens, SplitMix64& rng,
                                    std::size_t min_len) {
    const std::size_t start = rng.below(tokens.size());
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        const std::size_t i = (start + k) % tokens.size();
        if (is_plain_ascii(tokens[i], min_len)) return i;
    }
    return tokens.size(); // caller regenerates the line
}

inline char32_t shifted_letter(char32_t cp) {
    if (cp >= U'a' && cp <= U'z') return U'a' + static_cast<char32_t>((cp - U'a' + 1) % 26);
    if (cp >= U'A' && cp <= U'Z') return U'A' + static_cast<char32_t>((cp - U'A' + 1) % 26);
    return cp == U'q' ? U'x' : U'q';
}

} // namespace synth_detail

// Builds the planted corpus. Every mutation lives on its own line and is
// constructed so it triggers exactly one taxonomy tally:
//   - splits/plain merges avoid punctuation within one scalar of the space
//   - punctuation merges plant a comma directly before the removed space
//   - glyph mutations apply one Glyph-category table pair inside a token
//   - real-word swaps replace a whole token with another attested one
//   - non-word mutations rewrite token letters into an unattested form
// ASCII-only mutation targets keep the long-s/ligature table pairs out of
// reach of swaps and non-word rewrites.
inline PlantedCorpus make_planted_corpus(const PlantedSpec& spec = {}) {
    using synth_detail::Mutation;
    PlantedCorpus corpus;
    corpus.spec = spec;
    corpus.lexicon_lines = synth::lexicon_corpus_lines();

    const std::size_t total_mutations = spec.boundary_splits + spec.boundary_merges + spec.glyph_confusions +
                                        spec.real_word_swaps + spec.non_word_mutations;
    if (total_mutations > spec.lines)
        throw std::invalid_argument("planted corpus: more mutations than lines");

    std::vector<Mutation> plan;
    plan.reserve(spec.lines);
    for (std::size_t i = 0; i < spec.boundary_splits; ++i) plan.push_back(Mutation::SplitPlain);
    for (std::size_t i = 0; i < spec.merges_punctuation; ++i) plan.push_back(Mutation::MergePunct);
    for (std::size_t i = 0; i < spec.boundary_merges - spec.merges_punctuation; ++i)
        plan.push_back(Mutation::MergePlain);
    for (std::size_t i = 0; i < spec.glyph_confusions; ++i) plan.push_back(Mutation::Glyph);
    for (std::size_t i = 0; i < spec.real_word_swaps; ++i) plan.push_back(Mutation::RealWordSwap);
    for (std::size_t i = 0; i < spec.non_word_mutations; ++i) plan.push_back(Mutation::NonWord);
    while (plan.size() < spec.lines) plan.push_back(Mutation::None);

    SplitMix64 rng(spec.seed);
    // Deterministic shuffle (Fisher-Yates).
    for (std::size_t i = plan.size(); i > 1; --i) std::swap(plan[i - 1], plan[rng.below(i)]);

    std::size_t swap_index = 0;
    for (std::size_t line_no = 0; line_no < spec.lines; ++line_no) {
        const Mutation mutation = plan[line_no];
        std::vector<std::u32string> ref_tokens;
        std::vector<std::u32string> hyp_tokens;

        for (int attempt = 0;; ++attempt) {
            if (attempt > 200) throw std::logic_error("planted corpus: could not construct line");
            ref_tokens = synth::sample_tokens(rng, 6 + rng.below(5), true);
            hyp_tokens = ref_tokens;

            if (mutation == Mutation::None) break;

            if (mutation == Mutation::SplitPlain) {
                const std::size_t i = synth_detail::find_plain_token(ref_tokens, rng, 4);
                if (i == ref_tokens.size()) continue;
                const std::u32string& t = ref_tokens[i];
                const std::size_t cut = 2 + rng.below(t.size() - 3); // strictly inside
                hyp_tokens[i] = t.substr(0, cut) + U" " + t.substr(cut);
                break;
            }
            if (mutation == Mutation::MergePlain || mutation == Mutation::MergePunct) {
                const std::size_t i = rng.below(ref_tokens.size() - 1);
                if (!synth_detail::is_plain_ascii(ref_tokens[i], 2) ||
                    !synth_detail::is_plain_ascii(ref_tokens[i + 1], 2))
                    continue;
                if (mutation == Mutation::MergePunct) {
                    ref_tokens[i] += U",";
                    hyp_tokens[i] = ref_tokens[i];
                }
                hyp_tokens[i] += hyp_tokens[i + 1];
                hyp_tokens.erase(hyp_tokens.begin() + static_cast<std::ptrdiff_t>(i) + 1);
                break;
            }
            if (mutation == Mutation::Glyph) {
                // Apply one Glyph-category pair: ſ->s, ſ->f, f->ſ or s->ſ.
                const std::uint64_t choice = rng.below(4);
                const char32_t from = (choice <= 1) ? U'ſ' : (choice == 2 ? U'f' : U's');
                const char32_t to = (choice == 0) ? U's' : (choice == 1 ? U'f' : U'ſ');
                std::size_t i = ref_tokens.size();
                for (std::size_t k = 0; k < ref_tokens.size(); ++k) {
                    if (synth_detail::has_scalar(ref_tokens[k], from)) {
                        i = k;
                        break;
                    }
                }
                if (i == ref_tokens.size()) {
                    // Plant a token carrying the needed scalar.
                    const auto& hist = synth::historical_vocabulary();
                    i = rng.below(ref_tokens.size());
                    ref_tokens[i] = (from == U'ſ') ? hist[rng.below(4)]
                                  : (from == U'f')      ? std::u32string(U"affairs")
                                                        : std::u32string(U"provinces");
                    hyp_tokens[i] = ref_tokens[i];
                }
                std::u32string& t = hyp_tokens[i];
                t[t.find(from)] = to;
                break;
            }
            if (mutation == Mutation::RealWordSwap) {
                const auto& pairs = synth::real_word_swap_pairs();
                const auto& pair = pairs[swap_index++ % pairs.size()];
                const std::size_t i = rng.below(ref_tokens.size());
                ref_tokens[i] = pair.first;
                hyp_tokens[i] = pair.second;
                break;
            }
            if (mutation == Mutation::NonWord) {
                const std::size_t i = synth_detail::find_plain_token(ref_tokens, rng, 5);
                if (i == ref_tokens.size()) continue;
                std::u32string& t = hyp_tokens[i];
                char32_t& target = t[t.size() / 2];
                target = (target == U'q') ? U'x' : U'q'; // no lexicon word contains the letter q
                break;
            }
        }

        LineRecord record;
        record.id = "planted-" + std::to_string(line_no + 1);
        record.reference = normalize(synth::join_tokens(ref_tokens));
        record.hypotheses["planted"] = normalize(synth::join_tokens(hyp_tokens));
        record.modality = (line_no % 2 == 0) ? std::optional<std::string>("color")
                                             : std::optional<std::string>("bw");
        corpus.records.push_back(std::move(record));
    }
    return corpus;
}

// ---------------------------------------------------------------------------
// Demo corpus: two synthetic "models" with contrasting error styles.
//   cascade  — long contiguous corruption spans (plus clean lines)
//   bounded  — isolated distance-1 edits plus normalization pairs
// The contrast is strong enough that span statistics and normalization
// composition separate the models by construction.

struct DemoCorpus {
    std::vector<LineRecord> records; // models "cascade" and "bounded"
    std::vector<std::string> historical_corpus;
    std::vector<std::string> modern_corpus;
};

inline DemoCorpus make_demo_corpus(std::uint64_t seed = 1766, std::size_t lines = 120) {
    DemoCorpus demo;
    demo.historical_corpus = synth::lexicon_corpus_lines();
    demo.modern_corpus = {
        "ancient", "employ", "phaenomena", "history", "present", "such", "established",
        "the", "and", "of", "conduct", "affairs", "government", "liberty", "people",
        "modern", "nation", "thoughts", "between", "commerce", "reason", "power",
    };

    // (historical, modern) pairs planted into "bounded" hypotheses.
    const std::vector<std::pair<std::u32string, std::u32string>> lexical_pairs = {
        {U"Antient", U"Ancient"},
        {U"imploy", U"employ"},
        {U"phænomena", U"phaenomena"},
    };
    const std::vector<std::pair<std::u32string, std::u32string>> graphemic_pairs = {
        {U"Cæſar", U"Caeſar"},   // æ -> ae, long-s kept
        {U"Celtæ", U"Celtae"},
        {U"ﬁdelity", U"fidelity"},         // ﬁ -> fi
    };

    SplitMix64 rng(seed);
    for (std::size_t line_no = 0; line_no < lines; ++line_no) {
        // Mostly full-width lines, with the occasional catchword or page
        // number so the Short/Medium length categories are populated too.
        std::vector<std::u32string> ref_tokens;
        if (line_no % 10 == 9) {
            if (rng.below(2) == 0)
                ref_tokens.push_back(uni::decode_utf8(std::to_string(100 + rng.below(300)) + "."));
            else
                ref_tokens = synth::sample_tokens(rng, 1 + rng.below(2), true);
        } else {
            ref_tokens = synth::sample_tokens(rng, 7 + rng.below(4), true);
        }

        // cascade: one long contiguous corruption on ~60% of eligible lines.
        std::vector<std::u32string> cascade = ref_tokens;
        if (rng.below(10) < 6) {
            const std::size_t target = synth_detail::find_plain_token(cascade, rng, 6);
            if (target != cascade.size()) {
                std::u32string& t = cascade[target];
                const std::size_t span_len = std::min<std::size_t>(t.size() - 1, 5 + rng.below(3));
                const std::size_t start = rng.below(t.size() - span_len + 1);
                for (std::size_t k = start; k < start + span_len; ++k)
                    t[k] = synth_detail::shifted_letter(t[k]);
            }
        }

        // bounded: one or two isolated single-scalar edits on most lines, plus
        // a normalization pair on a rotating subset.
        std::vector<std::u32string> bounded = ref_tokens;
        if (line_no % 8 < 3) {
            const auto& pair = (line_no % 8 == 2)
                                   ? graphemic_pairs[(line_no / 8) % graphemic_pairs.size()]
                                   : lexical_pairs[(line_no / 8 + line_no % 8) % lexical_pairs.size()];
            const std::size_t i = rng.below(ref_tokens.size());
            ref_tokens[i] = pair.first;
            cascade[i] = pair.first; // keep models on identical references
            bounded[i] = pair.second;
        } else if (rng.below(10) < 7) {
            const std::size_t i = synth_detail::find_plain_token(bounded, rng, 4);
            if (i != bounded.size()) {
                std::u32string& t = bounded[i];
                const std::size_t k = rng.below(t.size());
                t[k] = synth_detail::shifted_letter(t[k]);
            }
        }

        LineRecord record;
        record.id = "demo-" + std::to_string(line_no + 1);
        record.reference = normalize(synth::join_tokens(ref_tokens));
        record.hypotheses["cascade"] = normalize(synth::join_tokens(cascade));
        record.hypotheses["bounded"] = normalize(synth::join_tokens(bounded));
        record.modality = (line_no % 3 == 0) ? std::optional<std::string>("bw")
                                             : std::optional<std::string>("color");
        demo.records.push_back(std::move(record));
    }
    return demo;
}

// Large uniform corpus for throughput checks: `lines` lines of roughly 60
// scalars with a mixture of mild mutations.
inline std::vector<LineRecord> make_throughput_corpus(std::size_t lines, std::uint64_t seed = 1766) {
    std::vector<LineRecord> records;
    records.reserve(lines);
    SplitMix64 rng(seed);
    for (std::size_t line_no = 0; line_no < lines; ++line_no) {
        std::vector<std::u32string> ref_tokens = synth::sample_tokens(rng, 10, true);
        std::vector<std::u32string> hyp_tokens = ref_tokens;
        const std::uint64_t dice = rng.below(10);
        if (dice < 5) {
            std::u32string& t = hyp_tokens[rng.below(hyp_tokens.size())];
            const std::size_t k = rng.below(t.size());
            t[k] = synth_detail::shifted_letter(t[k]);
        } else if (dice < 7) {
            const std::size_t i = synth_detail::find_plain_token(hyp_tokens, rng, 4);
            if (i != hyp_tokens.size()) {
                const std::u32string t = hyp_tokens[i];
                hyp_tokens[i] = t.substr(0, t.size() / 2) + U" " + t.substr(t.size() / 2);
            }
        }
        LineRecord record;
        record.id = "line-" + std::to_string(line_no + 1);
        record.reference = normalize(synth::join_tokens(ref_tokens));
        record.hypotheses["system"] = normalize(synth::join_tokens(hyp_tokens));
        record.modality = (line_no % 2 == 0) ? std::optional<std::string>("color")
                                             : std::optional<std::string>("bw");
        records.push_back(std::move(record));
    }
    return records;
}

// Serializes records to manifest JSON-lines (the same format read_manifest
// accepts). Hypothesis keys serialize in model-id order.
inline std::string to_manifest_jsonl(std::span<const LineRecord> records) {
    std::string out;
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["id"] = r.id;
        j["ref"] = to_utf8(r.reference);
        j["hyp"] = nlohmann::ordered_json::object();
        for (const auto& [model, hyp] : r.hypotheses) j["hyp"][model] = to_utf8(hyp);
        if (r.modality) j["modality"] = *r.modality;
        if (r.source) j["source"] = *r.source;
        out += j.dump() + "\n";
    }
    return out;
}

} // namespace histocr
