#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace corpus {

using json = nlohmann::ordered_json;

// Volume identifier. Non-empty, no whitespace.
struct Barcode {
    std::string value;

    static std::optional<Barcode> make(std::string v);
    bool operator==(const Barcode&) const = default;
    auto operator<=>(const Barcode&) const = default;
};

// Per-volume ranked language shares with token weights.
struct LanguageDistribution {
    std::vector<std::string> languages;    // ISO 639-3, sorted by prevalence
    std::vector<double> proportions;       // same order, sums to 1 when non-empty
    std::vector<int64_t> token_totals;

    bool empty() const { return languages.empty(); }
};

// Per-text metric bundle (counts, type-token ratios, tokenizability,
// sentence stats).
struct TextAnalysis {
    double tokenizability_score = 0.0;
    int64_t char_count = 0;
    int64_t continuous_char_count = 0;
    int64_t word_count = 0;
    int64_t word_count_unique = 0;
    double word_type_token_ratio = 0.0;
    int64_t bigram_count = 0;
    int64_t bigram_count_unique = 0;
    double bigram_type_token_ratio = 0.0;
    int64_t trigram_count = 0;
    int64_t trigram_count_unique = 0;
    double trigram_type_token_ratio = 0.0;
    int64_t sentence_count = 0;
    int64_t sentence_count_unique = 0;
    double avg_sentence_length_chars = 0.0;
};

// Rights determination data pulled from the external rights API.
struct RightsInfo {
    std::string url;
    std::string rights_code;
    std::string reason_code;
    std::string last_check;  // ISO-8601 date
};

// One digitized volume: barcode, bibliographic fields, page texts, and the
// analyses generated by the pipeline stages.
struct VolumeRecord {
    std::string barcode;
    std::optional<std::string> title;
    std::optional<std::string> author;
    std::optional<std::string> date1;
    std::optional<std::string> date2;
    std::optional<std::string> date_types;
    int64_t page_count = 0;
    std::optional<std::string> language_declared;  // ISO 639-3
    std::optional<std::string> topic_or_subject;
    std::optional<std::string> genre_or_form;
    std::optional<std::string> general_note;
    std::optional<int> ocr_score_source;  // 0-100
    std::map<std::string, std::vector<std::string>> identifiers;
    std::vector<std::string> pages_source;
    std::optional<std::vector<std::string>> pages_processed;

    // Generated / external fields, populated stage by stage.
    std::optional<int64_t> token_count;
    std::optional<bool> textless;
    std::optional<std::string> language_detected;
    std::optional<LanguageDistribution> language_distribution;
    std::optional<std::string> topic_detected;
    std::optional<double> topic_score;
    std::optional<int> ocr_score_generated;
    std::vector<std::string> likely_duplicates;
    std::optional<uint64_t> simhash_bits;
    std::optional<TextAnalysis> analysis_source;
    std::optional<TextAnalysis> analysis_processed;
    std::optional<RightsInfo> rights;
};

// Every scalar threshold the pipeline uses, in one place, so experiments can
// vary them. Defaults are the published values.
struct PipelineConfig {
    int64_t textless_token_floor = 100;
    int64_t chunk_max_chars = 768;
    int64_t language_token_floor = 1000;
    int shingle_length = 7;
    double continuous_char_diff_max = 0.15;
    double tokenizability_target = 1.25;
    std::set<std::string> public_domain_codes = {"pd", "pdus", "cc-zero"};
    int worker_count = 1;

    // Secondary OCR quality scoring (calibrated on bundled fixtures).
    double ocr_letter_ratio_min = 0.6;
    double ocr_distance_max = 0.55;
    int64_t ocr_chunk_max_chars = 128;

    // 0 = exact fingerprint equality; >0 enables Hamming-radius grouping.
    int dedup_hamming_radius = 0;
    bool carry_paragraphs = true;
    uint64_t seed = 42;

    std::vector<std::string> violations() const;
};

// Parse a key = value config file (one pair per line, # comments).
PipelineConfig load_config(const std::string& path);
void save_config(const PipelineConfig& cfg, const std::string& path);

// Reports every invariant violation; never throws. Empty result means valid.
std::vector<std::string> validate_record(const VolumeRecord& record);

json record_to_json(const VolumeRecord& record);
VolumeRecord record_from_json(const json& j);

json analysis_to_json(const TextAnalysis& a);
TextAnalysis analysis_from_json(const json& j);

}  // namespace corpus
