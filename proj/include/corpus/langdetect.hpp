#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus/tokenizer.hpp"
#include "corpus/volume.hpp"

namespace corpus {

inline constexpr size_t kProfileTrigramCap = 300;

// Ranked character-trigram profile for one language.
class TrigramProfile {
public:
    TrigramProfile() = default;
    TrigramProfile(std::string language, std::vector<std::string> ranked);

    // Builds a profile from sample text, capped at kProfileTrigramCap.
    static TrigramProfile from_text(const std::string& language,
                                    std::string_view sample);

    // File format: header line with the ISO 639-3 code, then one trigram per
    // line in rank order, spaces written as '_'.
    static TrigramProfile load(const std::string& path);
    void save(const std::string& path) const;

    const std::string& language() const { return language_; }
    const std::vector<std::string>& ranked_trigrams() const { return ranked_; }
    // Rank of a trigram, or the out-of-place penalty when absent.
    size_t rank_or_penalty(const std::string& trigram) const;

private:
    std::string language_;
    std::vector<std::string> ranked_;
    std::unordered_map<std::string, size_t> rank_of_;
};

// All profiles from *.profile files in a directory, keyed by language,
// iterated in sorted language order for deterministic tie-breaks.
std::map<std::string, TrigramProfile> load_profiles(const std::string& dir);

struct ChunkDetection {
    std::string chunk_text;
    std::string language;     // "und" when undetectable
    double distance_score = 0.0;  // 0 best .. 1 worst
    int64_t token_count = 0;
};

// Splits text into chunks of at most max_chars code points, preferring in
// order: blank-line boundary, line boundary, sentence-final punctuation,
// whitespace, hard cut.
std::vector<std::string> split_chunks(std::string_view text, int64_t max_chars);

// Lowercases, strips non-letters to spaces, pads, and returns the sliding
// trigrams of the result with their frequencies.
std::vector<std::pair<std::string, int64_t>> chunk_trigram_ranks(
    std::string_view chunk);

struct DetectionResult {
    std::string language;
    double distance_score = 1.0;
};

// Minimal out-of-place rank distance across profiles; ties break on language
// code order. Chunks with fewer than 3 usable characters are "und".
DetectionResult detect_chunk(std::string_view chunk,
                             const std::map<std::string, TrigramProfile>& profiles);

// Per-volume language distribution: chunk token counts summed per detected
// language, languages below the token floor dropped, proportions
// renormalized over survivors and sorted by prevalence.
LanguageDistribution volume_distribution(
    const VolumeRecord& record,
    const std::map<std::string, TrigramProfile>& profiles,
    const TokenizerProfile& tokenizer, const PipelineConfig& config);

std::optional<std::string> main_language(const LanguageDistribution& dist);

}  // namespace corpus
