#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpus/langdetect.hpp"
#include "corpus/tokenizer.hpp"
#include "corpus/volume.hpp"

namespace corpus {

struct Segments {
    std::vector<std::string> words;      // lowercased
    std::vector<std::string> sentences;  // whitespace-normalized, case kept
};

// Language-aware word and sentence segmentation. Words are maximal runs of
// letters/digits with internal apostrophes and hyphens. Sentences split at
// sentence-final punctuation followed by whitespace and an uppercase or
// opening character, guarded by a per-language abbreviation list. Unknown
// languages fall back to the default segmenter.
Segments segment(std::string_view text, const std::string& language);

// Closeness of tokens-per-word to the configured target, as a 0..100 score
// symmetric in ratio space.
double tokenizability(int64_t token_count, int64_t word_count,
                      const PipelineConfig& config);

TextAnalysis analyze_text(std::string_view text, const std::string& language,
                          const TokenizerProfile& tokenizer,
                          const PipelineConfig& config);

struct OcrQualityScore {
    int score = 0;  // 0-100, round(100 * valid / assessed)
    int64_t chunks_assessed = 0;
    int64_t chunks_valid = 0;
};

// Secondary OCR quality score: the text is cut into small chunks and each is
// checked for letter ratio and language-detection distance. Empty text is
// unassessable and yields nothing.
std::optional<OcrQualityScore> ocr_quality(
    std::string_view text, const std::map<std::string, TrigramProfile>& profiles,
    const PipelineConfig& config);

}  // namespace corpus
