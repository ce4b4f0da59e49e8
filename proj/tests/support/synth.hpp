#pragma once

// Deterministic generators for test corpora: word-pool prose in the five
// post-processing languages, OCR-style page layouts with furniture lines,
// and labeled line samples for classifier training.

#include <random>
#include <string>
#include <vector>

#include "corpus/linetype.hpp"
#include "corpus/volume.hpp"

namespace synth {

using Rng = std::mt19937_64;

const std::vector<std::string>& word_pool(const std::string& lang);

std::string sentence(Rng& rng, const std::string& lang, int min_words = 6,
                     int max_words = 15);
std::string paragraph(Rng& rng, const std::string& lang, int min_sentences = 3,
                      int max_sentences = 7);

// Greedy fill at the given width; words longer than the remaining space may
// be split with a trailing hyphen (ASCII words only, so splits never land
// mid-codepoint).
std::vector<std::string> wrap_lines(const std::string& text, size_t width,
                                    double hyphen_prob, Rng& rng);

std::string page_number_line(Rng& rng, int number);
std::string separator_line(Rng& rng);
std::string noise_line(Rng& rng);
std::string heading_line(Rng& rng, const std::string& lang);
std::string running_head_line(Rng& rng, const std::string& lang);
std::string loose_line(Rng& rng, const std::string& lang);

// Labeled samples across the five languages whose class mix follows the
// published hand-label distribution.
std::vector<std::pair<corpus::PositionalLine, corpus::LineType>> labeled_lines(
    size_t count, uint64_t seed);

// An English volume with page numbers top and bottom, a running head on each
// page, chapter headings, and hyphen-wrapped paragraphs that may continue
// across page boundaries.
corpus::VolumeRecord english_volume(Rng& rng, const std::string& barcode,
                                    int page_count, int lines_per_page);

// Long single-language prose (paragraphs separated by blank lines), at least
// min_chars long, for dedup corpora.
std::string book_text(Rng& rng, const std::string& lang, size_t min_chars);

// Random letter substitutions at the given per-character rate; newlines are
// left alone.
std::string substitute_noise(const std::string& text, Rng& rng, double rate);

// Re-wraps prose at a new width (a pure layout change).
std::string reflow(const std::string& text, size_t width, Rng& rng);

// Splits line-wrapped text into pages of at most lines_per_page lines.
std::vector<std::string> paginate(const std::string& wrapped,
                                  int lines_per_page);

}  // namespace synth
