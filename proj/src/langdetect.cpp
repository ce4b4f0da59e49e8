#include "corpus/langdetect.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "corpus/util.hpp"

namespace fs = std::filesystem;

namespace corpus {

namespace {

// Lowercased letters with everything else collapsed to single spaces, padded
// with one space on each side. Caseless scripts pass through unchanged.
std::vector<char32_t> normalize_letters(std::string_view text) {
    std::vector<char32_t> out;
    out.reserve(text.size() + 2);
    out.push_back(U' ');
    size_t i = 0;
    while (i < text.size()) {
        char32_t cp = utf8_next(text, i);
        if (is_letter_cp(cp)) {
            out.push_back(to_lower_cp(cp));
        } else if (out.back() != U' ') {
            out.push_back(U' ');
        }
    }
    if (out.back() != U' ') out.push_back(U' ');
    return out;
}

std::string cps_to_utf8(const char32_t* cps, size_t n) {
    std::string s;
    for (size_t i = 0; i < n; ++i) utf8_append(s, cps[i]);
    return s;
}

}  // namespace

TrigramProfile::TrigramProfile(std::string language,
                               std::vector<std::string> ranked)
    : language_(std::move(language)), ranked_(std::move(ranked)) {
    if (ranked_.size() > kProfileTrigramCap) ranked_.resize(kProfileTrigramCap);
    for (size_t i = 0; i < ranked_.size(); ++i) {
        if (!rank_of_.emplace(ranked_[i], i).second)
            throw std::runtime_error("duplicate trigram in profile for " +
                                     language_);
    }
}

std::vector<std::pair<std::string, int64_t>> chunk_trigram_ranks(
    std::string_view chunk) {
    auto norm = normalize_letters(chunk);
    std::unordered_map<std::string, int64_t> freq;
    for (size_t i = 0; i + 2 < norm.size(); ++i) {
        // Skip the all-space trigram; it carries no signal.
        if (norm[i] == U' ' && norm[i + 1] == U' ') continue;
        freq[cps_to_utf8(&norm[i], 3)] += 1;
    }
    std::vector<std::pair<std::string, int64_t>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return ranked;
}

TrigramProfile TrigramProfile::from_text(const std::string& language,
                                         std::string_view sample) {
    auto ranked = chunk_trigram_ranks(sample);
    if (ranked.size() > kProfileTrigramCap) ranked.resize(kProfileTrigramCap);
    std::vector<std::string> trigrams;
    trigrams.reserve(ranked.size());
    for (auto& [t, _] : ranked) trigrams.push_back(std::move(t));
    return TrigramProfile(language, std::move(trigrams));
}

TrigramProfile TrigramProfile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile: " + path);
    std::string lang;
    if (!std::getline(in, lang) || lang.empty())
        throw std::runtime_error(path + ": missing language header");
    std::vector<std::string> trigrams;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), '_', ' ');
        trigrams.push_back(line);
    }
    return TrigramProfile(lang, std::move(trigrams));
}

void TrigramProfile::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write profile: " + path);
    out << language_ << "\n";
    for (const auto& t : ranked_) {
        std::string enc = t;
        std::replace(enc.begin(), enc.end(), ' ', '_');
        out << enc << "\n";
    }
}

size_t TrigramProfile::rank_or_penalty(const std::string& trigram) const {
    auto it = rank_of_.find(trigram);
    return it == rank_of_.end() ? kProfileTrigramCap : it->second;
}

std::map<std::string, TrigramProfile> load_profiles(const std::string& dir) {
    std::map<std::string, TrigramProfile> out;
    if (!fs::is_directory(dir))
        throw std::runtime_error("profile directory not found: " + dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".profile") continue;
        TrigramProfile p = TrigramProfile::load(entry.path().string());
        std::string lang = p.language();
        out.emplace(std::move(lang), std::move(p));
    }
    if (out.empty())
        throw std::runtime_error("no .profile files in " + dir);
    return out;
}

std::vector<std::string> split_chunks(std::string_view text, int64_t max_chars) {
    if (max_chars < 1)
        throw std::invalid_argument("split_chunks: max_chars must be >= 1");
    auto cps = utf8_decode(text);
    const size_t n = cps.size();
    const size_t maxc = static_cast<size_t>(max_chars);
    std::vector<std::string> chunks;

    auto push = [&](size_t from, size_t to) {
        if (to > from) {
            std::string s = cps_to_utf8(&cps[from], to - from);
            // Whitespace-only chunks carry nothing detectable.
            if (s.find_first_not_of(" \t\r\n") != std::string::npos)
                chunks.push_back(std::move(s));
        }
    };

    size_t pos = 0;
    while (pos < n) {
        if (n - pos <= maxc) {
            push(pos, n);
            break;
        }
        size_t limit = pos + maxc;  // exclusive end of the candidate chunk
        size_t split = 0, consume_from = 0, consume_len = 0;
        bool found = false;

        // Blank-line boundary.
        for (size_t i = limit; i-- > pos + 1;) {
            if (cps[i] == U'\n' && cps[i - 1] == U'\n') {
                split = i - 1;
                consume_from = i - 1;
                consume_len = 2;
                found = true;
                break;
            }
        }
        // Line boundary.
        if (!found) {
            for (size_t i = limit; i-- > pos;) {
                if (cps[i] == U'\n') {
                    split = i;
                    consume_from = i;
                    consume_len = 1;
                    found = true;
                    break;
                }
            }
        }
        // Sentence-final punctuation followed by whitespace.
        if (!found) {
            for (size_t i = limit; i-- > pos + 1;) {
                char32_t prev = cps[i - 1];
                if ((prev == U'.' || prev == U'!' || prev == U'?' ||
                     prev == 0x3002) &&
                    is_space_cp(cps[i])) {
                    split = i;
                    consume_from = i;
                    consume_len = 1;
                    found = true;
                    break;
                }
            }
        }
        // Any whitespace.
        if (!found) {
            for (size_t i = limit; i-- > pos;) {
                if (is_space_cp(cps[i])) {
                    split = i;
                    consume_from = i;
                    consume_len = 1;
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            // Hard cut.
            push(pos, limit);
            pos = limit;
            continue;
        }
        push(pos, split);
        pos = consume_from + consume_len;
        if (pos <= split && consume_len == 0) pos = split + 1;  // progress guard
    }
    return chunks;
}

DetectionResult detect_chunk(
    std::string_view chunk,
    const std::map<std::string, TrigramProfile>& profiles) {
    if (profiles.empty())
        throw std::invalid_argument("detect_chunk: no profiles loaded");

    auto norm = normalize_letters(chunk);
    size_t usable = 0;
    for (char32_t cp : norm)
        if (cp != U' ') ++usable;
    if (usable < 3) return {"und", 1.0};

    auto ranked = chunk_trigram_ranks(chunk);
    if (ranked.size() > kProfileTrigramCap) ranked.resize(kProfileTrigramCap);

    DetectionResult best{"und", 1.0};
    bool first = true;
    for (const auto& [lang, profile] : profiles) {
        double d = 0.0;
        for (size_t i = 0; i < ranked.size(); ++i) {
            size_t pr = profile.rank_or_penalty(ranked[i].first);
            d += static_cast<double>(pr > i ? pr - i : i - pr);
        }
        d /= static_cast<double>(ranked.size() * kProfileTrigramCap);
        // Strict < keeps the lexicographically first language on ties.
        if (first || d < best.distance_score) {
            best = {lang, d};
            first = false;
        }
    }
    return best;
}

LanguageDistribution volume_distribution(
    const VolumeRecord& record,
    const std::map<std::string, TrigramProfile>& profiles,
    const TokenizerProfile& tokenizer, const PipelineConfig& config) {
    std::map<std::string, int64_t> totals;
    for (const auto& page : record.pages_source) {
        for (const auto& chunk : split_chunks(page, config.chunk_max_chars)) {
            DetectionResult det = detect_chunk(chunk, profiles);
            totals[det.language] += count_tokens(chunk, tokenizer);
        }
    }
    std::vector<std::pair<std::string, int64_t>> kept;
    int64_t grand = 0;
    for (const auto& [lang, tokens] : totals) {
        if (tokens < config.language_token_floor) continue;
        kept.emplace_back(lang, tokens);
        grand += tokens;
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    LanguageDistribution dist;
    for (const auto& [lang, tokens] : kept) {
        dist.languages.push_back(lang);
        dist.token_totals.push_back(tokens);
        dist.proportions.push_back(grand > 0
                                       ? static_cast<double>(tokens) /
                                             static_cast<double>(grand)
                                       : 0.0);
    }
    return dist;
}

std::optional<std::string> main_language(const LanguageDistribution& dist) {
    if (dist.empty()) return std::nullopt;
    return dist.languages.front();
}

}  // namespace corpus
