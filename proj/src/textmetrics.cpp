#include "corpus/textmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "corpus/dedup.hpp"
#include "corpus/util.hpp"

namespace corpus {

namespace {

// Abbreviations that end in a period without ending a sentence.
const std::unordered_set<std::string>& abbreviations(const std::string& lang) {
    static const std::unordered_set<std::string> eng = {
        "mr", "mrs", "ms", "dr", "st", "prof", "rev", "hon", "jr", "sr",
        "vs", "etc", "e.g", "i.e", "cf", "vol", "no", "ch", "fig", "p", "pp"};
    static const std::unordered_set<std::string> deu = {
        "nr", "dr", "hr", "fr", "bzw", "usw", "ca", "abs", "bd", "hrsg",
        "vgl", "z.b", "s", "u.a"};
    static const std::unordered_set<std::string> fra = {
        "m", "mm", "mme", "mlle", "dr", "st", "etc", "cf", "p", "vol",
        "chap", "fig"};
    static const std::unordered_set<std::string> ita = {
        "sig", "dott", "prof", "ecc", "p", "vol", "cap", "fig", "art"};
    static const std::unordered_set<std::string> spa = {
        "sr", "sra", "srta", "dr", "dra", "etc", "p", "vol", "cap", "art",
        "núm", "num"};
    if (lang == "deu") return deu;
    if (lang == "fra") return fra;
    if (lang == "ita") return ita;
    if (lang == "spa") return spa;
    return eng;
}

bool is_word_cp(char32_t cp) { return is_letter_cp(cp) || is_digit_cp(cp); }

bool is_upper_cp(char32_t cp) {
    return is_letter_cp(cp) && to_lower_cp(cp) != cp;
}

bool is_opening_cp(char32_t cp) {
    return cp == U'"' || cp == U'\'' || cp == U'(' || cp == U'[' ||
           cp == 0x00AB || cp == 0x2018 || cp == 0x201C;
}

bool is_sentence_final_cp(char32_t cp) {
    return cp == U'.' || cp == U'!' || cp == U'?' || cp == 0x3002 ||
           cp == 0x2026;
}

std::string normalize_ws(std::string_view s) {
    std::string out;
    bool in_space = true;  // drops leading whitespace
    size_t i = 0;
    while (i < s.size()) {
        char32_t cp = utf8_next(s, i);
        if (is_space_cp(cp)) {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            utf8_append(out, cp);
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

size_t cp_length(std::string_view s) {
    size_t n = 0, i = 0;
    while (i < s.size()) {
        utf8_next(s, i);
        ++n;
    }
    return n;
}

}  // namespace

Segments segment(std::string_view text, const std::string& language) {
    const auto& abbrev = abbreviations(language);
    auto cps = utf8_decode(text);
    Segments out;

    // Words: letter/digit runs with internal apostrophes and hyphens.
    std::string word;
    auto flush_word = [&] {
        if (!word.empty()) {
            out.words.push_back(word);
            word.clear();
        }
    };
    for (size_t i = 0; i < cps.size(); ++i) {
        char32_t cp = cps[i];
        if (is_word_cp(cp)) {
            utf8_append(word, to_lower_cp(cp));
        } else if ((cp == U'\'' || cp == U'-' || cp == 0x2019) &&
                   !word.empty() && i + 1 < cps.size() &&
                   is_word_cp(cps[i + 1])) {
            utf8_append(word, cp == 0x2019 ? U'\'' : cp);
        } else {
            flush_word();
        }
    }
    flush_word();

    // Sentences: split after sentence-final punctuation followed by
    // whitespace and an uppercase/opening character, unless the token before
    // a period is a known abbreviation.
    size_t sent_start = 0;  // byte offset
    size_t byte = 0;
    std::string prev_token;  // lowercased token preceding current position
    std::string cur_token;
    auto emit = [&](size_t end_byte) {
        std::string s = normalize_ws(
            std::string_view(text.data() + sent_start, end_byte - sent_start));
        if (!s.empty()) out.sentences.push_back(std::move(s));
        sent_start = end_byte;
    };
    std::vector<size_t> byte_of(cps.size() + 1);
    {
        size_t i = 0, n = 0;
        while (i < text.size()) {
            byte_of[n++] = i;
            utf8_next(text, i);
        }
        byte_of[n] = text.size();
    }
    for (size_t i = 0; i < cps.size(); ++i) {
        char32_t cp = cps[i];
        if (is_word_cp(cp) || cp == U'.') {
            if (cp != U'.') {
                std::string tmp;
                utf8_append(tmp, to_lower_cp(cp));
                cur_token += tmp;
            }
        } else {
            if (!cur_token.empty()) prev_token = cur_token;
            cur_token.clear();
        }
        if (!is_sentence_final_cp(cp)) continue;
        // Allow a closing quote/bracket right after the punctuation.
        size_t j = i + 1;
        while (j < cps.size() &&
               (cps[j] == U'"' || cps[j] == U'\'' || cps[j] == U')' ||
                cps[j] == 0x00BB || cps[j] == 0x2019 || cps[j] == 0x201D))
            ++j;
        if (j >= cps.size() || !is_space_cp(cps[j])) continue;
        size_t k = j;
        while (k < cps.size() && is_space_cp(cps[k])) ++k;
        if (k >= cps.size()) continue;
        if (!(is_upper_cp(cps[k]) || is_opening_cp(cps[k]))) continue;
        if (cp == U'.') {
            const std::string& tok = cur_token.empty() ? prev_token : cur_token;
            if (abbrev.count(tok)) continue;
            // Single letters read as initials, except in French where "M."
            // is already guarded above.
            if (tok.size() == 1 && language != "fra") continue;
        }
        emit(byte_of[j]);
        if (!cur_token.empty()) prev_token = cur_token;
        cur_token.clear();
    }
    emit(text.size());
    return out;
}

double tokenizability(int64_t token_count, int64_t word_count,
                      const PipelineConfig& config) {
    if (word_count <= 0) return 0.0;
    double r = static_cast<double>(token_count) / static_cast<double>(word_count);
    double t = config.tokenizability_target;
    if (r <= 0.0) return 0.0;
    return 100.0 * std::min(r, t) / std::max(r, t);
}

namespace {

struct NgramCounts {
    int64_t total = 0;
    int64_t unique = 0;
};

NgramCounts count_ngrams(const std::vector<std::string>& words, size_t n) {
    NgramCounts out;
    if (words.size() < n) return out;
    std::unordered_set<std::string> seen;
    for (size_t i = 0; i + n <= words.size(); ++i) {
        std::string g = words[i];
        for (size_t j = 1; j < n; ++j) {
            g.push_back(' ');
            g += words[i + j];
        }
        ++out.total;
        seen.insert(std::move(g));
    }
    out.unique = static_cast<int64_t>(seen.size());
    return out;
}

double ttr(int64_t unique, int64_t total) {
    return total > 0 ? 100.0 * static_cast<double>(unique) /
                           static_cast<double>(total)
                     : 0.0;
}

}  // namespace

TextAnalysis analyze_text(std::string_view text, const std::string& language,
                          const TokenizerProfile& tokenizer,
                          const PipelineConfig& config) {
    TextAnalysis a;
    a.char_count = static_cast<int64_t>(cp_length(text));
    a.continuous_char_count = continuous_char_count(text);

    Segments seg = segment(text, language);
    a.word_count = static_cast<int64_t>(seg.words.size());
    {
        std::unordered_set<std::string> uniq(seg.words.begin(), seg.words.end());
        a.word_count_unique = static_cast<int64_t>(uniq.size());
    }
    a.word_type_token_ratio = ttr(a.word_count_unique, a.word_count);

    NgramCounts bi = count_ngrams(seg.words, 2);
    a.bigram_count = bi.total;
    a.bigram_count_unique = bi.unique;
    a.bigram_type_token_ratio = ttr(bi.unique, bi.total);

    NgramCounts tri = count_ngrams(seg.words, 3);
    a.trigram_count = tri.total;
    a.trigram_count_unique = tri.unique;
    a.trigram_type_token_ratio = ttr(tri.unique, tri.total);

    a.sentence_count = static_cast<int64_t>(seg.sentences.size());
    {
        std::unordered_set<std::string> uniq(seg.sentences.begin(),
                                             seg.sentences.end());
        a.sentence_count_unique = static_cast<int64_t>(uniq.size());
    }
    if (!seg.sentences.empty()) {
        int64_t total_chars = 0;
        for (const auto& s : seg.sentences)
            total_chars += static_cast<int64_t>(cp_length(s));
        a.avg_sentence_length_chars =
            static_cast<double>(total_chars) /
            static_cast<double>(seg.sentences.size());
    }

    a.tokenizability_score =
        tokenizability(count_tokens(text, tokenizer), a.word_count, config);
    return a;
}

std::optional<OcrQualityScore> ocr_quality(
    std::string_view text, const std::map<std::string, TrigramProfile>& profiles,
    const PipelineConfig& config) {
    auto chunks = split_chunks(text, config.ocr_chunk_max_chars);
    if (chunks.empty()) return std::nullopt;

    OcrQualityScore q;
    for (const auto& chunk : chunks) {
        ++q.chunks_assessed;
        size_t letters = 0, nonspace = 0;
        size_t i = 0;
        while (i < chunk.size()) {
            char32_t cp = utf8_next(chunk, i);
            if (is_space_cp(cp)) continue;
            ++nonspace;
            if (is_letter_cp(cp)) ++letters;
        }
        if (nonspace == 0) continue;
        double letter_ratio =
            static_cast<double>(letters) / static_cast<double>(nonspace);
        if (letter_ratio < config.ocr_letter_ratio_min) continue;
        DetectionResult det = detect_chunk(chunk, profiles);
        if (det.language == "und" || det.distance_score > config.ocr_distance_max)
            continue;
        ++q.chunks_valid;
    }
    q.score = static_cast<int>(std::lround(
        100.0 * static_cast<double>(q.chunks_valid) /
        static_cast<double>(q.chunks_assessed)));
    return q;
}

}  // namespace corpus
