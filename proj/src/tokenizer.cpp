#include "corpus/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace corpus {

namespace {

std::string escape_token(std::string_view t) {
    std::string out;
    for (unsigned char c : t) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\x%02x", c);
                    out += buf;
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    return out;
}

std::string unescape_token(std::string_view t) {
    std::string out;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] != '\\' || i + 1 >= t.size()) {
            out.push_back(t[i]);
            continue;
        }
        char c = t[++i];
        switch (c) {
            case '\\': out.push_back('\\'); break;
            case 't': out.push_back('\t'); break;
            case 'n': out.push_back('\n'); break;
            case 'r': out.push_back('\r'); break;
            case 'x': {
                if (i + 2 >= t.size())
                    throw std::runtime_error("truncated \\x escape in vocabulary");
                int v = std::stoi(std::string(t.substr(i + 1, 2)), nullptr, 16);
                out.push_back(static_cast<char>(v));
                i += 2;
                break;
            }
            default:
                throw std::runtime_error("unknown escape in vocabulary token");
        }
    }
    return out;
}

// Pre-tokenization: maximal runs of non-whitespace. Whitespace itself does
// not produce tokens.
template <typename Fn>
void for_each_word(std::string_view text, Fn&& fn) {
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() &&
               std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        size_t start = i;
        while (i < text.size() &&
               !std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        if (i > start) fn(text.substr(start, i - start));
    }
}

}  // namespace

BpeTokenizer BpeTokenizer::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("#bpe-vocab", 0) != 0)
        throw std::runtime_error(path + ": missing #bpe-vocab header");
    BpeTokenizer tok;
    tok.name_ = line.size() > 11 ? line.substr(11) : "unnamed";
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected RANK<TAB>TOKEN");
        int rank = std::stoi(line.substr(0, tab));
        std::string token = unescape_token(line.substr(tab + 1));
        if (token.empty())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": empty token");
        if (!tok.ranks_.emplace(std::move(token), rank).second)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": duplicate token");
    }
    return tok;
}

void BpeTokenizer::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write vocabulary file: " + path);
    out << "#bpe-vocab " << name_ << "\n";
    std::map<int, std::string> by_rank;
    for (const auto& [token, rank] : ranks_) by_rank[rank] = token;
    for (const auto& [rank, token] : by_rank)
        out << rank << "\t" << escape_token(token) << "\n";
}

std::vector<int> BpeTokenizer::encode_word(std::string_view word) const {
    // Start from single bytes, then greedily merge the adjacent pair whose
    // concatenation carries the lowest rank.
    struct Piece {
        size_t start, len;
    };
    std::vector<Piece> pieces;
    pieces.reserve(word.size());
    for (size_t i = 0; i < word.size(); ++i) pieces.push_back({i, 1});

    auto pair_rank = [&](size_t idx) -> int {
        std::string merged(word.substr(pieces[idx].start,
                                       pieces[idx].len + pieces[idx + 1].len));
        auto it = ranks_.find(merged);
        return it == ranks_.end() ? std::numeric_limits<int>::max() : it->second;
    };

    while (pieces.size() > 1) {
        int best_rank = std::numeric_limits<int>::max();
        size_t best_idx = 0;
        for (size_t i = 0; i + 1 < pieces.size(); ++i) {
            int r = pair_rank(i);
            if (r < best_rank) {
                best_rank = r;
                best_idx = i;
            }
        }
        if (best_rank == std::numeric_limits<int>::max()) break;
        pieces[best_idx].len += pieces[best_idx + 1].len;
        pieces.erase(pieces.begin() + static_cast<ptrdiff_t>(best_idx) + 1);
    }

    std::vector<int> ids;
    ids.reserve(pieces.size());
    for (const auto& p : pieces) {
        auto it = ranks_.find(std::string(word.substr(p.start, p.len)));
        // Unknown single bytes map to a sentinel id past the vocabulary.
        ids.push_back(it == ranks_.end() ? static_cast<int>(ranks_.size())
                                         : it->second);
    }
    return ids;
}

std::vector<int> BpeTokenizer::encode(std::string_view text) const {
    std::vector<int> out;
    for_each_word(text, [&](std::string_view word) {
        auto ids = encode_word(word);
        out.insert(out.end(), ids.begin(), ids.end());
    });
    return out;
}

BpeTokenizer BpeTokenizer::train(std::string_view sample, size_t vocab_size,
                                 const std::string& name) {
    BpeTokenizer tok;
    tok.name_ = name;
    int next_rank = 0;
    for (int b = 0; b < 256; ++b)
        tok.ranks_.emplace(std::string(1, static_cast<char>(b)), next_rank++);

    // Word frequency table; each word is kept as its current piece split.
    std::map<std::string, int64_t> word_freq;
    for_each_word(sample,
                  [&](std::string_view w) { word_freq[std::string(w)] += 1; });
    std::vector<std::pair<std::vector<std::string>, int64_t>> words;
    words.reserve(word_freq.size());
    for (const auto& [w, f] : word_freq) {
        std::vector<std::string> pieces;
        for (char c : w) pieces.emplace_back(1, c);
        words.emplace_back(std::move(pieces), f);
    }

    while (tok.ranks_.size() < vocab_size) {
        std::map<std::pair<std::string, std::string>, int64_t> pair_freq;
        for (const auto& [pieces, f] : words)
            for (size_t i = 0; i + 1 < pieces.size(); ++i)
                pair_freq[{pieces[i], pieces[i + 1]}] += f;
        if (pair_freq.empty()) break;
        auto best = pair_freq.begin();
        for (auto it = pair_freq.begin(); it != pair_freq.end(); ++it)
            if (it->second > best->second) best = it;
        if (best->second < 2) break;
        std::string merged = best->first.first + best->first.second;
        if (!tok.ranks_.emplace(merged, next_rank).second) {
            // Already present (possible when the sample repeats a learned
            // token); just stop considering this pair.
            break;
        }
        ++next_rank;
        for (auto& [pieces, f] : words) {
            for (size_t i = 0; i + 1 < pieces.size();) {
                if (pieces[i] == best->first.first &&
                    pieces[i + 1] == best->first.second) {
                    pieces[i] = merged;
                    pieces.erase(pieces.begin() + static_cast<ptrdiff_t>(i) + 1);
                } else {
                    ++i;
                }
            }
        }
    }
    return tok;
}

int64_t count_tokens(std::string_view text, const TokenizerProfile& tokenizer) {
    return static_cast<int64_t>(tokenizer.encode(text).size());
}

TokenReport make_token_report(const VolumeRecord& record,
                              const TokenizerProfile& tokenizer) {
    TokenReport report;
    report.barcode = record.barcode;
    report.tokenizer_name = tokenizer.name();
    for (const auto& page : record.pages_source) {
        int64_t n = count_tokens(page, tokenizer);
        report.per_page_tokens.push_back(n);
        report.total_tokens += n;
    }
    return report;
}

bool is_textless(const VolumeRecord& record, const TokenizerProfile& tokenizer,
                 const PipelineConfig& config) {
    int64_t total = 0;
    for (const auto& page : record.pages_source) {
        total += count_tokens(page, tokenizer);
        if (total >= config.textless_token_floor) return false;
    }
    return total < config.textless_token_floor;
}

}  // namespace corpus
