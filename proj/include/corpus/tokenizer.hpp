#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus/volume.hpp"

namespace corpus {

// A named subword tokenizer. encode("") is empty and encode is deterministic.
class TokenizerProfile {
public:
    virtual ~TokenizerProfile() = default;
    virtual const std::string& name() const = 0;
    virtual std::vector<int> encode(std::string_view text) const = 0;
};

// Byte-pair-encoding tokenizer over a ranked vocabulary loaded at runtime.
//
// Vocabulary file format: a header line `#bpe-vocab NAME`, then one token per
// line as `RANK<TAB>TOKEN` with TOKEN bytes escaped (\\, \t, \n, \r, \xHH).
// Ranks double as merge priorities: encoding repeatedly merges the adjacent
// pair whose concatenation has the lowest rank. Bytes absent from the
// vocabulary count as one token each.
class BpeTokenizer : public TokenizerProfile {
public:
    static BpeTokenizer load(const std::string& path);

    // Learns a vocabulary of up to vocab_size entries from sample text:
    // all 256 single bytes first, then merges by descending pair frequency.
    static BpeTokenizer train(std::string_view sample, size_t vocab_size,
                              const std::string& name);

    void save(const std::string& path) const;

    const std::string& name() const override { return name_; }
    std::vector<int> encode(std::string_view text) const override;

    size_t vocab_size() const { return ranks_.size(); }

private:
    std::string name_;
    std::unordered_map<std::string, int> ranks_;

    std::vector<int> encode_word(std::string_view word) const;
};

struct TokenReport {
    std::string barcode;
    std::string tokenizer_name;
    int64_t total_tokens = 0;
    std::vector<int64_t> per_page_tokens;
};

int64_t count_tokens(std::string_view text, const TokenizerProfile& tokenizer);

TokenReport make_token_report(const VolumeRecord& record,
                              const TokenizerProfile& tokenizer);

// True iff total volume tokens are strictly below the configured floor.
bool is_textless(const VolumeRecord& record, const TokenizerProfile& tokenizer,
                 const PipelineConfig& config);

}  // namespace corpus
