#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "corpus/volume.hpp"

namespace corpus {

// Pinned seed for the shingle hash; fingerprints must be stable across
// releases.
inline constexpr uint64_t kShingleHashSeed = 0x5eed5eedULL;

// Characters remaining after removing whitespace, line breaks, and line-final
// hyphens. Mid-word hyphens are real characters and count.
int64_t continuous_char_count(std::string_view text);

// The normalized character stream the fingerprint is computed over:
// continuous characters, lowercased.
std::string continuous_normalize(std::string_view text);

struct SimhashFingerprint {
    uint64_t bits = 0;
    std::string barcode;
    bool too_short = false;  // normalized text shorter than the shingle length
};

// 64-bit locality-sensitive fingerprint over character shingles of the
// normalized text: per-bit weighted majority of shingle hashes, weighted by
// shingle frequency.
SimhashFingerprint simhash(std::string_view text, const PipelineConfig& config,
                           std::string barcode = {});

struct DuplicateGroup {
    std::vector<std::string> members;  // barcodes, size >= 2, sorted
    std::string representative;       // lexicographically smallest member
};

// Groups fingerprints by exact 64-bit equality (the default), or by Hamming
// distance <= config.dedup_hamming_radius when that is positive (4-way table
// split plus union-find). Singletons are discarded.
std::vector<DuplicateGroup> group_candidates(
    const std::vector<SimhashFingerprint>& fingerprints,
    const PipelineConfig& config);

struct FilterOutcome {
    bool dissolved = false;
    DuplicateGroup group;                 // valid when not dissolved
    std::vector<std::string> removed;     // members dropped by the filters
    std::vector<std::string> warnings;    // e.g. language filter not applicable
};

// The false-positive filters: members whose detected main language differs
// from the group mode are removed, as are members whose continuous character
// count differs from the group median by >= continuous_char_diff_max
// (relative to the smaller value). Groups shrinking below 2 dissolve.
FilterOutcome filter_false_positives(
    const DuplicateGroup& group,
    const std::map<std::string, const VolumeRecord*>& records,
    const PipelineConfig& config);

}  // namespace corpus
