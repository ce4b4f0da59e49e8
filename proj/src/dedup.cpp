#include "corpus/dedup.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "corpus/util.hpp"

namespace corpus {

namespace {

bool is_hyphen_cp(char32_t cp) {
    return cp == U'-' || cp == 0x2010 || cp == 0x00AD;
}

// Continuous character stream: whitespace and line breaks removed, and a
// hyphen dropped when only whitespace separates it from the next line break
// (or from the end of the text).
std::vector<char32_t> continuous_cps(std::string_view text) {
    auto cps = utf8_decode(text);
    std::vector<char32_t> out;
    out.reserve(cps.size());
    for (size_t i = 0; i < cps.size(); ++i) {
        char32_t cp = cps[i];
        if (is_space_cp(cp)) continue;
        if (is_hyphen_cp(cp)) {
            size_t j = i + 1;
            while (j < cps.size() && is_space_cp(cps[j]) && cps[j] != U'\n')
                ++j;
            if (j == cps.size() || cps[j] == U'\n') continue;  // line-final
        }
        out.push_back(cp);
    }
    return out;
}

}  // namespace

int64_t continuous_char_count(std::string_view text) {
    return static_cast<int64_t>(continuous_cps(text).size());
}

std::string continuous_normalize(std::string_view text) {
    auto cps = continuous_cps(text);
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) utf8_append(out, to_lower_cp(cp));
    return out;
}

SimhashFingerprint simhash(std::string_view text, const PipelineConfig& config,
                           std::string barcode) {
    if (config.shingle_length < 1)
        throw std::invalid_argument("simhash: shingle_length must be >= 1");
    std::string norm = continuous_normalize(text);
    auto cps = utf8_decode(norm);
    const size_t k = static_cast<size_t>(config.shingle_length);

    SimhashFingerprint fp;
    fp.barcode = std::move(barcode);
    if (cps.size() < k) {
        fp.too_short = true;
        return fp;
    }

    int64_t counters[64] = {};
    std::string shingle;
    for (size_t i = 0; i + k <= cps.size(); ++i) {
        shingle.clear();
        for (size_t j = 0; j < k; ++j) utf8_append(shingle, cps[i + j]);
        uint64_t h = fnv1a64(shingle, kShingleHashSeed);
        for (int b = 0; b < 64; ++b)
            counters[b] += (h >> b) & 1 ? 1 : -1;
    }
    for (int b = 0; b < 64; ++b)
        if (counters[b] > 0) fp.bits |= 1ull << b;
    return fp;
}

namespace {

struct UnionFind {
    std::vector<size_t> parent;
    explicit UnionFind(size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), size_t{0});
    }
    size_t find(size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

std::vector<DuplicateGroup> groups_from_components(
    const std::vector<SimhashFingerprint>& fps, UnionFind& uf) {
    std::unordered_map<size_t, std::vector<std::string>> comp;
    for (size_t i = 0; i < fps.size(); ++i)
        comp[uf.find(i)].push_back(fps[i].barcode);
    std::vector<DuplicateGroup> out;
    for (auto& [root, members] : comp) {
        if (members.size() < 2) continue;
        std::sort(members.begin(), members.end());
        DuplicateGroup g;
        g.representative = members.front();
        g.members = std::move(members);
        out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.representative < b.representative;
    });
    return out;
}

}  // namespace

std::vector<DuplicateGroup> group_candidates(
    const std::vector<SimhashFingerprint>& fingerprints,
    const PipelineConfig& config) {
    UnionFind uf(fingerprints.size());

    if (config.dedup_hamming_radius <= 0) {
        std::unordered_map<uint64_t, size_t> first_seen;
        for (size_t i = 0; i < fingerprints.size(); ++i) {
            if (fingerprints[i].too_short) continue;
            auto [it, inserted] =
                first_seen.emplace(fingerprints[i].bits, i);
            if (!inserted) uf.unite(i, it->second);
        }
    } else {
        // Any pair within Hamming distance 3 agrees exactly on at least one
        // of four 16-bit blocks; bucket per block and verify candidates.
        const int radius = config.dedup_hamming_radius;
        std::unordered_map<uint64_t, std::vector<size_t>> buckets;
        for (size_t i = 0; i < fingerprints.size(); ++i) {
            if (fingerprints[i].too_short) continue;
            for (int blk = 0; blk < 4; ++blk) {
                uint64_t key = (static_cast<uint64_t>(blk) << 32) |
                               ((fingerprints[i].bits >> (16 * blk)) & 0xFFFF);
                buckets[key].push_back(i);
            }
        }
        for (const auto& [key, idxs] : buckets) {
            for (size_t a = 0; a < idxs.size(); ++a)
                for (size_t b = a + 1; b < idxs.size(); ++b) {
                    uint64_t x = fingerprints[idxs[a]].bits ^
                                 fingerprints[idxs[b]].bits;
                    if (std::popcount(x) <= radius) uf.unite(idxs[a], idxs[b]);
                }
        }
    }
    return groups_from_components(fingerprints, uf);
}

namespace {

// Relative difference on the base that maximizes it, so a pair reading
// "16% larger" crosses a 15% threshold.
double relative_diff(double a, double b) {
    double lo = std::min(a, b), hi = std::max(a, b);
    if (lo <= 0.0) return hi > 0.0 ? 1.0 : 0.0;
    return (hi - lo) / lo;
}

}  // namespace

FilterOutcome filter_false_positives(
    const DuplicateGroup& group,
    const std::map<std::string, const VolumeRecord*>& records,
    const PipelineConfig& config) {
    FilterOutcome out;

    struct MemberInfo {
        std::string barcode;
        std::optional<std::string> language;
        double continuous = 0.0;
    };
    std::vector<MemberInfo> infos;
    for (const auto& barcode : group.members) {
        auto it = records.find(barcode);
        if (it == records.end())
            throw std::invalid_argument("filter_false_positives: unresolvable member " +
                                        barcode);
        const VolumeRecord& r = *it->second;
        int64_t cc = 0;
        for (const auto& page : r.pages_source) cc += continuous_char_count(page);
        infos.push_back({barcode, r.language_detected, static_cast<double>(cc)});
    }

    // Language mode across members that have a detection.
    std::map<std::string, int> lang_votes;
    for (const auto& m : infos)
        if (m.language) lang_votes[*m.language] += 1;
    std::optional<std::string> mode;
    int best = 0;
    for (const auto& [lang, votes] : lang_votes)
        if (votes > best) {
            best = votes;
            mode = lang;
        }

    // Median continuous character count.
    std::vector<double> counts;
    for (const auto& m : infos) counts.push_back(m.continuous);
    std::sort(counts.begin(), counts.end());
    double median = counts.size() % 2 == 1
                        ? counts[counts.size() / 2]
                        : 0.5 * (counts[counts.size() / 2 - 1] +
                                 counts[counts.size() / 2]);

    std::vector<MemberInfo> kept;
    for (const auto& m : infos) {
        if (mode && m.language && *m.language != *mode) {
            out.removed.push_back(m.barcode);
            continue;
        }
        if (!m.language)
            out.warnings.push_back(m.barcode +
                                   ": no language detection, language filter skipped");
        double base = infos.size() == 2
                          ? relative_diff(infos[0].continuous, infos[1].continuous)
                          : relative_diff(m.continuous, median);
        if (base >= config.continuous_char_diff_max) {
            out.removed.push_back(m.barcode);
            continue;
        }
        kept.push_back(m);
    }

    if (kept.size() < 2) {
        out.dissolved = true;
        for (const auto& m : kept) out.removed.push_back(m.barcode);
        return out;
    }
    for (const auto& m : kept) out.group.members.push_back(m.barcode);
    std::sort(out.group.members.begin(), out.group.members.end());
    out.group.representative = out.group.members.front();
    return out;
}

}  // namespace corpus
