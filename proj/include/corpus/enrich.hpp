#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corpus/linetype.hpp"
#include "corpus/volume.hpp"

namespace corpus {

// External item id: collection code "hvd" + "." + barcode.
std::string htid_for(const Barcode& barcode);

struct HttpResponse {
    int status = 0;
    std::string body;
};
// Returns nothing on a transport-level failure (connection refused etc).
using HttpTransport =
    std::function<std::optional<HttpResponse>(const std::string& url)>;

// Transport backed by a real HTTP client.
HttpTransport default_transport();

// GET {endpoint}/rights/{htid}; parses rights code, reason, and permalink.
// 404 means no record. Transient failures (5xx, transport errors) retry up
// to 3 attempts with exponential backoff. Throws on non-transient HTTP
// errors and malformed bodies.
std::optional<RightsInfo> fetch_rights(const std::string& htid,
                                       const std::string& endpoint,
                                       const HttpTransport& transport,
                                       const std::string& today_iso = {});

bool is_public_domain(const std::string& rights_code,
                      const PipelineConfig& config);

// The four rights buckets reported at collection level.
struct RightsSummary {
    int64_t public_domain_set = 0;  // configured public-domain codes
    int64_t unknown = 0;            // und
    int64_t known_copyright = 0;    // ic, icus
    int64_t other = 0;
    int64_t total() const {
        return public_domain_set + unknown + known_copyright + other;
    }
};
RightsSummary summarize_rights(const std::vector<std::string>& rights_codes,
                               const PipelineConfig& config);

// On-disk rights cache: JSON Lines keyed by htid, so reruns are
// offline-reproducible.
class RightsCache {
public:
    RightsCache() = default;
    static RightsCache load(const std::string& path);  // missing file = empty
    void save(const std::string& path) const;

    std::optional<RightsInfo> get(const std::string& htid) const;
    void put(const std::string& htid, const RightsInfo& info);
    size_t size() const { return entries_.size(); }

private:
    std::map<std::string, RightsInfo> entries_;
};

// First-level classification labels (20; the two identical history classes
// merge).
const std::vector<std::string>& lcc_labels();

// Case-insensitive exact match of subject terms against the bundled mapping
// table; first matching term wins. Normalization is case-fold plus
// trailing-punctuation strip.
std::optional<std::string> lcc_map(const std::vector<std::string>& subject_terms);

// The bundled source-term table; loading asserts every term maps to exactly
// one label.
const std::map<std::string, std::string>& lcc_source_table();

struct TopicTrainingRow {
    std::string input_text;
    std::string label;
};

struct TopicSplits {
    std::vector<TopicTrainingRow> train;
    std::vector<TopicTrainingRow> test;
    std::vector<TopicTrainingRow> benchmark;
};

// Formats the bibliographic input block for one record (Title/Author/Year/
// Language lines, absent fields omitted, general note appended when
// available).
std::string format_topic_input(const VolumeRecord& record);

// Splits a record's subject string into candidate terms.
std::vector<std::string> subject_terms(const std::string& subject);

// Keeps only records whose subjects map, formats them, and splits
// deterministically by seeded shuffle. Fractions must sum to 1. Throws when
// nothing is mappable.
TopicSplits build_topic_trainset(const std::vector<VolumeRecord>& records,
                                 double train_frac, double test_frac,
                                 double benchmark_frac, uint64_t seed);

// Baseline topic classifier: the generic hashed n-gram linear model trained
// on formatted bibliographic rows.
HashedTextClassifier train_topic_classifier(
    const std::vector<TopicTrainingRow>& rows);

// English display name for common ISO 639-3 codes; falls back to the code.
std::string language_display_name(const std::string& iso639_3);

}  // namespace corpus
