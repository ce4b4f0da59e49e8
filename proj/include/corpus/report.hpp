#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corpus/enrich.hpp"
#include "corpus/ingest.hpp"
#include "corpus/langdetect.hpp"
#include "corpus/linetype.hpp"
#include "corpus/tokenizer.hpp"
#include "corpus/volume.hpp"

namespace corpus {

struct ScoreStats {
    int64_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

// Collection-level aggregates, recomputed from the enriched records.
struct CorpusReport {
    int64_t volumes = 0;
    int64_t pages = 0;
    int64_t tokens = 0;
    int64_t textless_count = 0;
    int64_t dated_count = 0;
    std::map<int, int64_t> decade_histogram;
    std::map<int, int64_t> century_histogram;
    std::map<std::string, int64_t> declared_language_volumes;
    std::map<std::string, int64_t> detected_language_volumes;
    std::map<std::string, int64_t> language_token_totals;
    std::map<std::string, int64_t> topic_volumes;
    int64_t dedup_groups = 0;
    int64_t dedup_members = 0;
    int64_t unique_text_volumes = 0;
    ScoreStats ocr_source_scores;
    ScoreStats ocr_generated_scores;
    // decade -> (ocr_src mean accumulator, ocr_gen mean accumulator)
    std::map<int, std::pair<ScoreStats, ScoreStats>> scores_by_decade;
    RightsSummary rights;
    int64_t rights_queried = 0;
    int64_t ingest_errors = 0;

    json to_json() const;
};

// External resources the stages need. Empty paths disable the stages that
// would require them.
struct PipelineResources {
    std::string vocab_path;        // tokenizer vocabulary
    std::string profiles_dir;      // trigram profiles
    std::string linetype_model;    // trained line-type model
    std::string rights_endpoint;   // base URL; empty = cache only
    std::string rights_cache;      // cache file path
};

// Known stage names, in dependency order.
const std::vector<std::string>& pipeline_stage_names();

// Throws when a requested stage's dependency is not in the set (e.g. dedup
// without langdetect) or a required resource is missing.
void validate_stages(const std::set<std::string>& stages,
                     const PipelineResources& resources);

struct PipelineResult {
    CorpusReport report;
    std::vector<LineError> errors;
};

// Runs the requested stages over a JSON Lines input and writes the enriched
// records, sorted by barcode, to output_path. Deterministic for a fixed
// input, config, and seed, regardless of worker count.
PipelineResult run_pipeline(const std::string& input_path,
                            const std::string& output_path,
                            const PipelineConfig& config,
                            const std::set<std::string>& stages,
                            const PipelineResources& resources);

// Writes CSV tables, a JSON dump, and static SVG charts to out_dir.
// Returns the emitted file paths.
std::vector<std::string> emit_report(const CorpusReport& report,
                                     const std::string& out_dir,
                                     const std::set<std::string>& formats);

}  // namespace corpus
