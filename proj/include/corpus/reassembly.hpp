#pragma once

#include <map>
#include <string>
#include <vector>

#include "corpus/linetype.hpp"
#include "corpus/volume.hpp"

namespace corpus {

// How one OCR line was rendered. DROP only ever applies to page numbers,
// running heads, and separators; the dropped text stays in the decision so
// the step is auditable.
struct ReassemblyDecision {
    int page_index = 0;
    int line_index = 0;
    enum class Action {
        JOIN_PREVIOUS,
        NEW_PARAGRAPH,
        HEADING_BLOCK,
        DROP,
        KEEP_VERBATIM,
        BLANK_LINE,
    } action = Action::KEEP_VERBATIM;
    std::string reason;
    std::string text;  // original line text
};

const std::string& reassembly_action_name(ReassemblyDecision::Action a);

// Paragraph state carried across page boundaries.
struct ParagraphCarry {
    bool open = false;
    std::string text;
};

struct PageResult {
    std::string page_text;
    std::vector<ReassemblyDecision> decisions;
};

// Applies the rendering rules to one page of lines. Throws when lines and
// predictions are misaligned.
PageResult postprocess_page(const std::vector<PositionalLine>& lines,
                            const std::vector<LineTypePrediction>& predictions,
                            ParagraphCarry& carry, bool carry_enabled);

struct ReassemblyStats {
    std::map<std::string, int64_t> decisions_by_action;
    std::map<std::string, int64_t> lines_by_type;
    int64_t dropped_chars = 0;  // continuous characters removed by DROPs
    int64_t total_lines = 0;
};

struct VolumePostprocessResult {
    enum class Status { processed, skipped_language, no_pages } status =
        Status::processed;
    std::vector<std::string> pages_processed;  // aligned 1:1 with source pages
    std::vector<ReassemblyDecision> decisions;
    ReassemblyStats stats;
};

bool postprocess_language_supported(const std::string& iso639_3);

// Runs line typing plus reassembly over a whole volume. Volumes whose main
// language is outside {eng, deu, fra, ita, spa} are skipped unless force is
// set.
VolumePostprocessResult postprocess_volume(const VolumeRecord& record,
                                           const LineTypeModel& model,
                                           const PipelineConfig& config,
                                           bool force = false);

// Splits page text into PositionalLines for prediction.
std::vector<PositionalLine> page_lines(const std::string& page_text,
                                       int page_index, int total_pages);

}  // namespace corpus
