#include "corpus/reassembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "corpus/dedup.hpp"
#include "corpus/util.hpp"

namespace corpus {

const std::string& reassembly_action_name(ReassemblyDecision::Action a) {
    static const std::array<std::string, 6> names = {
        "JOIN_PREVIOUS", "NEW_PARAGRAPH", "HEADING_BLOCK",
        "DROP",          "KEEP_VERBATIM", "BLANK_LINE"};
    return names[static_cast<size_t>(a)];
}

namespace {

bool starts_lowercase(const std::string& s) {
    size_t i = 0;
    while (i < s.size()) {
        char32_t cp = utf8_next(s, i);
        if (is_space_cp(cp)) continue;
        return is_letter_cp(cp) && to_lower_cp(cp) == cp;
    }
    return false;
}

std::string trimmed(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Joins a line into an open paragraph, healing a line-final hyphen when the
// continuation starts lowercase.
void join_paragraph(std::string& paragraph, const std::string& line) {
    std::string t = trimmed(line);
    if (t.empty()) return;
    if (paragraph.empty()) {
        paragraph = t;
        return;
    }
    if (paragraph.back() == '-') {
        if (starts_lowercase(t))
            paragraph.pop_back();  // dehyphenate
        paragraph += t;            // keep hyphenated compounds intact
        return;
    }
    paragraph += ' ';
    paragraph += t;
}

class PageBuilder {
public:
    void push_block(std::string block) {
        if (block.empty()) {
            if (!blocks_.empty() && !blocks_.back().empty())
                blocks_.push_back("");
        } else {
            blocks_.push_back(std::move(block));
        }
    }

    std::string render() const {
        // Blocks separated by newlines; explicit blank blocks become empty
        // lines. Leading/trailing blanks are dropped at push time.
        std::string out;
        size_t last = blocks_.size();
        while (last > 0 && blocks_[last - 1].empty()) --last;
        for (size_t i = 0; i < last; ++i) {
            if (i) out += '\n';
            out += blocks_[i];
        }
        return out;
    }

private:
    std::vector<std::string> blocks_;
};

}  // namespace

PageResult postprocess_page(const std::vector<PositionalLine>& lines,
                            const std::vector<LineTypePrediction>& predictions,
                            ParagraphCarry& carry, bool carry_enabled) {
    if (lines.size() != predictions.size())
        throw std::invalid_argument(
            "postprocess_page: lines and predictions are misaligned");

    PageResult result;
    PageBuilder page;
    const int n = static_cast<int>(lines.size());
    const int edge = std::max(1, static_cast<int>(std::ceil(0.2 * n)));

    auto flush_paragraph = [&] {
        if (carry.open && !carry.text.empty()) page.push_block(carry.text);
        carry.open = false;
        carry.text.clear();
    };

    auto decide = [&](const PositionalLine& line,
                      ReassemblyDecision::Action action, std::string reason) {
        result.decisions.push_back({line.page_index, line.line_index, action,
                                    std::move(reason), line.text});
    };

    std::string heading_block;
    auto flush_heading = [&] {
        if (!heading_block.empty()) {
            page.push_block("");
            page.push_block(heading_block);
            page.push_block("");
            heading_block.clear();
        }
    };

    for (int i = 0; i < n; ++i) {
        const PositionalLine& line = lines[static_cast<size_t>(i)];
        LineType type = predictions[static_cast<size_t>(i)].line_type;
        const int pos = i + 1;  // 1-based

        // Positional gates demote implausible furniture back to prose.
        if (type == LineType::PAGE_NUMBER) {
            bool at_edge = pos <= edge || pos > n - edge;
            if (at_edge) {
                flush_heading();
                decide(line, ReassemblyDecision::Action::DROP, "page_number");
                continue;
            }
            type = LineType::PARAGRAPH_CHUNK;
        } else if (type == LineType::RUNNING_HEAD) {
            if (pos <= 2) {
                flush_heading();
                decide(line, ReassemblyDecision::Action::DROP, "running_head");
                continue;
            }
            type = LineType::PARAGRAPH_CHUNK;
        }

        if (type != LineType::HEADING_OR_TITLE) flush_heading();

        switch (type) {
            case LineType::SEPARATOR:
                flush_paragraph();
                page.push_block("");
                decide(line, ReassemblyDecision::Action::BLANK_LINE, "separator");
                break;
            case LineType::HEADING_OR_TITLE: {
                flush_paragraph();
                std::string t = trimmed(line.text);
                if (!t.empty()) {
                    if (!heading_block.empty()) heading_block += '\n';
                    heading_block += t;
                }
                decide(line, ReassemblyDecision::Action::HEADING_BLOCK,
                       "heading");
                break;
            }
            case LineType::PARAGRAPH_CHUNK: {
                bool was_open = carry.open;
                join_paragraph(carry.text, line.text);
                carry.open = true;
                decide(line,
                       was_open ? ReassemblyDecision::Action::JOIN_PREVIOUS
                                : ReassemblyDecision::Action::NEW_PARAGRAPH,
                       "paragraph_chunk");
                break;
            }
            case LineType::PARAGRAPH_END: {
                bool was_open = carry.open;
                join_paragraph(carry.text, line.text);
                carry.open = true;
                flush_paragraph();
                decide(line,
                       was_open ? ReassemblyDecision::Action::JOIN_PREVIOUS
                                : ReassemblyDecision::Action::NEW_PARAGRAPH,
                       "paragraph_end");
                break;
            }
            case LineType::LOOSE_SENTENCE_OR_LIST_ITEM: {
                flush_paragraph();
                std::string t = trimmed(line.text);
                if (!t.empty()) page.push_block(t);
                decide(line, ReassemblyDecision::Action::KEEP_VERBATIM,
                       "loose_sentence");
                break;
            }
            case LineType::NOISE_OR_BROKEN_TEXT:
            case LineType::UNKNOWN:
            default: {
                flush_paragraph();
                std::string t = trimmed(line.text);
                if (!t.empty()) page.push_block(t);
                decide(line, ReassemblyDecision::Action::KEEP_VERBATIM,
                       type == LineType::UNKNOWN ? "unknown" : "noise");
                break;
            }
        }
    }
    flush_heading();
    if (!carry_enabled) flush_paragraph();

    result.page_text = page.render();
    return result;
}

std::vector<PositionalLine> page_lines(const std::string& page_text,
                                       int page_index, int total_pages) {
    std::vector<std::string> raw;
    std::string cur;
    for (char c : page_text) {
        if (c == '\n') {
            raw.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    raw.push_back(cur);
    // Drop trailing empty line from a final newline.
    if (raw.size() > 1 && raw.back().empty()) raw.pop_back();

    std::vector<PositionalLine> out;
    const int total = static_cast<int>(raw.size());
    for (int i = 0; i < total; ++i)
        out.push_back(
            {raw[static_cast<size_t>(i)], page_index, total_pages, i + 1, total});
    return out;
}

bool postprocess_language_supported(const std::string& iso639_3) {
    return iso639_3 == "eng" || iso639_3 == "deu" || iso639_3 == "fra" ||
           iso639_3 == "ita" || iso639_3 == "spa";
}

VolumePostprocessResult postprocess_volume(const VolumeRecord& record,
                                           const LineTypeModel& model,
                                           const PipelineConfig& config,
                                           bool force) {
    VolumePostprocessResult result;
    if (record.pages_source.empty()) {
        result.status = VolumePostprocessResult::Status::no_pages;
        return result;
    }
    std::string lang = record.language_detected.value_or(
        record.language_declared.value_or(""));
    if (!force && !postprocess_language_supported(lang)) {
        result.status = VolumePostprocessResult::Status::skipped_language;
        return result;
    }

    const int total_pages = static_cast<int>(record.pages_source.size());
    ParagraphCarry carry;
    for (int p = 0; p < total_pages; ++p) {
        auto lines = page_lines(record.pages_source[static_cast<size_t>(p)],
                                p + 1, total_pages);
        std::vector<LineTypePrediction> preds;
        preds.reserve(lines.size());
        for (const auto& line : lines) {
            auto pred = model.predict(line);
            result.stats.lines_by_type[line_type_name(pred.line_type)] += 1;
            preds.push_back(std::move(pred));
        }
        bool last_page = p + 1 == total_pages;
        PageResult page = postprocess_page(lines, preds, carry,
                                           config.carry_paragraphs && !last_page);
        if (last_page && carry.open) {
            if (!carry.text.empty()) {
                if (!page.page_text.empty()) page.page_text += '\n';
                page.page_text += carry.text;
            }
            carry = {};
        }
        result.pages_processed.push_back(std::move(page.page_text));
        for (auto& d : page.decisions) {
            result.stats.decisions_by_action[reassembly_action_name(d.action)] +=
                1;
            if (d.action == ReassemblyDecision::Action::DROP)
                result.stats.dropped_chars += continuous_char_count(d.text);
            result.stats.total_lines += 1;
            result.decisions.push_back(std::move(d));
        }
    }
    return result;
}

}  // namespace corpus
