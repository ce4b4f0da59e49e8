#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace corpus {

enum class LineType {
    PARAGRAPH_CHUNK,
    LOOSE_SENTENCE_OR_LIST_ITEM,
    NOISE_OR_BROKEN_TEXT,
    HEADING_OR_TITLE,
    PAGE_NUMBER,
    SEPARATOR,
    PARAGRAPH_END,
    RUNNING_HEAD,
    UNKNOWN,
};
inline constexpr size_t kLineTypeCount = 9;

const std::string& line_type_name(LineType t);
std::optional<LineType> line_type_from_name(std::string_view name);

// One OCR line with its position within page and volume (1-based).
struct PositionalLine {
    std::string text;
    int page_index = 1;
    int total_pages = 1;
    int line_index = 1;
    int total_lines_on_page = 1;

    bool operator==(const PositionalLine&) const = default;
};

// Canonical positional prefix: `<<P/PT|L/LT>> TEXT`.
std::string format_positional(const PositionalLine& line);
std::optional<PositionalLine> parse_positional(std::string_view formatted);

struct LineTypePrediction {
    LineType line_type = LineType::UNKNOWN;
    double confidence = 0.0;
    std::vector<double> class_probabilities;  // aligned with model classes
};

inline constexpr uint64_t kFeatureHashSeed = 0xfea70001ULL;
inline constexpr uint32_t kFeatureHashDim = 1u << 18;

// Multinomial linear classifier over hashed character n-grams (n in 1..3)
// plus a small block of scalar features. Training is single-threaded and
// deterministic under a pinned shuffle seed.
class HashedTextClassifier {
public:
    struct Example {
        std::string text;
        std::vector<double> scalars;
        std::string label;
    };

    static HashedTextClassifier train(const std::vector<Example>& examples,
                                      size_t scalar_count, int epochs = 8,
                                      uint64_t shuffle_seed = 7);

    struct Prediction {
        std::string label;
        double confidence = 0.0;
        std::vector<double> probabilities;
    };
    Prediction predict(std::string_view text,
                       const std::vector<double>& scalars) const;

    const std::vector<std::string>& classes() const { return classes_; }

    void save(const std::string& path) const;
    static HashedTextClassifier load(const std::string& path);

private:
    std::vector<std::string> classes_;
    size_t scalar_count_ = 0;
    double temperature_ = 1.0;  // confidence calibration
    std::vector<float> weights_;  // classes x (hash_dim + scalars + bias)

    size_t row_len() const { return kFeatureHashDim + scalar_count_ + 1; }
    std::vector<std::pair<uint32_t, float>> featurize(
        std::string_view text, const std::vector<double>& scalars) const;
};

// Line-type model: the generic classifier applied to the canonical formatted
// string, with positional/lexical scalar features.
class LineTypeModel {
public:
    static LineTypeModel train(
        const std::vector<std::pair<PositionalLine, LineType>>& labeled);

    LineTypePrediction predict(const PositionalLine& line) const;

    void save(const std::string& path) const;
    static LineTypeModel load(const std::string& path);

    const std::vector<std::string>& classes() const {
        return classifier_.classes();
    }

private:
    HashedTextClassifier classifier_;
};

// Labeled data TSV: page_index, total_pages, line_index, total_lines, label,
// text.
std::vector<std::pair<PositionalLine, LineType>> load_labeled_lines(
    const std::string& path);
void save_labeled_lines(
    const std::vector<std::pair<PositionalLine, LineType>>& rows,
    const std::string& path);

}  // namespace corpus
