#include "corpus/linetype.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "corpus/util.hpp"

namespace corpus {

namespace {

const std::array<std::string, kLineTypeCount>& type_names() {
    static const std::array<std::string, kLineTypeCount> names = {
        "PARAGRAPH_CHUNK",
        "LOOSE_SENTENCE_OR_LIST_ITEM",
        "NOISE_OR_BROKEN_TEXT",
        "HEADING_OR_TITLE",
        "PAGE_NUMBER",
        "SEPARATOR",
        "PARAGRAPH_END",
        "RUNNING_HEAD",
        "UNKNOWN",
    };
    return names;
}

}  // namespace

const std::string& line_type_name(LineType t) {
    return type_names()[static_cast<size_t>(t)];
}

std::optional<LineType> line_type_from_name(std::string_view name) {
    for (size_t i = 0; i < kLineTypeCount; ++i)
        if (type_names()[i] == name) return static_cast<LineType>(i);
    return std::nullopt;
}

std::string format_positional(const PositionalLine& line) {
    std::ostringstream out;
    out << "<<" << line.page_index << "/" << line.total_pages << "|"
        << line.line_index << "/" << line.total_lines_on_page << ">> "
        << line.text;
    return out.str();
}

std::optional<PositionalLine> parse_positional(std::string_view s) {
    if (s.rfind("<<", 0) != 0) return std::nullopt;
    size_t close = s.find(">> ");
    if (close == std::string_view::npos) return std::nullopt;
    std::string header(s.substr(2, close - 2));
    PositionalLine line;
    char bar = 0, s1 = 0, s2 = 0;
    std::istringstream in(header);
    if (!(in >> line.page_index >> s1 >> line.total_pages >> bar >>
          line.line_index >> s2 >> line.total_lines_on_page) ||
        s1 != '/' || s2 != '/' || bar != '|')
        return std::nullopt;
    if (line.page_index < 1 || line.page_index > line.total_pages ||
        line.line_index < 1 || line.line_index > line.total_lines_on_page)
        return std::nullopt;
    line.text = std::string(s.substr(close + 3));
    return line;
}

std::vector<std::pair<uint32_t, float>> HashedTextClassifier::featurize(
    std::string_view text, const std::vector<double>& scalars) const {
    std::vector<std::pair<uint32_t, float>> feats;
    for (size_t n = 1; n <= 3; ++n) {
        if (text.size() < n) break;
        for (size_t i = 0; i + n <= text.size(); ++i) {
            uint64_t h = fnv1a64(text.substr(i, n), kFeatureHashSeed + n);
            feats.emplace_back(static_cast<uint32_t>(h % kFeatureHashDim), 1.0f);
        }
    }
    // Scale n-gram mass so long lines do not drown the scalar block.
    if (!feats.empty()) {
        float norm = 1.0f / std::sqrt(static_cast<float>(feats.size()));
        for (auto& [idx, v] : feats) v = norm;
    }
    for (size_t i = 0; i < scalar_count_; ++i)
        feats.emplace_back(static_cast<uint32_t>(kFeatureHashDim + i),
                           i < scalars.size()
                               ? static_cast<float>(scalars[i])
                               : 0.0f);
    feats.emplace_back(static_cast<uint32_t>(kFeatureHashDim + scalar_count_),
                       1.0f);  // bias
    return feats;
}

HashedTextClassifier HashedTextClassifier::train(
    const std::vector<Example>& examples, size_t scalar_count, int epochs,
    uint64_t shuffle_seed) {
    if (examples.size() < 100)
        throw std::invalid_argument(
            "train: need at least 100 labeled examples, got " +
            std::to_string(examples.size()));
    std::set<std::string> class_set;
    for (const auto& e : examples) class_set.insert(e.label);
    if (class_set.size() < 2)
        throw std::invalid_argument("train: need at least 2 classes");

    HashedTextClassifier model;
    model.classes_.assign(class_set.begin(), class_set.end());
    model.scalar_count_ = scalar_count;
    const size_t C = model.classes_.size();
    const size_t D = model.row_len();
    model.weights_.assign(C * D, 0.0f);

    std::map<std::string, size_t> class_index;
    for (size_t i = 0; i < C; ++i) class_index[model.classes_[i]] = i;

    std::vector<size_t> order(examples.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(shuffle_seed);

    std::vector<double> scores(C);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double lr = 0.5 / (1.0 + epoch);
        for (size_t idx : order) {
            const Example& ex = examples[idx];
            auto feats = model.featurize(ex.text, ex.scalars);
            for (size_t c = 0; c < C; ++c) {
                double s = 0.0;
                for (const auto& [fi, fv] : feats)
                    s += static_cast<double>(model.weights_[c * D + fi]) * fv;
                scores[c] = s;
            }
            double mx = *std::max_element(scores.begin(), scores.end());
            double z = 0.0;
            for (size_t c = 0; c < C; ++c) {
                scores[c] = std::exp(scores[c] - mx);
                z += scores[c];
            }
            size_t target = class_index[ex.label];
            for (size_t c = 0; c < C; ++c) {
                double grad = scores[c] / z - (c == target ? 1.0 : 0.0);
                if (grad == 0.0) continue;
                double step = lr * grad;
                for (const auto& [fi, fv] : feats)
                    model.weights_[c * D + fi] -=
                        static_cast<float>(step * fv);
            }
        }
    }
    return model;
}

HashedTextClassifier::Prediction HashedTextClassifier::predict(
    std::string_view text, const std::vector<double>& scalars) const {
    const size_t C = classes_.size();
    const size_t D = row_len();
    auto feats = featurize(text, scalars);
    std::vector<double> scores(C);
    for (size_t c = 0; c < C; ++c) {
        double s = 0.0;
        for (const auto& [fi, fv] : feats)
            s += static_cast<double>(weights_[c * D + fi]) * fv;
        scores[c] = s / temperature_;
    }
    double mx = *std::max_element(scores.begin(), scores.end());
    double z = 0.0;
    for (double& s : scores) {
        s = std::exp(s - mx);
        z += s;
    }
    Prediction out;
    out.probabilities.resize(C);
    size_t best = 0;
    for (size_t c = 0; c < C; ++c) {
        out.probabilities[c] = scores[c] / z;
        if (out.probabilities[c] > out.probabilities[best]) best = c;
    }
    out.label = classes_[best];
    out.confidence = out.probabilities[best];
    return out;
}

namespace {

constexpr char kModelMagic[8] = {'C', 'L', 'S', 'M', 'D', 'L', '0', '1'};

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("truncated model file");
}

}  // namespace

void HashedTextClassifier::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out.write(kModelMagic, sizeof(kModelMagic));
    write_pod(out, kFeatureHashSeed);
    write_pod(out, kFeatureHashDim);
    uint32_t c = static_cast<uint32_t>(classes_.size());
    write_pod(out, c);
    uint32_t sc = static_cast<uint32_t>(scalar_count_);
    write_pod(out, sc);
    write_pod(out, temperature_);
    for (const auto& name : classes_) {
        uint32_t len = static_cast<uint32_t>(name.size());
        write_pod(out, len);
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
    }
    out.write(reinterpret_cast<const char*>(weights_.data()),
              static_cast<std::streamsize>(weights_.size() * sizeof(float)));
}

HashedTextClassifier HashedTextClassifier::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kModelMagic, sizeof(magic)) != 0)
        throw std::runtime_error(path + ": not a classifier model file");
    uint64_t seed;
    uint32_t dim, c, sc;
    read_pod(in, seed);
    read_pod(in, dim);
    if (seed != kFeatureHashSeed || dim != kFeatureHashDim)
        throw std::runtime_error(path + ": incompatible feature space");
    read_pod(in, c);
    read_pod(in, sc);
    HashedTextClassifier model;
    model.scalar_count_ = sc;
    read_pod(in, model.temperature_);
    for (uint32_t i = 0; i < c; ++i) {
        uint32_t len;
        read_pod(in, len);
        std::string name(len, '\0');
        in.read(name.data(), len);
        if (!in) throw std::runtime_error("truncated model file");
        model.classes_.push_back(std::move(name));
    }
    model.weights_.resize(c * model.row_len());
    in.read(reinterpret_cast<char*>(model.weights_.data()),
            static_cast<std::streamsize>(model.weights_.size() * sizeof(float)));
    if (!in) throw std::runtime_error("truncated model file");
    return model;
}

namespace {

std::vector<double> line_scalars(const PositionalLine& line) {
    double page_rel = line.total_pages > 1
                          ? static_cast<double>(line.page_index - 1) /
                                static_cast<double>(line.total_pages - 1)
                          : 0.0;
    double line_rel = line.total_lines_on_page > 1
                          ? static_cast<double>(line.line_index - 1) /
                                static_cast<double>(line.total_lines_on_page - 1)
                          : 0.0;
    size_t letters = 0, uppers = 0, digits = 0, total = 0;
    size_t i = 0;
    while (i < line.text.size()) {
        char32_t cp = utf8_next(line.text, i);
        if (is_space_cp(cp)) continue;
        ++total;
        if (is_digit_cp(cp)) ++digits;
        if (is_letter_cp(cp)) {
            ++letters;
            if (to_lower_cp(cp) != cp) ++uppers;
        }
    }
    double len_norm = std::min(1.0, static_cast<double>(total) / 80.0);
    double digit_ratio =
        total ? static_cast<double>(digits) / static_cast<double>(total) : 0.0;
    double upper_ratio =
        letters ? static_cast<double>(uppers) / static_cast<double>(letters)
                : 0.0;
    return {page_rel, line_rel, len_norm, digit_ratio, upper_ratio};
}

}  // namespace

LineTypeModel LineTypeModel::train(
    const std::vector<std::pair<PositionalLine, LineType>>& labeled) {
    std::vector<HashedTextClassifier::Example> examples;
    examples.reserve(labeled.size());
    for (const auto& [line, type] : labeled)
        examples.push_back({format_positional(line), line_scalars(line),
                            line_type_name(type)});
    LineTypeModel model;
    model.classifier_ = HashedTextClassifier::train(examples, 5);
    return model;
}

LineTypePrediction LineTypeModel::predict(const PositionalLine& line) const {
    auto p = classifier_.predict(format_positional(line), line_scalars(line));
    LineTypePrediction out;
    out.line_type = *line_type_from_name(p.label);
    out.confidence = p.confidence;
    out.class_probabilities = std::move(p.probabilities);
    return out;
}

void LineTypeModel::save(const std::string& path) const {
    classifier_.save(path);
}

LineTypeModel LineTypeModel::load(const std::string& path) {
    LineTypeModel model;
    model.classifier_ = HashedTextClassifier::load(path);
    for (const auto& name : model.classifier_.classes())
        if (!line_type_from_name(name))
            throw std::runtime_error(path + ": unknown line type class " + name);
    return model;
}

std::vector<std::pair<PositionalLine, LineType>> load_labeled_lines(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open labeled lines: " + path);
    std::vector<std::pair<PositionalLine, LineType>> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        size_t start = 0;
        for (int i = 0; i < 5; ++i) {
            size_t tab = line.find('\t', start);
            if (tab == std::string::npos)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": expected 6 tab-separated columns");
            cols.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        cols.push_back(line.substr(start));
        PositionalLine pl;
        pl.page_index = std::stoi(cols[0]);
        pl.total_pages = std::stoi(cols[1]);
        pl.line_index = std::stoi(cols[2]);
        pl.total_lines_on_page = std::stoi(cols[3]);
        auto type = line_type_from_name(cols[4]);
        if (!type)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unknown line type " + cols[4]);
        pl.text = cols[5];
        out.emplace_back(std::move(pl), *type);
    }
    return out;
}

void save_labeled_lines(
    const std::vector<std::pair<PositionalLine, LineType>>& rows,
    const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write labeled lines: " + path);
    for (const auto& [line, type] : rows)
        out << line.page_index << "\t" << line.total_pages << "\t"
            << line.line_index << "\t" << line.total_lines_on_page << "\t"
            << line_type_name(type) << "\t" << line.text << "\n";
}

}  // namespace corpus
