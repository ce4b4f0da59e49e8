#include "corpus/volume.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace corpus {

std::optional<Barcode> Barcode::make(std::string v) {
    if (v.empty()) return std::nullopt;
    for (char c : v)
        if (std::isspace(static_cast<unsigned char>(c))) return std::nullopt;
    return Barcode{std::move(v)};
}

std::vector<std::string> PipelineConfig::violations() const {
    std::vector<std::string> out;
    if (textless_token_floor < 0) out.push_back("textless_token_floor: must be >= 0");
    if (chunk_max_chars < 1) out.push_back("chunk_max_chars: must be >= 1");
    if (language_token_floor < 0) out.push_back("language_token_floor: must be >= 0");
    if (shingle_length < 1) out.push_back("shingle_length: must be >= 1");
    if (continuous_char_diff_max <= 0.0 || continuous_char_diff_max >= 1.0)
        out.push_back("continuous_char_diff_max: must be in (0,1)");
    if (tokenizability_target <= 0.0)
        out.push_back("tokenizability_target: must be > 0");
    if (worker_count < 1) out.push_back("worker_count: must be >= 1");
    return out;
}

std::vector<std::string> validate_record(const VolumeRecord& record) {
    std::vector<std::string> out;
    if (!Barcode::make(record.barcode))
        out.push_back("barcode: must be non-empty without whitespace");
    if (record.page_count < 0)
        out.push_back("page_count: must be non-negative");
    if (!record.pages_source.empty() &&
        record.page_count != static_cast<int64_t>(record.pages_source.size()))
        out.push_back("page_count: does not match number of source pages");
    if (record.ocr_score_source &&
        (*record.ocr_score_source < 0 || *record.ocr_score_source > 100))
        out.push_back("ocr_score_src: outside [0,100] range");
    if (record.ocr_score_generated &&
        (*record.ocr_score_generated < 0 || *record.ocr_score_generated > 100))
        out.push_back("ocr_score_gen: outside [0,100] range");
    if (record.pages_processed &&
        record.pages_processed->size() != record.pages_source.size())
        out.push_back("text_by_page_gen: does not align with source pages");
    for (const auto& dup : record.likely_duplicates)
        if (dup == record.barcode)
            out.push_back("likely_duplicates_barcode_gen: contains own barcode");
    return out;
}

namespace {

void put_opt(json& j, const char* key, const std::optional<std::string>& v) {
    if (v) j[key] = *v;
}

std::optional<std::string> get_opt_str(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<std::string>();
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

json analysis_to_json(const TextAnalysis& a) {
    json j;
    j["tokenizability_score"] = a.tokenizability_score;
    j["char_count"] = a.char_count;
    j["continuous_char_count"] = a.continuous_char_count;
    j["word_count"] = a.word_count;
    j["word_count_unique"] = a.word_count_unique;
    j["word_type_token_ratio"] = a.word_type_token_ratio;
    j["bigram_count"] = a.bigram_count;
    j["bigram_count_unique"] = a.bigram_count_unique;
    j["bigram_type_token_ratio"] = a.bigram_type_token_ratio;
    j["trigram_count"] = a.trigram_count;
    j["trigram_count_unique"] = a.trigram_count_unique;
    j["trigram_type_token_ratio"] = a.trigram_type_token_ratio;
    j["sentence_count"] = a.sentence_count;
    j["sentence_count_unique"] = a.sentence_count_unique;
    j["avg_sentence_length_chars"] = a.avg_sentence_length_chars;
    return j;
}

TextAnalysis analysis_from_json(const json& j) {
    TextAnalysis a;
    a.tokenizability_score = j.value("tokenizability_score", 0.0);
    a.char_count = j.value("char_count", int64_t{0});
    a.continuous_char_count = j.value("continuous_char_count", int64_t{0});
    a.word_count = j.value("word_count", int64_t{0});
    a.word_count_unique = j.value("word_count_unique", int64_t{0});
    a.word_type_token_ratio = j.value("word_type_token_ratio", 0.0);
    a.bigram_count = j.value("bigram_count", int64_t{0});
    a.bigram_count_unique = j.value("bigram_count_unique", int64_t{0});
    a.bigram_type_token_ratio = j.value("bigram_type_token_ratio", 0.0);
    a.trigram_count = j.value("trigram_count", int64_t{0});
    a.trigram_count_unique = j.value("trigram_count_unique", int64_t{0});
    a.trigram_type_token_ratio = j.value("trigram_type_token_ratio", 0.0);
    a.sentence_count = j.value("sentence_count", int64_t{0});
    a.sentence_count_unique = j.value("sentence_count_unique", int64_t{0});
    a.avg_sentence_length_chars = j.value("avg_sentence_length_chars", 0.0);
    return a;
}

json record_to_json(const VolumeRecord& r) {
    json j;
    j["barcode"] = r.barcode;
    put_opt(j, "title_src", r.title);
    put_opt(j, "author_src", r.author);
    put_opt(j, "date1_src", r.date1);
    put_opt(j, "date2_src", r.date2);
    put_opt(j, "date_types_src", r.date_types);
    j["page_count_src"] = r.page_count;
    put_opt(j, "language_src", r.language_declared);
    put_opt(j, "topic_or_subject_src", r.topic_or_subject);
    put_opt(j, "genre_or_form_src", r.genre_or_form);
    put_opt(j, "general_note_src", r.general_note);
    if (r.ocr_score_source) j["ocr_score_src"] = *r.ocr_score_source;
    if (!r.identifiers.empty()) j["identifiers_src"] = r.identifiers;
    j["text_by_page_src"] = r.pages_source;

    if (r.token_count) j["token_count_gen"] = *r.token_count;
    if (r.textless) j["textless_gen"] = *r.textless;
    put_opt(j, "language_gen", r.language_detected);
    if (r.language_distribution) {
        json d;
        d["languages"] = r.language_distribution->languages;
        d["proportion"] = r.language_distribution->proportions;
        d["token_totals"] = r.language_distribution->token_totals;
        j["language_distribution_gen"] = d;
    }
    put_opt(j, "topic_or_subject_gen", r.topic_detected);
    if (r.topic_score) j["topic_or_subject_score_gen"] = *r.topic_score;
    if (r.ocr_score_generated) j["ocr_score_gen"] = *r.ocr_score_generated;
    if (!r.likely_duplicates.empty())
        j["likely_duplicates_barcode_gen"] = r.likely_duplicates;
    if (r.simhash_bits) j["simhash_gen"] = hex64(*r.simhash_bits);
    if (r.analysis_source || r.analysis_processed) {
        json t;
        if (r.analysis_source)
            t["text_by_page_src"] = analysis_to_json(*r.analysis_source);
        if (r.analysis_processed)
            t["text_by_page_gen"] = analysis_to_json(*r.analysis_processed);
        j["text_analysis_gen"] = t;
    }
    if (r.pages_processed) j["text_by_page_gen"] = *r.pages_processed;
    if (r.rights) {
        json h;
        h["url"] = r.rights->url;
        h["rights_code"] = r.rights->rights_code;
        h["reason_code"] = r.rights->reason_code;
        h["last_check"] = r.rights->last_check;
        j["hathitrust_data_ext"] = h;
    }
    return j;
}

VolumeRecord record_from_json(const json& j) {
    VolumeRecord r;
    if (j.contains("barcode"))
        r.barcode = j.at("barcode").get<std::string>();
    else
        r.barcode = j.at("barcode_src").get<std::string>();
    r.title = get_opt_str(j, "title_src");
    r.author = get_opt_str(j, "author_src");
    r.date1 = get_opt_str(j, "date1_src");
    r.date2 = get_opt_str(j, "date2_src");
    r.date_types = get_opt_str(j, "date_types_src");
    r.language_declared = get_opt_str(j, "language_src");
    r.topic_or_subject = get_opt_str(j, "topic_or_subject_src");
    r.genre_or_form = get_opt_str(j, "genre_or_form_src");
    r.general_note = get_opt_str(j, "general_note_src");
    if (j.contains("ocr_score_src") && !j["ocr_score_src"].is_null())
        r.ocr_score_source = j["ocr_score_src"].get<int>();
    if (j.contains("identifiers_src"))
        r.identifiers = j["identifiers_src"]
                            .get<std::map<std::string, std::vector<std::string>>>();
    if (j.contains("text_by_page_src"))
        r.pages_source = j["text_by_page_src"].get<std::vector<std::string>>();
    if (j.contains("page_count_src"))
        r.page_count = j["page_count_src"].get<int64_t>();
    else
        r.page_count = static_cast<int64_t>(r.pages_source.size());

    if (j.contains("token_count_gen"))
        r.token_count = j["token_count_gen"].get<int64_t>();
    if (j.contains("textless_gen")) r.textless = j["textless_gen"].get<bool>();
    r.language_detected = get_opt_str(j, "language_gen");
    if (j.contains("language_distribution_gen")) {
        const auto& d = j["language_distribution_gen"];
        LanguageDistribution dist;
        dist.languages = d.value("languages", std::vector<std::string>{});
        dist.proportions = d.value("proportion", std::vector<double>{});
        dist.token_totals = d.value("token_totals", std::vector<int64_t>{});
        r.language_distribution = std::move(dist);
    }
    r.topic_detected = get_opt_str(j, "topic_or_subject_gen");
    if (j.contains("topic_or_subject_score_gen"))
        r.topic_score = j["topic_or_subject_score_gen"].get<double>();
    if (j.contains("ocr_score_gen") && !j["ocr_score_gen"].is_null())
        r.ocr_score_generated = j["ocr_score_gen"].get<int>();
    if (j.contains("likely_duplicates_barcode_gen"))
        r.likely_duplicates =
            j["likely_duplicates_barcode_gen"].get<std::vector<std::string>>();
    if (j.contains("simhash_gen"))
        r.simhash_bits =
            std::stoull(j["simhash_gen"].get<std::string>(), nullptr, 16);
    if (j.contains("text_analysis_gen")) {
        const auto& t = j["text_analysis_gen"];
        if (t.contains("text_by_page_src"))
            r.analysis_source = analysis_from_json(t["text_by_page_src"]);
        if (t.contains("text_by_page_gen"))
            r.analysis_processed = analysis_from_json(t["text_by_page_gen"]);
    }
    if (j.contains("text_by_page_gen"))
        r.pages_processed = j["text_by_page_gen"].get<std::vector<std::string>>();
    if (j.contains("hathitrust_data_ext")) {
        const auto& h = j["hathitrust_data_ext"];
        RightsInfo info;
        info.url = h.value("url", "");
        info.rights_code = h.value("rights_code", "");
        info.reason_code = h.value("reason_code", "");
        info.last_check = h.value("last_check", "");
        r.rights = std::move(info);
    }
    return r;
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    PipelineConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key == "textless_token_floor") cfg.textless_token_floor = std::stoll(val);
        else if (key == "chunk_max_chars") cfg.chunk_max_chars = std::stoll(val);
        else if (key == "language_token_floor") cfg.language_token_floor = std::stoll(val);
        else if (key == "shingle_length") cfg.shingle_length = std::stoi(val);
        else if (key == "continuous_char_diff_max") cfg.continuous_char_diff_max = std::stod(val);
        else if (key == "tokenizability_target") cfg.tokenizability_target = std::stod(val);
        else if (key == "worker_count") cfg.worker_count = std::stoi(val);
        else if (key == "ocr_letter_ratio_min") cfg.ocr_letter_ratio_min = std::stod(val);
        else if (key == "ocr_distance_max") cfg.ocr_distance_max = std::stod(val);
        else if (key == "ocr_chunk_max_chars") cfg.ocr_chunk_max_chars = std::stoll(val);
        else if (key == "dedup_hamming_radius") cfg.dedup_hamming_radius = std::stoi(val);
        else if (key == "carry_paragraphs") cfg.carry_paragraphs = (val == "true" || val == "1");
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "public_domain_codes") {
            cfg.public_domain_codes.clear();
            std::stringstream ss(val);
            std::string code;
            while (std::getline(ss, code, ',')) {
                code = trim(code);
                if (!code.empty()) cfg.public_domain_codes.insert(code);
            }
        } else {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unknown key '" + key + "'");
        }
    }
    auto bad = cfg.violations();
    if (!bad.empty())
        throw std::runtime_error("invalid config: " + bad.front());
    return cfg;
}

void save_config(const PipelineConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file: " + path);
    out << "textless_token_floor = " << cfg.textless_token_floor << "\n"
        << "chunk_max_chars = " << cfg.chunk_max_chars << "\n"
        << "language_token_floor = " << cfg.language_token_floor << "\n"
        << "shingle_length = " << cfg.shingle_length << "\n"
        << "continuous_char_diff_max = " << cfg.continuous_char_diff_max << "\n"
        << "tokenizability_target = " << cfg.tokenizability_target << "\n"
        << "worker_count = " << cfg.worker_count << "\n"
        << "ocr_letter_ratio_min = " << cfg.ocr_letter_ratio_min << "\n"
        << "ocr_distance_max = " << cfg.ocr_distance_max << "\n"
        << "ocr_chunk_max_chars = " << cfg.ocr_chunk_max_chars << "\n"
        << "dedup_hamming_radius = " << cfg.dedup_hamming_radius << "\n"
        << "carry_paragraphs = " << (cfg.carry_paragraphs ? "true" : "false") << "\n"
        << "seed = " << cfg.seed << "\n";
    out << "public_domain_codes = ";
    bool first = true;
    for (const auto& c : cfg.public_domain_codes) {
        if (!first) out << ", ";
        out << c;
        first = false;
    }
    out << "\n";
}

}  // namespace corpus
