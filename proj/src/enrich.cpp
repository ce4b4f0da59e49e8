#include "corpus/enrich.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <httplib.h>

#include "corpus/ingest.hpp"
#include "corpus/util.hpp"

namespace corpus {

std::string htid_for(const Barcode& barcode) {
    return "hvd." + barcode.value;
}

HttpTransport default_transport() {
    return [](const std::string& url) -> std::optional<HttpResponse> {
        // Split scheme://host[:port]/path
        size_t scheme_end = url.find("://");
        if (scheme_end == std::string::npos) return std::nullopt;
        size_t host_start = scheme_end + 3;
        size_t path_start = url.find('/', host_start);
        std::string host_port = path_start == std::string::npos
                                    ? url.substr(host_start)
                                    : url.substr(host_start, path_start - host_start);
        std::string path =
            path_start == std::string::npos ? "/" : url.substr(path_start);
        httplib::Client client(url.substr(0, scheme_end) + "://" + host_port);
        client.set_connection_timeout(5);
        client.set_read_timeout(10);
        auto res = client.Get(path);
        if (!res) return std::nullopt;
        return HttpResponse{res->status, res->body};
    };
}

namespace {

std::string today_utc() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[16];
    std::strftime(buf, sizeof(buf), "%Y-%m-%d", &tm);
    return buf;
}

}  // namespace

std::optional<RightsInfo> fetch_rights(const std::string& htid,
                                       const std::string& endpoint,
                                       const HttpTransport& transport,
                                       const std::string& today_iso) {
    const std::string url = endpoint + "/rights/" + htid;
    const int max_attempts = 3;
    std::optional<HttpResponse> res;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(100 << (attempt - 1)));
        res = transport(url);
        if (res && res->status < 500) break;
    }
    if (!res || res->status >= 500)
        throw std::runtime_error("rights lookup failed after " +
                                 std::to_string(max_attempts) + " attempts: " +
                                 url);
    if (res->status == 404) return std::nullopt;
    if (res->status != 200)
        throw std::runtime_error("rights lookup: HTTP " +
                                 std::to_string(res->status) + " for " + url);
    json j = json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("rights_code"))
        throw std::runtime_error("rights lookup: malformed response for " + url);
    RightsInfo info;
    info.rights_code = j["rights_code"].get<std::string>();
    info.reason_code = j.value("reason_code", "");
    info.url = j.value("url", "https://hdl.handle.net/2027/" + htid);
    info.last_check = today_iso.empty() ? today_utc() : today_iso;
    if (info.rights_code.empty())
        throw std::runtime_error("rights lookup: empty rights code for " + url);
    return info;
}

bool is_public_domain(const std::string& rights_code,
                      const PipelineConfig& config) {
    return config.public_domain_codes.count(to_lower_ascii(rights_code)) > 0;
}

RightsSummary summarize_rights(const std::vector<std::string>& rights_codes,
                               const PipelineConfig& config) {
    RightsSummary out;
    for (const auto& raw : rights_codes) {
        std::string code = to_lower_ascii(raw);
        if (is_public_domain(code, config))
            ++out.public_domain_set;
        else if (code == "und")
            ++out.unknown;
        else if (code == "ic" || code == "icus")
            ++out.known_copyright;
        else
            ++out.other;
    }
    return out;
}

RightsCache RightsCache::load(const std::string& path) {
    RightsCache cache;
    std::ifstream in(path);
    if (!in) return cache;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) continue;
        RightsInfo info;
        info.url = j.value("url", "");
        info.rights_code = j.value("rights_code", "");
        info.reason_code = j.value("reason_code", "");
        info.last_check = j.value("last_check", "");
        cache.entries_[j.value("htid", "")] = std::move(info);
    }
    cache.entries_.erase("");
    return cache;
}

void RightsCache::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write rights cache: " + path);
    for (const auto& [htid, info] : entries_) {
        json j;
        j["htid"] = htid;
        j["url"] = info.url;
        j["rights_code"] = info.rights_code;
        j["reason_code"] = info.reason_code;
        j["last_check"] = info.last_check;
        out << j.dump() << "\n";
    }
}

std::optional<RightsInfo> RightsCache::get(const std::string& htid) const {
    auto it = entries_.find(htid);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void RightsCache::put(const std::string& htid, const RightsInfo& info) {
    entries_[htid] = info;
}

const std::vector<std::string>& lcc_labels() {
    static const std::vector<std::string> labels = {
        "GENERAL WORKS",
        "PHILOSOPHY. PSYCHOLOGY. RELIGION",
        "AUXILIARY SCIENCES OF HISTORY",
        "WORLD HISTORY AND HISTORY OF EUROPE, ASIA, AFRICA, AUSTRALIA, NEW "
        "ZEALAND, ETC.",
        "HISTORY OF THE AMERICAS",
        "GEOGRAPHY. ANTHROPOLOGY. RECREATION",
        "SOCIAL SCIENCES",
        "POLITICAL SCIENCE",
        "LAW",
        "EDUCATION",
        "MUSIC AND BOOKS ON MUSIC",
        "FINE ARTS",
        "LANGUAGE AND LITERATURE",
        "SCIENCE",
        "MEDICINE",
        "AGRICULTURE",
        "TECHNOLOGY",
        "MILITARY SCIENCE",
        "NAVAL SCIENCE",
        "BIBLIOGRAPHY. LIBRARY SCIENCE. INFORMATION RESOURCES (GENERAL)",
    };
    return labels;
}

namespace {

struct LccRow {
    const char* label;
    std::vector<const char*> terms;
};

const std::vector<LccRow>& lcc_rows() {
    static const std::vector<LccRow> rows = {
        {"GENERAL WORKS",
         {"Encyclopedias and dictionaries", "Newspapers", "Periodicals"}},
        {"PHILOSOPHY. PSYCHOLOGY. RELIGION",
         {"Philosophy", "Theology", "Logic", "Psychology", "Aesthetics",
          "Ethics", "Mythology", "Rationalism", "Judaism", "Islam",
          "Theosophy", "Buddhism", "Christianity"}},
        {"AUXILIARY SCIENCES OF HISTORY",
         {"Archaeology", "Numismatics", "Heraldry", "Genealogy", "Biography"}},
        {"WORLD HISTORY AND HISTORY OF EUROPE, ASIA, AFRICA, AUSTRALIA, NEW "
         "ZEALAND, ETC.",
         {"World history"}},
        {"HISTORY OF THE AMERICAS",
         {"Indians of South America", "Indians of North America"}},
        {"GEOGRAPHY. ANTHROPOLOGY. RECREATION",
         {"Geography", "Cartography", "Anthropology", "Folklore",
          "Manners and customs", "Oceanography", "Atlases",
          "Mathematical geography"}},
        {"SOCIAL SCIENCES",
         {"Social sciences", "Statistics", "Commerce", "Finance", "Sociology",
          "Socialism", "Communism", "Anarchism", "Criminology"}},
        {"POLITICAL SCIENCE",
         {"Political science", "Democracy", "Local government",
          "Municipal government", "International relations",
          "Representative government and representation"}},
        {"LAW",
         {"Law", "Civil law", "Criminal law", "Constitutional law",
          "Commercial law", "Maritime law", "Administrative law",
          "Military law", "Mining law", "Corporation law",
          "Educational law and legislation", "Labor laws and legislation",
          "Railroad law", "Fishery law and legislation", "Banking law",
          "Marriage law", "Liquor laws", "Insurance law", "Customary law",
          "Patent laws and legislation", "Building laws", "Press law",
          "Emigration and immigration law"}},
        {"EDUCATION", {"Education", "Textbooks"}},
        {"MUSIC AND BOOKS ON MUSIC",
         {"Music", "Piano music", "Music theory", "Musical notation",
          "Orchestral music"}},
        {"FINE ARTS",
         {"Architecture", "Sculpture", "Drawing", "Painting",
          "Decorative arts"}},
        {"LANGUAGE AND LITERATURE",
         {"Philology", "Classical philology", "Oriental philology",
          "Romance philology", "Russian philology", "Greek philology",
          "Language and languages", "English language", "French language",
          "German language", "Latin language", "Greek language",
          "Hebrew language", "Spanish language", "Italian language",
          "Arabic language", "Sanskrit language", "Chinese language",
          "Indo-European languages", "Russian language", "Dutch language",
          "Portuguese language", "Swedish language", "Irish language",
          "Japanese language", "Syriac language", "Romance languages",
          "Old Norse language", "Literature", "English literature",
          "French literature", "Italian literature", "American literature",
          "Russian literature", "Spanish literature", "Greek literature",
          "Chinese literature", "Latin literature", "Polish literature",
          "Comparative literature", "Children's literature"}},
        {"SCIENCE",
         {"Science", "Mathematics", "Astronomy", "Physics", "Chemistry",
          "Geology", "Natural history", "Biology", "Botany", "Zoology",
          "Physiology", "Human anatomy"}},
        {"MEDICINE",
         {"Medicine", "Pathology", "General Surgery", "Ophthalmology",
          "Gynecology", "Obstetrics", "Pediatrics", "Dentistry",
          "Dermatology", "Therapeutics", "Pharmacology", "Pharmacy",
          "Homeopathy"}},
        {"AGRICULTURE",
         {"Agriculture", "Horticulture", "Forests and forestry", "Hunting"}},
        {"TECHNOLOGY",
         {"Technology", "Engineering", "Civil engineering",
          "Electrical engineering", "Electric engineering",
          "Mechanical engineering", "Mining engineering",
          "Hydraulic engineering", "Steam engineering", "Home economics"}},
        {"MILITARY SCIENCE",
         {"Artillery", "Military engineering", "Infantry drill and tactics"}},
        {"NAVAL SCIENCE",
         {"Naval art and science", "Naval architecture", "Shipbuilding",
          "Marine engineering"}},
        {"BIBLIOGRAPHY. LIBRARY SCIENCE. INFORMATION RESOURCES (GENERAL)",
         {"Library science", "Bibliography", "Paleography"}},
    };
    return rows;
}

std::string normalize_term(std::string_view term) {
    std::string t(term);
    // Trim whitespace, strip trailing punctuation, case-fold.
    while (!t.empty() && (t.back() == ' ' || t.back() == '.' ||
                          t.back() == ',' || t.back() == ';'))
        t.pop_back();
    size_t a = t.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    t = t.substr(a);
    return to_lower_ascii(t);
}

}  // namespace

const std::map<std::string, std::string>& lcc_source_table() {
    static const std::map<std::string, std::string> table = [] {
        std::map<std::string, std::string> t;
        for (const auto& row : lcc_rows()) {
            for (const char* term : row.terms) {
                auto [it, inserted] = t.emplace(normalize_term(term), row.label);
                if (!inserted)
                    throw std::logic_error(
                        std::string("duplicate source term in mapping table: ") +
                        term);
            }
        }
        return t;
    }();
    return table;
}

std::optional<std::string> lcc_map(
    const std::vector<std::string>& subject_terms) {
    const auto& table = lcc_source_table();
    for (const auto& term : subject_terms) {
        auto it = table.find(normalize_term(term));
        if (it != table.end()) return it->second;
    }
    return std::nullopt;
}

std::vector<std::string> subject_terms(const std::string& subject) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : subject) {
        if (c == ';' || c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string language_display_name(const std::string& iso639_3) {
    static const std::map<std::string, std::string> names = {
        {"eng", "English"},   {"deu", "German"},     {"fra", "French"},
        {"ita", "Italian"},   {"spa", "Spanish"},    {"lat", "Latin"},
        {"rus", "Russian"},   {"nld", "Dutch"},      {"por", "Portuguese"},
        {"heb", "Hebrew"},    {"swe", "Swedish"},    {"zho", "Chinese"},
        {"dan", "Danish"},    {"hun", "Hungarian"},  {"pol", "Polish"},
        {"ara", "Arabic"},    {"ces", "Czech"},      {"ell", "Greek"},
        {"nor", "Norwegian"}, {"isl", "Icelandic"},  {"jpn", "Japanese"},
        {"grc", "Ancient Greek"}, {"cym", "Welsh"},  {"fin", "Finnish"},
        {"und", "Undetermined"},  {"mul", "Multiple languages"},
    };
    auto it = names.find(iso639_3);
    return it == names.end() ? iso639_3 : it->second;
}

std::string format_topic_input(const VolumeRecord& record) {
    std::ostringstream out;
    if (record.title) out << "Title: " << *record.title << "\n";
    if (record.author) out << "Author: " << *record.author << "\n";
    if (auto date = parse_publication_date(record.date1, record.date2,
                                           record.date_types))
        out << "Year: " << date->year << "\n";
    if (record.language_declared)
        out << "Language: " << language_display_name(*record.language_declared)
            << "\n";
    if (record.general_note) out << "Note: " << *record.general_note << "\n";
    std::string s = out.str();
    if (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

TopicSplits build_topic_trainset(const std::vector<VolumeRecord>& records,
                                 double train_frac, double test_frac,
                                 double benchmark_frac, uint64_t seed) {
    if (std::abs(train_frac + test_frac + benchmark_frac - 1.0) > 1e-9)
        throw std::invalid_argument(
            "build_topic_trainset: fractions must sum to 1");
    std::vector<TopicTrainingRow> rows;
    for (const auto& record : records) {
        if (!record.topic_or_subject) continue;
        auto label = lcc_map(subject_terms(*record.topic_or_subject));
        if (!label) continue;
        rows.push_back({format_topic_input(record), *label});
    }
    if (rows.empty())
        throw std::runtime_error(
            "build_topic_trainset: no records with mappable subjects");

    std::mt19937_64 rng(seed);
    std::shuffle(rows.begin(), rows.end(), rng);

    size_t n = rows.size();
    size_t n_test = static_cast<size_t>(test_frac * static_cast<double>(n) + 0.5);
    size_t n_bench =
        static_cast<size_t>(benchmark_frac * static_cast<double>(n) + 0.5);
    if (n_test + n_bench > n) n_bench = n - n_test;
    size_t n_train = n - n_test - n_bench;

    TopicSplits splits;
    splits.train.assign(rows.begin(),
                        rows.begin() + static_cast<ptrdiff_t>(n_train));
    splits.test.assign(rows.begin() + static_cast<ptrdiff_t>(n_train),
                       rows.begin() + static_cast<ptrdiff_t>(n_train + n_test));
    splits.benchmark.assign(rows.begin() +
                                static_cast<ptrdiff_t>(n_train + n_test),
                            rows.end());
    return splits;
}

HashedTextClassifier train_topic_classifier(
    const std::vector<TopicTrainingRow>& rows) {
    std::vector<HashedTextClassifier::Example> examples;
    examples.reserve(rows.size());
    for (const auto& row : rows) examples.push_back({row.input_text, {}, row.label});
    return HashedTextClassifier::train(examples, 0);
}

}  // namespace corpus
