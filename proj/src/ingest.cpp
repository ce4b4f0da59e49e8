#include "corpus/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "corpus/util.hpp"

namespace corpus {

DateTypeClass classify_date_type(const std::optional<std::string>& date_types) {
    if (!date_types || date_types->empty()) return DateTypeClass::other;
    char c = (*date_types)[0];
    if (c == 'c' || c == 'd' || c == 'u') return DateTypeClass::continuing_resource;
    if (c == '|') return DateTypeClass::no_attempt;
    return DateTypeClass::other;
}

namespace {

bool valid_year_string(const std::optional<std::string>& s) {
    if (!s || s->size() != 4) return false;
    for (char c : *s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return *s != "9999";
}

}  // namespace

std::optional<PublicationDate> parse_publication_date(
    const std::optional<std::string>& date1,
    const std::optional<std::string>& date2,
    const std::optional<std::string>& date_types) {
    DateTypeClass cls = classify_date_type(date_types);
    if (cls == DateTypeClass::continuing_resource || cls == DateTypeClass::no_attempt)
        return std::nullopt;
    if (valid_year_string(date1))
        return PublicationDate{std::stoi(*date1), PublicationDate::Source::date1};
    if (valid_year_string(date2))
        return PublicationDate{std::stoi(*date2), PublicationDate::Source::date2};
    return std::nullopt;
}

TemporalBucket bucket_temporal(int year) {
    if (year < 0) throw std::invalid_argument("bucket_temporal: year must be >= 0");
    return TemporalBucket{year - year % 10, year - year % 100};
}

namespace {

// The complete set of ISO 639-2/B codes that differ from their 639-3
// equivalents.
const std::unordered_map<std::string, std::string>& b_to_3() {
    static const std::unordered_map<std::string, std::string> table = {
        {"alb", "sqi"}, {"arm", "hye"}, {"baq", "eus"}, {"bur", "mya"},
        {"chi", "zho"}, {"cze", "ces"}, {"dut", "nld"}, {"fre", "fra"},
        {"geo", "kat"}, {"ger", "deu"}, {"gre", "ell"}, {"ice", "isl"},
        {"mac", "mkd"}, {"mao", "mri"}, {"may", "msa"}, {"per", "fas"},
        {"rum", "ron"}, {"slo", "slk"}, {"tib", "bod"}, {"wel", "cym"},
    };
    return table;
}

// Codes shared between 639-2 and 639-3, covering the collection's language
// inventory plus common companions. Not exhaustive; unknown codes pass
// through flagged.
const std::unordered_set<std::string>& shared_codes() {
    static const std::unordered_set<std::string> table = {
        "eng", "deu", "fra", "ita", "spa", "lat", "rus", "nld", "por", "heb",
        "swe", "zho", "dan", "hun", "pol", "ara", "ces", "ell", "nor", "isl",
        "jpn", "grc", "cym", "fin", "ota", "hye", "hrv", "srp", "bul", "ukr",
        "cat", "ron", "tur", "kor", "slk", "slv", "gle", "glg", "est", "lav",
        "lit", "bel", "mkd", "sqi", "eus", "kat", "fas", "san", "hin", "ben",
        "tam", "tha", "vie", "ind", "msa", "mya", "bod", "mri", "epo", "yid",
        "afr", "nob", "nno", "sco", "oci", "arb", "cmn", "prs", "ydd", "ina",
        "pcm", "mxi",
    };
    return table;
}

}  // namespace

NormalizedLanguage normalize_language_code(const std::string& code_639_2b) {
    std::string code = to_lower_ascii(code_639_2b);
    if (code == "und" || code == "mul") return {code, true};
    auto it = b_to_3().find(code);
    if (it != b_to_3().end()) return {it->second, false};
    if (shared_codes().count(code)) return {code, false};
    return {code, true};
}

VolumeReader::VolumeReader(const std::string& path) : in_(path), path_(path) {
    if (!in_) throw std::runtime_error("cannot open volume file: " + path);
}

std::optional<VolumeReader::Item> VolumeReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_number_;
        // Skip blank lines silently; they carry no record.
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            return Item{LineError{line_number_, "line " + std::to_string(line_number_) +
                                                   ": not a JSON object"}};
        try {
            VolumeRecord r = record_from_json(j);
            if (r.barcode.empty())
                return Item{LineError{line_number_,
                                      "line " + std::to_string(line_number_) +
                                          ": empty barcode"}};
            return Item{std::move(r)};
        } catch (const std::exception& e) {
            return Item{LineError{line_number_, "line " + std::to_string(line_number_) +
                                                    ": " + e.what()}};
        }
    }
    return std::nullopt;
}

ReadResult read_volume_file(const std::string& path) {
    VolumeReader reader(path);
    ReadResult out;
    while (auto item = reader.next()) {
        if (std::holds_alternative<VolumeRecord>(*item))
            out.records.push_back(std::move(std::get<VolumeRecord>(*item)));
        else
            out.errors.push_back(std::get<LineError>(*item));
    }
    return out;
}

}  // namespace corpus
