#pragma once

#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "corpus/volume.hpp"

namespace corpus {

// A four-digit publication year plus which MARC date field it came from.
struct PublicationDate {
    int year = 0;
    enum class Source { date1, date2 } source_field = Source::date1;

    bool operator==(const PublicationDate&) const = default;
};

enum class DateTypeClass { continuing_resource, no_attempt, other };

// MARC 21 date-type byte. Continuing resources are {c, d, u}; '|' means no
// attempt to code.
DateTypeClass classify_date_type(const std::optional<std::string>& date_types);

// Date-validity rules: a candidate is valid when it is exactly four digits,
// not "9999", and the record is not a continuing resource or uncoded.
// date1 wins; date2 is the fallback. Invalidity is expressed as absence.
std::optional<PublicationDate> parse_publication_date(
    const std::optional<std::string>& date1,
    const std::optional<std::string>& date2,
    const std::optional<std::string>& date_types);

struct TemporalBucket {
    int decade = 0;
    int century = 0;
    bool operator==(const TemporalBucket&) const = default;
};

TemporalBucket bucket_temporal(int year);

struct NormalizedLanguage {
    std::string code;        // ISO 639-3 when known, otherwise the input
    bool pass_through = false;  // true when the code was not convertible
};

// ISO 639-2/B to 639-3 conversion from a bundled static table. Special values
// (und, mul) and unknown codes pass through flagged.
NormalizedLanguage normalize_language_code(const std::string& code_639_2b);

struct LineError {
    size_t line_number = 0;
    std::string message;
};

// Streams VolumeRecords from a JSON Lines file, one object per line.
// Malformed lines surface as LineErrors without aborting the stream.
class VolumeReader {
public:
    using Item = std::variant<VolumeRecord, LineError>;

    // Throws when the file cannot be opened.
    explicit VolumeReader(const std::string& path);

    std::optional<Item> next();

private:
    std::ifstream in_;
    std::string path_;
    size_t line_number_ = 0;
};

// Drains a reader into records and errors.
struct ReadResult {
    std::vector<VolumeRecord> records;
    std::vector<LineError> errors;
};
ReadResult read_volume_file(const std::string& path);

}  // namespace corpus
