// Acceptance checks for the corpus toolkit. Each criterion prints a single
// PASS/FAIL line; the process exits non-zero when any criterion fails. All
// tolerances are pinned as constants below.

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corpus/dedup.hpp"
#include "corpus/enrich.hpp"
#include "corpus/ingest.hpp"
#include "corpus/langdetect.hpp"
#include "corpus/linetype.hpp"
#include "corpus/reassembly.hpp"
#include "corpus/report.hpp"
#include "corpus/textmetrics.hpp"
#include "corpus/tokenizer.hpp"
#include "support/synth.hpp"

using namespace corpus;

namespace {

// ---- pinned tolerances -----------------------------------------------------
constexpr double kNearDupeRecallMin = 0.97;   // criterion 1
constexpr double kDedupTimeLimitSec = 60.0;   // criterion 1
constexpr double kLangAccuracyMin = 0.90;     // criterion 4
constexpr double kBilingualShareTol = 0.05;   // criterion 4
constexpr double kLineTypeHeldoutMin = 0.65;  // criterion 5
constexpr double kTokenizabilityGainMin = 2.0;  // criterion 6
constexpr double kCharLossMax = 0.03;           // criterion 6
constexpr double kSymmetryTol = 1e-9;           // criterion 7
// ----------------------------------------------------------------------------

const std::string kDataDir = CORPUS_DATA_DIR;

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << " ("
              << name << "): " << detail << std::endl;
    if (!pass) ++g_failures;
}

template <typename Fn>
void run_criterion(int criterion, const std::string& name, Fn fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        report(criterion, name, false, std::string("exception: ") + e.what());
    }
}

BpeTokenizer& tokenizer() {
    static auto t = BpeTokenizer::load(kDataDir + "/vocab/desk2048.vocab");
    return t;
}

std::map<std::string, TrigramProfile>& profiles() {
    static auto p = load_profiles(kDataDir + "/profiles");
    return p;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ============================================================================
// Criterion 1 + 10 share a generated 200-volume corpus.
// ============================================================================

struct DedupCorpus {
    std::vector<VolumeRecord> records;                    // 200 volumes
    std::vector<std::pair<std::string, std::string>> near_pairs;
    std::vector<std::pair<std::string, std::string>> edition_pairs;
};

const char* corpus_lang(int i) {
    static const char* langs[] = {"eng", "deu", "fra", "ita", "spa"};
    return langs[i % 5];
}

DedupCorpus build_dedup_corpus() {
    DedupCorpus corpus;
    synth::Rng rng(20260826);
    for (int i = 0; i < 50; ++i) {
        std::string lang = corpus_lang(i);
        std::string base = synth::book_text(rng, lang, 60000);
        // 1-2% character noise plus a fresh line wrap.
        double rate = 0.01 + 0.01 * (static_cast<double>(i) / 49.0);
        std::string copy = synth::reflow(
            synth::substitute_noise(base, rng, rate), 40 + i % 25, rng);
        char a[16], b[16];
        std::snprintf(a, sizeof(a), "N%03dA", i);
        std::snprintf(b, sizeof(b), "N%03dB", i);
        VolumeRecord ra, rb;
        ra.barcode = a;
        ra.pages_source = {base.substr(0, base.size() / 2),
                           base.substr(base.size() / 2)};
        ra.language_detected = lang;
        rb.barcode = b;
        rb.pages_source = {copy.substr(0, copy.size() / 2),
                           copy.substr(copy.size() / 2)};
        rb.language_detected = lang;
        corpus.records.push_back(std::move(ra));
        corpus.records.push_back(std::move(rb));
        corpus.near_pairs.emplace_back(a, b);
    }
    for (int i = 0; i < 50; ++i) {
        std::string lang = corpus_lang(i + 2);
        std::string base = synth::book_text(rng, lang, 60000);
        // A distinct edition: the same text plus ~20% new material.
        std::string extra = synth::book_text(rng, lang, base.size() / 5);
        std::string edition = base + "\n\n" + extra;
        char a[16], b[16];
        std::snprintf(a, sizeof(a), "E%03dA", i);
        std::snprintf(b, sizeof(b), "E%03dB", i);
        VolumeRecord ra, rb;
        ra.barcode = a;
        ra.pages_source = {base.substr(0, base.size() / 2),
                           base.substr(base.size() / 2)};
        ra.language_detected = lang;
        rb.barcode = b;
        rb.pages_source = {edition.substr(0, edition.size() / 2),
                           edition.substr(edition.size() / 2)};
        rb.language_detected = lang;
        corpus.records.push_back(std::move(ra));
        corpus.records.push_back(std::move(rb));
        corpus.edition_pairs.emplace_back(a, b);
    }
    return corpus;
}

void criterion_1(const DedupCorpus& corpus) {
    auto t0 = std::chrono::steady_clock::now();

    PipelineConfig cfg;
    cfg.dedup_hamming_radius = 3;
    cfg.worker_count = 1;

    std::vector<SimhashFingerprint> fps;
    std::map<std::string, const VolumeRecord*> by_barcode;
    for (const auto& r : corpus.records) {
        std::string full;
        for (const auto& p : r.pages_source) full += p + "\n";
        fps.push_back(simhash(full, cfg, r.barcode));
        by_barcode[r.barcode] = &r;
    }

    // Grouping plus the false-positive filters, single-threaded.
    std::map<std::string, int> group_of;
    int group_id = 0;
    for (const auto& g : group_candidates(fps, cfg)) {
        auto filtered = filter_false_positives(g, by_barcode, cfg);
        if (filtered.dissolved) continue;
        ++group_id;
        for (const auto& m : filtered.group.members) group_of[m] = group_id;
    }

    int near_flagged = 0;
    for (const auto& [a, b] : corpus.near_pairs) {
        auto ia = group_of.find(a), ib = group_of.find(b);
        if (ia != group_of.end() && ib != group_of.end() &&
            ia->second == ib->second)
            ++near_flagged;
    }
    int editions_surviving = 0;
    for (const auto& [a, b] : corpus.edition_pairs) {
        auto ia = group_of.find(a), ib = group_of.find(b);
        if (ia != group_of.end() && ib != group_of.end() &&
            ia->second == ib->second)
            ++editions_surviving;
    }

    // The continuous-character filter itself must reject a forced
    // distinct-edition group, whether or not simhash ever grouped one.
    DuplicateGroup forced;
    forced.members = {corpus.edition_pairs[0].first,
                      corpus.edition_pairs[0].second};
    std::sort(forced.members.begin(), forced.members.end());
    forced.representative = forced.members[0];
    bool filter_rejects =
        filter_false_positives(forced, by_barcode, cfg).dissolved;

    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    double recall = static_cast<double>(near_flagged) /
                    static_cast<double>(corpus.near_pairs.size());
    bool pass = recall >= kNearDupeRecallMin && editions_surviving == 0 &&
                filter_rejects && elapsed < kDedupTimeLimitSec;
    std::ostringstream d;
    d << "near-dupes flagged " << near_flagged << "/"
      << corpus.near_pairs.size() << " (recall " << recall
      << ", need >= " << kNearDupeRecallMin << "), editions surviving "
      << editions_surviving << "/50 (need 0), forced edition group "
      << (filter_rejects ? "dissolved" : "NOT dissolved") << ", " << elapsed
      << "s single-threaded (limit " << kDedupTimeLimitSec << "s)";
    report(1, "dedup precision/recall", pass, d.str());
}

// ============================================================================
// Criterion 2: simhash against an independent brute-force oracle.
// ============================================================================

uint64_t oracle_fnv(const std::string& data, uint64_t seed) {
    uint64_t h = 14695981039346656037ULL ^ seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<char32_t> oracle_decode(const std::string& s) {
    std::vector<char32_t> cps;
    size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        char32_t cp;
        int len;
        if (c < 0x80) {
            cp = c;
            len = 1;
        } else if ((c >> 5) == 0x6) {
            cp = c & 0x1f;
            len = 2;
        } else if ((c >> 4) == 0xe) {
            cp = c & 0x0f;
            len = 3;
        } else {
            cp = c & 0x07;
            len = 4;
        }
        for (int k = 1; k < len && i + static_cast<size_t>(k) < s.size(); ++k)
            cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3f);
        cps.push_back(cp);
        i += static_cast<size_t>(len);
    }
    return cps;
}

std::string oracle_encode(char32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
        out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
    return out;
}

bool oracle_space(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
           cp == U'\f' || cp == U'\v' || cp == 0xA0;
}

bool oracle_hyphen(char32_t cp) {
    return cp == U'-' || cp == 0x2010 || cp == 0x00AD;
}

// Independent re-statement of the normalization rules: lowercase ASCII,
// drop whitespace, drop a hyphen whose only successors before a line break
// (or end of text) are non-newline spaces.
std::vector<char32_t> oracle_normalize(const std::string& text) {
    auto cps = oracle_decode(text);
    std::vector<char32_t> out;
    for (size_t i = 0; i < cps.size(); ++i) {
        char32_t cp = cps[i];
        if (oracle_space(cp)) continue;
        if (oracle_hyphen(cp)) {
            size_t j = i + 1;
            while (j < cps.size() && oracle_space(cps[j]) && cps[j] != U'\n')
                ++j;
            if (j >= cps.size() || cps[j] == U'\n') continue;  // line-final
        }
        if (cp < 0x80 && cp >= U'A' && cp <= U'Z') cp += 32;
        else if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) cp += 32;
        out.push_back(cp);
    }
    return out;
}

uint64_t oracle_simhash(const std::string& text, int shingle, bool& too_short) {
    auto cps = oracle_normalize(text);
    too_short = cps.size() < static_cast<size_t>(shingle);
    if (too_short) return 0;
    std::map<std::string, int64_t> freq;
    for (size_t i = 0; i + static_cast<size_t>(shingle) <= cps.size(); ++i) {
        std::string s;
        for (int k = 0; k < shingle; ++k)
            s += oracle_encode(cps[i + static_cast<size_t>(k)]);
        ++freq[s];
    }
    int64_t counters[64] = {0};
    for (const auto& [s, weight] : freq) {
        uint64_t h = oracle_fnv(s, 0x5eed5eedULL);
        for (int b = 0; b < 64; ++b)
            counters[b] += ((h >> b) & 1) ? weight : -weight;
    }
    uint64_t bits = 0;
    for (int b = 0; b < 64; ++b)
        if (counters[b] > 0) bits |= (1ULL << b);
    return bits;
}

void criterion_2() {
    synth::Rng rng(2026);
    PipelineConfig cfg;
    const std::string alphabet =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
        "   --\n.,;";
    const std::vector<std::string> multibyte = {"é", "ü", "ß", "à", "—"};
    int mismatches = 0;
    for (int t = 0; t < 100; ++t) {
        std::string s;
        size_t len = rng() % 200;
        for (size_t i = 0; i < len; ++i) {
            if (rng() % 12 == 0)
                s += multibyte[rng() % multibyte.size()];
            else
                s.push_back(alphabet[rng() % alphabet.size()]);
        }
        bool oracle_short = false;
        uint64_t expected = oracle_simhash(s, cfg.shingle_length, oracle_short);
        SimhashFingerprint fp = simhash(s, cfg);
        if (fp.too_short != oracle_short ||
            (!oracle_short && fp.bits != expected))
            ++mismatches;
    }
    std::ostringstream d;
    d << mismatches << "/100 fingerprints disagree with the brute-force "
      << "oracle (need 0, bit-exact)";
    report(2, "simhash oracle equivalence", mismatches == 0, d.str());
}

// ============================================================================
// Criterion 3: 50 hand-tallied date records.
// ============================================================================

void criterion_3() {
    struct Row {
        const char* d1;
        const char* d2;
        const char* types;
        int expected;  // 0 = no valid publication year
    };
    // Hand-tallied fixture covering placeholder digits, the open-ended
    // sentinel, continuing-resource codes, no-attempt codes, date2
    // fallbacks, and shape violations.
    static const Row rows[50] = {
        {"1885", nullptr, "s", 1885},  {"1900", "1901", "m", 1900},
        {"1776", nullptr, "t", 1776},  {"0999", nullptr, "s", 999},
        {"2000", nullptr, "e", 2000},  {"1850", "1900", "r", 1850},
        {"1810", nullptr, "q", 1810},  {"1923", "1930", "p", 1923},
        {"1600", nullptr, "s", 1600},  {"1875", "9999", "s", 1875},
        // 'u' placeholders invalidate date1; date2 takes over when clean.
        {"18uu", "1890", "q", 1890},   {"190u", "1905", "q", 1905},
        {"uuuu", "1888", "q", 1888},   {"18uu", "19uu", "q", 0},
        {"u777", nullptr, "s", 0},     {"18u0", nullptr, "s", 0},
        // The open-ended sentinel is never a year.
        {"9999", nullptr, "s", 0},     {"9999", "1901", "s", 1901},
        {"9999", "9999", "m", 0},      {"1899", "9999", "m", 1899},
        // Continuing resources yield no single publication year.
        {"1850", "1900", "c", 0},      {"1850", "1900", "d", 0},
        {"1850", "1900", "u", 0},      {"1901", nullptr, "c", 0},
        {"1888", nullptr, "d", 0},     {"1870", "1880", "u", 0},
        // No attempt to code.
        {"1850", nullptr, "|", 0},     {"1850", "1860", "|", 0},
        {nullptr, nullptr, "|", 0},    {"9999", "1850", "|", 0},
        // Shape violations: wrong length or stray characters.
        {"185", nullptr, "s", 0},      {"18850", nullptr, "s", 0},
        {"c185", nullptr, "s", 0},     {"18 5", nullptr, "s", 0},
        {"MDCC", nullptr, "s", 0},     {"", nullptr, "s", 0},
        {"185-", "1890", "s", 1890},   {"??", "1875", "s", 1875},
        {"19th", "1850", "s", 1850},   {"l885", nullptr, "s", 0},
        // Missing pieces.
        {nullptr, nullptr, "s", 0},    {nullptr, "1905", "s", 1905},
        {"1885", nullptr, nullptr, 1885}, {nullptr, nullptr, nullptr, 0},
        {"18uu", nullptr, nullptr, 0}, {"9999", "1907", nullptr, 1907},
        // More plain records to round out the tally.
        {"1801", "1802", "s", 1801},   {"1950", nullptr, "s", 1950},
        {"2025", nullptr, "s", 2025},  {"0001", nullptr, "s", 1},
    };

    int tallied_valid = 0;  // hand count of rows with expected != 0
    for (const auto& r : rows)
        if (r.expected != 0) ++tallied_valid;

    int agree = 0, valid_seen = 0;
    for (const auto& r : rows) {
        auto opt = [](const char* s) -> std::optional<std::string> {
            if (!s) return std::nullopt;
            return std::string(s);
        };
        auto got = parse_publication_date(opt(r.d1), opt(r.d2), opt(r.types));
        int year = got ? got->year : 0;
        if (year == r.expected) ++agree;
        if (got) ++valid_seen;
    }
    bool pass = agree == 50 && valid_seen == tallied_valid;
    std::ostringstream d;
    d << agree << "/50 records match the hand tally exactly; " << valid_seen
      << " valid dates vs " << tallied_valid << " tallied";
    report(3, "date filter exactness", pass, d.str());
}

// ============================================================================
// Criterion 4: language identification.
// ============================================================================

const std::vector<std::string>& latin_sentences() {
    static const std::vector<std::string> pool = {
        "Gallia est omnis divisa in partes tres, quarum unam incolunt "
        "Belgae, aliam Aquitani, tertiam qui ipsorum lingua Celtae "
        "appellantur.",
        "Arma virumque cano, Troiae qui primus ab oris Italiam fato "
        "profugus Laviniaque venit litora.",
        "Quousque tandem abutere, Catilina, patientia nostra? Quam diu "
        "etiam furor iste tuus nos eludet?",
        "Omnia vincit amor, et nos cedamus amori; labor omnia vicit "
        "improbus et duris urgens in rebus egestas.",
        "Senatus populusque Romanus bellum gerere constituit atque "
        "legiones in provinciam misit.",
        "Ceterum censeo Carthaginem esse delendam, neque enim ulla salus "
        "rei publicae sine virtute civium esse potest.",
        "Memoria minuitur nisi eam exerceas; litterae autem thesaurus est "
        "animi atque custodia rerum gestarum.",
        "Hannibal ad portas clamabant cives, dum consules exercitum novum "
        "celeriter comparabant.",
        "Vita brevis, ars longa, occasio praeceps, experimentum "
        "periculosum, iudicium difficile.",
        "In principio erat verbum, et verbum erat apud deum, et omnia per "
        "ipsum facta sunt.",
        "Magna vis est conscientiae in utramque partem, ut neque timeant "
        "qui nihil commiserint.",
        "Caesar castra movit et tribus diebus ad flumen Rhenum pervenit, "
        "ubi pontem facere instituit.",
    };
    return pool;
}

std::string latin_paragraph(synth::Rng& rng, int sentences) {
    const auto& pool = latin_sentences();
    std::string out;
    for (int i = 0; i < sentences; ++i) {
        if (i) out += ' ';
        out += pool[rng() % pool.size()];
    }
    return out;
}

void criterion_4() {
    // Part A: 30 fixture texts across 10 languages.
    const std::vector<std::string> langs = {"deu", "eng", "fin", "fra", "ita",
                                            "nld", "pol", "por", "spa", "swe"};
    int correct = 0, total = 0;
    PipelineConfig small_cfg;
    small_cfg.language_token_floor = 0;  // fixtures are much smaller than books
    for (const auto& lang : langs) {
        for (int i = 1; i <= 3; ++i) {
            VolumeRecord r;
            r.barcode = lang + std::to_string(i);
            r.pages_source = {read_file(kDataDir + "/fixtures/langid/" + lang +
                                        "-" + std::to_string(i) + ".txt")};
            auto dist =
                volume_distribution(r, profiles(), tokenizer(), small_cfg);
            ++total;
            if (main_language(dist) == std::optional<std::string>(lang))
                ++correct;
        }
    }
    double accuracy = static_cast<double>(correct) / static_cast<double>(total);

    // Part B: a bilingual volume constructed at a 61/38 token ratio.
    synth::Rng rng(614);
    std::string text;
    int64_t fra_tokens = 0, lat_tokens = 0;
    while (fra_tokens < 4000) {
        std::string p = synth::paragraph(rng, "fra", 4, 7);
        fra_tokens += count_tokens(p, tokenizer());
        text += p + "\n\n";
    }
    int64_t lat_target =
        static_cast<int64_t>(static_cast<double>(fra_tokens) * 38.0 / 61.0);
    while (lat_tokens < lat_target) {
        std::string p = latin_paragraph(rng, 4);
        lat_tokens += count_tokens(p, tokenizer());
        text += p + "\n\n";
    }
    // A sliver of German under the 1,000-token floor must be suppressed.
    std::string sliver = synth::paragraph(rng, "deu", 3, 4);
    int64_t deu_tokens = count_tokens(sliver, tokenizer());
    text += sliver + "\n";

    VolumeRecord bilingual;
    bilingual.barcode = "BIL";
    bilingual.pages_source = {text};
    PipelineConfig cfg;  // default 1,000-token floor
    auto dist = volume_distribution(bilingual, profiles(), tokenizer(), cfg);

    double built_total = static_cast<double>(fra_tokens + lat_tokens);
    double built_fra = static_cast<double>(fra_tokens) / built_total;
    double built_lat = static_cast<double>(lat_tokens) / built_total;
    double got_fra = 0.0, got_lat = 0.0;
    bool floor_clean = true;
    for (size_t i = 0; i < dist.languages.size(); ++i) {
        if (dist.languages[i] == "fra") got_fra = dist.proportions[i];
        else if (dist.languages[i] == "lat") got_lat = dist.proportions[i];
        if (dist.token_totals[i] < cfg.language_token_floor) floor_clean = false;
        if (dist.languages[i] == "deu") floor_clean = false;
    }
    bool bilingual_ok = std::abs(got_fra - built_fra) <= kBilingualShareTol &&
                        std::abs(got_lat - built_lat) <= kBilingualShareTol;

    bool pass = accuracy >= kLangAccuracyMin && bilingual_ok && floor_clean;
    std::ostringstream d;
    d << "fixture accuracy " << correct << "/" << total << " (need >= "
      << kLangAccuracyMin << "); bilingual built fra/lat " << built_fra << "/"
      << built_lat << ", reported " << got_fra << "/" << got_lat << " (tol "
      << kBilingualShareTol << "); sub-floor german (" << deu_tokens
      << " tokens) " << (floor_clean ? "suppressed" : "NOT suppressed");
    report(4, "language detection", pass, d.str());
}

// ============================================================================
// Criterion 5: line-type classifier.
// ============================================================================

void criterion_5() {
    auto rows = load_labeled_lines(kDataDir + "/fixtures/linetype/lines.tsv");
    bool size_ok = rows.size() >= 2000;

    // Pinned-seed 80/20 held-out split.
    std::vector<size_t> order(rows.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::mt19937_64 rng(20260826);
    std::shuffle(order.begin(), order.end(), rng);
    size_t cut = rows.size() * 4 / 5;
    std::vector<std::pair<PositionalLine, LineType>> train, held;
    for (size_t i = 0; i < order.size(); ++i)
        (i < cut ? train : held).push_back(rows[order[i]]);

    LineTypeModel model = LineTypeModel::train(train);
    int correct = 0;
    for (const auto& [line, type] : held)
        if (model.predict(line).line_type == type) ++correct;
    double accuracy =
        static_cast<double>(correct) / static_cast<double>(held.size());

    // Separable two-class problem: bare page numbers against prose.
    synth::Rng srng(5);
    auto two_class = [&](int count) {
        std::vector<std::pair<PositionalLine, LineType>> out;
        for (int i = 0; i < count; ++i) {
            if (i % 2 == 0)
                out.push_back(
                    {{synth::page_number_line(srng, 1 + int(srng() % 400)),
                      1 + int(srng() % 20), 20, 1, 40},
                     LineType::PAGE_NUMBER});
            else
                out.push_back({{synth::sentence(srng, "eng", 8, 14),
                                1 + int(srng() % 20), 20,
                                5 + int(srng() % 30), 40},
                               LineType::PARAGRAPH_CHUNK});
        }
        return out;
    };
    LineTypeModel two = LineTypeModel::train(two_class(400));
    int two_correct = 0;
    auto two_test = two_class(200);
    for (const auto& [line, type] : two_test)
        if (two.predict(line).line_type == type) ++two_correct;

    bool pass = size_ok && accuracy >= kLineTypeHeldoutMin &&
                two_correct == static_cast<int>(two_test.size());
    std::ostringstream d;
    d << "fixture " << rows.size() << " lines (need >= 2000); held-out "
      << correct << "/" << held.size() << " = " << accuracy << " (need >= "
      << kLineTypeHeldoutMin << "); two-class " << two_correct << "/"
      << two_test.size() << " (need 100%)";
    report(5, "line-type classifier", pass, d.str());
}

// ============================================================================
// Criterion 6: reassembly effect on 20 English volumes.
// ============================================================================

void criterion_6() {
    LineTypeModel model =
        LineTypeModel::load(kDataDir + "/models/linetype.model");
    PipelineConfig cfg;
    synth::Rng rng(66);

    double gain_sum = 0.0;
    double sent_src_sum = 0.0, sent_gen_sum = 0.0;
    int64_t chars_src = 0, chars_gen = 0;
    const int volumes = 20;
    for (int v = 0; v < volumes; ++v) {
        VolumeRecord r = synth::english_volume(rng, "R" + std::to_string(v),
                                               10 + v % 5, 34);
        r.language_detected = "eng";
        auto post = postprocess_volume(r, model, cfg);
        if (post.status != VolumePostprocessResult::Status::processed)
            throw std::runtime_error("volume skipped unexpectedly");

        std::string src, gen;
        for (const auto& p : r.pages_source) src += p + "\n";
        for (const auto& p : post.pages_processed) gen += p + "\n";
        TextAnalysis a_src = analyze_text(src, "eng", tokenizer(), cfg);
        TextAnalysis a_gen = analyze_text(gen, "eng", tokenizer(), cfg);
        gain_sum += a_gen.tokenizability_score - a_src.tokenizability_score;
        sent_src_sum += a_src.avg_sentence_length_chars;
        sent_gen_sum += a_gen.avg_sentence_length_chars;
        chars_src += a_src.continuous_char_count;
        chars_gen += a_gen.continuous_char_count;
    }
    double mean_gain = gain_sum / volumes;
    double loss = 1.0 - static_cast<double>(chars_gen) /
                            static_cast<double>(chars_src);
    bool pass = mean_gain >= kTokenizabilityGainMin &&
                sent_gen_sum < sent_src_sum && loss >= 0.0 &&
                loss <= kCharLossMax;
    std::ostringstream d;
    d << "mean tokenizability gain " << mean_gain << " (need >= "
      << kTokenizabilityGainMin << "); mean sentence length "
      << sent_src_sum / volumes << " -> " << sent_gen_sum / volumes
      << " (must decrease); char loss " << loss * 100.0 << "% (need 0..="
      << kCharLossMax * 100.0 << "%)";
    report(6, "reassembly effect", pass, d.str());
}

// ============================================================================
// Criterion 7: tokenizability formula checks.
// ============================================================================

void criterion_7() {
    PipelineConfig cfg;
    bool pass = std::abs(tokenizability(125, 100, cfg) - 100.0) < 1e-12 &&
                std::abs(tokenizability(250, 100, cfg) - 50.0) < 1e-12 &&
                tokenizability(10, 0, cfg) == 0.0;
    const double t = cfg.tokenizability_target;
    double worst = 0.0;
    for (double r : {0.5, 0.625, 1.25, 2.5, 3.125}) {
        int64_t words = 1000000;
        auto tk = [&](double ratio) {
            return static_cast<int64_t>(ratio * static_cast<double>(words));
        };
        double diff = std::abs(tokenizability(tk(r), words, cfg) -
                               tokenizability(tk(t * t / r), words, cfg));
        worst = std::max(worst, diff);
    }
    pass = pass && worst <= kSymmetryTol * 100.0;
    std::ostringstream d;
    d << "(125,100)=" << tokenizability(125, 100, cfg) << ", (250,100)="
      << tokenizability(250, 100, cfg) << ", (.,0)=" << tokenizability(10, 0, cfg)
      << "; worst symmetry gap " << worst << " (tol " << kSymmetryTol * 100.0
      << " score points)";
    report(7, "tokenizability formula", pass, d.str());
}

// ============================================================================
// Criterion 8: rights client against the bundled mock server.
// ============================================================================

struct MockServer {
    pid_t pid = -1;
    int port = 0;

    ~MockServer() {
        if (pid > 0) {
            kill(pid, SIGKILL);
            int status = 0;
            waitpid(pid, &status, 0);
        }
    }
};

MockServer spawn_mock_server(const std::string& assignments_path) {
    MockServer server;
    int fds[2];
    if (pipe(fds) != 0) throw std::runtime_error("pipe failed");
    pid_t pid = fork();
    if (pid < 0) throw std::runtime_error("fork failed");
    if (pid == 0) {
        dup2(fds[1], STDOUT_FILENO);
        close(fds[0]);
        close(fds[1]);
        execl(MOCK_SERVER_BIN, MOCK_SERVER_BIN, "--port", "0", "--assignments",
              assignments_path.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(fds[1]);
    server.pid = pid;
    FILE* out = fdopen(fds[0], "r");
    char line[128] = {0};
    if (!out || !fgets(line, sizeof(line), out)) {
        if (out) fclose(out);
        throw std::runtime_error("mock server produced no output");
    }
    int port = 0;
    if (std::sscanf(line, "listening on %d", &port) != 1 || port <= 0) {
        fclose(out);
        throw std::runtime_error(std::string("unexpected server banner: ") +
                                 line);
    }
    fclose(out);
    server.port = port;
    return server;
}

void criterion_8() {
    // Seed the server with an exact down-scaled version of the published
    // code distribution, plus ids with no record at all.
    const std::vector<std::pair<std::string, int>> seeded = {
        {"pd", 146},          {"pdus", 36}, {"ic", 4},
        {"und", 3},           {"cc-zero", 3}, {"cc-by-4.0", 3},
        {"cc-by-nc-nd-4.0", 2}, {"icus", 2},  {"cc-by-nd-4.0", 1},
    };
    std::string assignments_path = "tmp_acceptance_assignments.jsonl";
    std::vector<std::string> htids;
    {
        std::ofstream out(assignments_path);
        int n = 0;
        for (const auto& [code, count] : seeded)
            for (int i = 0; i < count; ++i) {
                std::string htid = "hvd.R" + std::to_string(n++);
                htids.push_back(htid);
                json j;
                j["htid"] = htid;
                j["rights_code"] = code;
                out << j.dump() << "\n";
            }
    }
    const int missing = 10;
    for (int i = 0; i < missing; ++i)
        htids.push_back("hvd.MISSING" + std::to_string(i));

    MockServer server = spawn_mock_server(assignments_path);
    std::string endpoint = "http://127.0.0.1:" + std::to_string(server.port);
    HttpTransport transport = default_transport();

    std::vector<std::string> codes;
    int not_found = 0;
    for (const auto& htid : htids) {
        auto info = fetch_rights(htid, endpoint, transport, "2026-08-26");
        if (info)
            codes.push_back(info->rights_code);
        else
            ++not_found;
    }
    std::filesystem::remove(assignments_path);

    PipelineConfig cfg;
    RightsSummary summary = summarize_rights(codes, cfg);
    // Expected buckets from the seeded counts.
    int64_t exp_pd = 146 + 36 + 3;   // pd + pdus + cc-zero
    int64_t exp_unknown = 3;         // und
    int64_t exp_known = 4 + 2;       // ic + icus
    int64_t exp_other = 3 + 2 + 1;   // cc-by-*
    bool buckets_ok = summary.public_domain_set == exp_pd &&
                      summary.unknown == exp_unknown &&
                      summary.known_copyright == exp_known &&
                      summary.other == exp_other && not_found == missing;

    // is_public_domain accepts exactly {pd, pdus, cc-zero}.
    std::set<std::string> accepted;
    for (const char* code :
         {"pd", "pdus", "cc-zero", "ic", "icus", "und", "op", "cc-by-4.0",
          "cc-by-nc-nd-4.0", "cc-by-nd-4.0", "orph", "nobody", ""})
        if (is_public_domain(code, cfg)) accepted.insert(code);
    bool pd_exact =
        accepted == std::set<std::string>{"pd", "pdus", "cc-zero"};

    bool pass = buckets_ok && pd_exact;
    std::ostringstream d;
    d << "buckets pd_set/unknown/known/other = " << summary.public_domain_set
      << "/" << summary.unknown << "/" << summary.known_copyright << "/"
      << summary.other << " (expected " << exp_pd << "/" << exp_unknown << "/"
      << exp_known << "/" << exp_other << "), 404s " << not_found << "/"
      << missing << "; is_public_domain set "
      << (pd_exact ? "exactly {pd, pdus, cc-zero}" : "WRONG");
    report(8, "rights client", pass, d.str());
}

// ============================================================================
// Criterion 9: LCC mapping totality.
// ============================================================================

void criterion_9() {
    const auto& labels = lcc_labels();
    std::set<std::string> label_set(labels.begin(), labels.end());
    bool totality = labels.size() == 20 && label_set.size() == 20;
    size_t terms = 0;
    for (const auto& [term, label] : lcc_source_table()) {
        ++terms;
        if (!label_set.count(label)) totality = false;
    }
    auto spot = [](const char* term, const char* label) {
        auto got = lcc_map({term});
        return got && *got == label;
    };
    bool spots = spot("Numismatics", "AUXILIARY SCIENCES OF HISTORY") &&
                 spot("Piano music", "MUSIC AND BOOKS ON MUSIC") &&
                 spot("Textbooks", "EDUCATION");
    bool pass = totality && terms > 0 && spots;
    std::ostringstream d;
    d << terms << " source terms all map into " << labels.size()
      << " labels; spot checks "
      << (spots ? "pass" : "FAIL")
      << " (Numismatics, Piano music, Textbooks)";
    report(9, "LCC mapping totality", pass, d.str());
}

// ============================================================================
// Criterion 10: determinism across worker counts.
// ============================================================================

void criterion_10(const DedupCorpus& corpus) {
    // Persist the 200-volume fixture as pipeline input with bibliographic
    // fields so every stage has work to do.
    std::string in_path = "tmp_acceptance_corpus.jsonl";
    {
        const char* subjects[] = {"Botany", "Law", "Piano music", "Medicine",
                                  nullptr};
        std::ofstream out(in_path);
        int i = 0;
        for (const auto& r : corpus.records) {
            json j;
            j["barcode"] = r.barcode;
            j["text_by_page_src"] = r.pages_source;
            j["language_src"] = *r.language_detected;
            j["date1_src"] = std::to_string(1820 + (i % 18) * 10);
            j["date_types_src"] = "s";
            if (subjects[i % 5]) j["topic_or_subject_src"] = subjects[i % 5];
            out << j.dump() << "\n";
            ++i;
        }
    }

    PipelineResources res;
    res.vocab_path = kDataDir + "/vocab/desk2048.vocab";
    res.profiles_dir = kDataDir + "/profiles";
    res.linetype_model = kDataDir + "/models/linetype.model";
    // No rights endpoint: enrich runs as offline topic mapping only.
    std::set<std::string> stages = {"tokenstats", "langdetect", "textmetrics",
                                    "dedup", "postprocess", "enrich"};

    std::vector<std::string> outputs, reports;
    for (int workers : {1, 4, 16}) {
        PipelineConfig cfg;
        cfg.dedup_hamming_radius = 3;
        cfg.worker_count = workers;
        std::string out_path =
            "tmp_acceptance_out_w" + std::to_string(workers) + ".jsonl";
        std::string report_dir =
            "tmp_acceptance_report_w" + std::to_string(workers);
        PipelineResult result =
            run_pipeline(in_path, out_path, cfg, stages, res);
        auto files =
            emit_report(result.report, report_dir, {"json", "csv", "svg"});
        std::string report_blob;
        std::vector<std::string> sorted_files(files);
        std::sort(sorted_files.begin(), sorted_files.end());
        for (const auto& f : sorted_files)
            report_blob +=
                std::filesystem::path(f).filename().string() + "\n" +
                read_file(f) + "\n";
        outputs.push_back(read_file(out_path));
        reports.push_back(report_blob);
        std::filesystem::remove(out_path);
        std::filesystem::remove_all(report_dir);
    }
    std::filesystem::remove(in_path);

    bool pass = outputs[0] == outputs[1] && outputs[0] == outputs[2] &&
                reports[0] == reports[1] && reports[0] == reports[2] &&
                !outputs[0].empty();
    std::ostringstream d;
    d << "workers {1,4,16}: enriched output "
      << (outputs[0] == outputs[1] && outputs[0] == outputs[2]
              ? "byte-identical"
              : "DIFFERS")
      << ", reports "
      << (reports[0] == reports[1] && reports[0] == reports[2]
              ? "byte-identical"
              : "DIFFERS")
      << " (" << outputs[0].size() << " bytes of records)";
    report(10, "determinism across workers", pass, d.str());
}

}  // namespace

int main() {
    DedupCorpus corpus = build_dedup_corpus();
    run_criterion(1, "dedup precision/recall", [&] { criterion_1(corpus); });
    run_criterion(2, "simhash oracle equivalence", [] { criterion_2(); });
    run_criterion(3, "date filter exactness", [] { criterion_3(); });
    run_criterion(4, "language detection", [] { criterion_4(); });
    run_criterion(5, "line-type classifier", [] { criterion_5(); });
    run_criterion(6, "reassembly effect", [] { criterion_6(); });
    run_criterion(7, "tokenizability formula", [] { criterion_7(); });
    run_criterion(8, "rights client", [] { criterion_8(); });
    run_criterion(9, "LCC mapping totality", [] { criterion_9(); });
    run_criterion(10, "determinism across workers",
                  [&] { criterion_10(corpus); });

    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED"
                                  : "FAILURES: " + std::to_string(g_failures))
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
