#include "corpus/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "corpus/dedup.hpp"
#include "corpus/reassembly.hpp"
#include "corpus/textmetrics.hpp"

namespace fs = std::filesystem;

namespace corpus {

const std::vector<std::string>& pipeline_stage_names() {
    static const std::vector<std::string> names = {
        "tokenstats", "langdetect", "textmetrics",
        "dedup",      "postprocess", "enrich"};
    return names;
}

void validate_stages(const std::set<std::string>& stages,
                     const PipelineResources& resources) {
    const auto& known = pipeline_stage_names();
    for (const auto& s : stages)
        if (std::find(known.begin(), known.end(), s) == known.end())
            throw std::invalid_argument("unknown stage: " + s);
    auto need = [&](const char* stage, const char* dep) {
        if (stages.count(stage) && !stages.count(dep))
            throw std::invalid_argument(std::string(stage) + " requires the " +
                                        dep + " stage");
    };
    need("dedup", "langdetect");
    need("postprocess", "langdetect");
    auto need_resource = [&](const char* stage, const std::string& value,
                             const char* what) {
        if (stages.count(stage) && value.empty())
            throw std::invalid_argument(std::string(stage) + " requires " +
                                        what);
    };
    need_resource("tokenstats", resources.vocab_path, "a tokenizer vocabulary");
    need_resource("langdetect", resources.vocab_path, "a tokenizer vocabulary");
    need_resource("langdetect", resources.profiles_dir, "a profile directory");
    need_resource("textmetrics", resources.vocab_path, "a tokenizer vocabulary");
    need_resource("textmetrics", resources.profiles_dir, "a profile directory");
    need_resource("postprocess", resources.linetype_model,
                  "a line-type model file");
}

namespace {

void accumulate(ScoreStats& stats, const std::vector<double>& values) {
    stats.count = static_cast<int64_t>(values.size());
    if (values.empty()) return;
    double sum = 0.0;
    for (double v : values) sum += v;
    stats.mean = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - stats.mean) * (v - stats.mean);
    stats.stddev = std::sqrt(var / static_cast<double>(values.size()));
}

std::string join_pages(const std::vector<std::string>& pages) {
    std::string out;
    for (size_t i = 0; i < pages.size(); ++i) {
        if (i) out += '\n';
        out += pages[i];
    }
    return out;
}

// Runs fn(i) for i in [0, n) across the given number of workers.
void parallel_for(size_t n, int workers,
                  const std::function<void(size_t)>& fn) {
    if (workers <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    int count = std::min<int>(workers, static_cast<int>(n));
    pool.reserve(static_cast<size_t>(count));
    for (int w = 0; w < count; ++w)
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                fn(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

PipelineResult run_pipeline(const std::string& input_path,
                            const std::string& output_path,
                            const PipelineConfig& config,
                            const std::set<std::string>& stages,
                            const PipelineResources& resources) {
    validate_stages(stages, resources);

    std::optional<BpeTokenizer> tokenizer;
    if (!resources.vocab_path.empty())
        tokenizer = BpeTokenizer::load(resources.vocab_path);
    std::map<std::string, TrigramProfile> profiles;
    if (!resources.profiles_dir.empty())
        profiles = load_profiles(resources.profiles_dir);
    std::optional<LineTypeModel> model;
    if (stages.count("postprocess"))
        model = LineTypeModel::load(resources.linetype_model);

    PipelineResult result;
    ReadResult input = read_volume_file(input_path);
    result.errors = std::move(input.errors);
    auto& records = input.records;

    std::sort(records.begin(), records.end(),
              [](const VolumeRecord& a, const VolumeRecord& b) {
                  return a.barcode < b.barcode;
              });
    for (size_t i = 0; i + 1 < records.size(); ++i)
        if (records[i].barcode == records[i + 1].barcode)
            throw std::runtime_error("duplicate barcode in corpus: " +
                                     records[i].barcode);

    const bool do_tokens = stages.count("tokenstats") > 0;
    const bool do_lang = stages.count("langdetect") > 0;
    const bool do_metrics = stages.count("textmetrics") > 0;
    const bool do_dedup = stages.count("dedup") > 0;
    const bool do_post = stages.count("postprocess") > 0;
    const bool do_enrich = stages.count("enrich") > 0;

    std::vector<SimhashFingerprint> fingerprints(records.size());
    parallel_for(records.size(), config.worker_count, [&](size_t i) {
        VolumeRecord& r = records[i];
        std::string full_text = join_pages(r.pages_source);
        if (do_tokens) {
            TokenReport tr = make_token_report(r, *tokenizer);
            r.token_count = tr.total_tokens;
            r.textless = is_textless(r, *tokenizer, config);
        }
        if (do_lang) {
            auto dist = volume_distribution(r, profiles, *tokenizer, config);
            r.language_detected = main_language(dist);
            r.language_distribution = std::move(dist);
        }
        if (do_metrics) {
            std::string lang = r.language_detected.value_or(
                r.language_declared.value_or("eng"));
            r.analysis_source = analyze_text(full_text, lang, *tokenizer, config);
            if (auto q = ocr_quality(full_text, profiles, config))
                r.ocr_score_generated = q->score;
        }
        if (do_dedup) {
            fingerprints[i] = simhash(full_text, config, r.barcode);
            r.simhash_bits = fingerprints[i].bits;
        }
        if (do_post) {
            auto post = postprocess_volume(r, *model, config);
            if (post.status == VolumePostprocessResult::Status::processed) {
                r.pages_processed = std::move(post.pages_processed);
                if (do_metrics) {
                    std::string lang = r.language_detected.value_or("eng");
                    r.analysis_processed = analyze_text(
                        join_pages(*r.pages_processed), lang, *tokenizer, config);
                }
            }
        }
        if (do_enrich && r.topic_or_subject)
            if (auto topic = lcc_map(subject_terms(*r.topic_or_subject))) {
                r.topic_detected = topic;
                r.topic_score = 1.0;  // direct table match
            }
    });

    // Dedup grouping is a single-threaded reduction over the fingerprints.
    if (do_dedup) {
        std::map<std::string, const VolumeRecord*> by_barcode;
        for (const auto& r : records) by_barcode[r.barcode] = &r;
        auto groups = group_candidates(fingerprints, config);
        std::map<std::string, std::vector<std::string>> dup_of;
        int64_t member_total = 0;
        int64_t group_total = 0;
        for (const auto& g : groups) {
            auto filtered = filter_false_positives(g, by_barcode, config);
            if (filtered.dissolved) continue;
            ++group_total;
            member_total += static_cast<int64_t>(filtered.group.members.size());
            for (const auto& m : filtered.group.members) {
                for (const auto& other : filtered.group.members)
                    if (other != m) dup_of[m].push_back(other);
            }
        }
        for (auto& r : records) {
            auto it = dup_of.find(r.barcode);
            if (it != dup_of.end()) r.likely_duplicates = std::move(it->second);
        }
        result.report.dedup_groups = group_total;
        result.report.dedup_members = member_total;
        result.report.unique_text_volumes =
            static_cast<int64_t>(records.size()) - (member_total - group_total);
    } else {
        result.report.unique_text_volumes = static_cast<int64_t>(records.size());
    }

    // Rights resolution, cache-first, serial in barcode order.
    if (do_enrich && (!resources.rights_cache.empty() ||
                      !resources.rights_endpoint.empty())) {
        RightsCache cache = resources.rights_cache.empty()
                                ? RightsCache{}
                                : RightsCache::load(resources.rights_cache);
        HttpTransport transport = default_transport();
        for (auto& r : records) {
            auto barcode = Barcode::make(r.barcode);
            if (!barcode) continue;
            std::string htid = htid_for(*barcode);
            auto cached = cache.get(htid);
            if (cached) {
                r.rights = cached;
            } else if (!resources.rights_endpoint.empty()) {
                auto fetched =
                    fetch_rights(htid, resources.rights_endpoint, transport);
                if (fetched) {
                    r.rights = fetched;
                    cache.put(htid, *fetched);
                }
            }
        }
        if (!resources.rights_cache.empty()) cache.save(resources.rights_cache);
    }

    // Aggregate.
    CorpusReport& rep = result.report;
    rep.ingest_errors = static_cast<int64_t>(result.errors.size());
    std::vector<double> ocr_src_values, ocr_gen_values;
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_decade;
    std::vector<std::string> rights_codes;
    rep.volumes = static_cast<int64_t>(records.size());
    for (const auto& r : records) {
        rep.pages += static_cast<int64_t>(r.pages_source.size());
        if (r.token_count) rep.tokens += *r.token_count;
        if (r.textless && *r.textless) ++rep.textless_count;
        auto date = parse_publication_date(r.date1, r.date2, r.date_types);
        if (date) {
            ++rep.dated_count;
            auto bucket = bucket_temporal(date->year);
            rep.decade_histogram[bucket.decade] += 1;
            rep.century_histogram[bucket.century] += 1;
        }
        if (r.language_declared)
            rep.declared_language_volumes
                [normalize_language_code(*r.language_declared).code] += 1;
        if (r.language_detected)
            rep.detected_language_volumes[*r.language_detected] += 1;
        if (r.language_distribution)
            for (size_t k = 0; k < r.language_distribution->languages.size(); ++k)
                rep.language_token_totals[r.language_distribution->languages[k]] +=
                    r.language_distribution->token_totals[k];
        if (r.topic_detected) rep.topic_volumes[*r.topic_detected] += 1;
        if (r.ocr_score_source) {
            ocr_src_values.push_back(static_cast<double>(*r.ocr_score_source));
            if (date)
                by_decade[bucket_temporal(date->year).decade].first.push_back(
                    static_cast<double>(*r.ocr_score_source));
        }
        if (r.ocr_score_generated) {
            ocr_gen_values.push_back(
                static_cast<double>(*r.ocr_score_generated));
            if (date)
                by_decade[bucket_temporal(date->year).decade].second.push_back(
                    static_cast<double>(*r.ocr_score_generated));
        }
        if (r.rights) {
            ++rep.rights_queried;
            rights_codes.push_back(r.rights->rights_code);
        }
    }
    accumulate(rep.ocr_source_scores, ocr_src_values);
    accumulate(rep.ocr_generated_scores, ocr_gen_values);
    for (const auto& [decade, values] : by_decade) {
        auto& entry = rep.scores_by_decade[decade];
        accumulate(entry.first, values.first);
        accumulate(entry.second, values.second);
    }
    rep.rights = summarize_rights(rights_codes, config);

    // Enriched output, sorted by barcode.
    if (!output_path.empty()) {
        std::ofstream out(output_path);
        if (!out)
            throw std::runtime_error("cannot write output file: " + output_path);
        for (const auto& r : records) out << record_to_json(r).dump() << "\n";
    }
    return result;
}

json CorpusReport::to_json() const {
    json j;
    j["volumes"] = volumes;
    j["pages"] = pages;
    j["tokens"] = tokens;
    j["textless_count"] = textless_count;
    j["dated_count"] = dated_count;
    json decades = json::object();
    for (const auto& [d, c] : decade_histogram) decades[std::to_string(d)] = c;
    j["volumes_by_decade"] = decades;
    json centuries = json::object();
    for (const auto& [d, c] : century_histogram)
        centuries[std::to_string(d)] = c;
    j["volumes_by_century"] = centuries;
    j["declared_language_volumes"] = declared_language_volumes;
    j["detected_language_volumes"] = detected_language_volumes;
    j["language_token_totals"] = language_token_totals;
    j["topic_volumes"] = topic_volumes;
    j["dedup"] = {{"groups", dedup_groups},
                  {"members", dedup_members},
                  {"unique_text_volumes", unique_text_volumes}};
    j["ocr_score_src"] = {{"count", ocr_source_scores.count},
                          {"mean", ocr_source_scores.mean},
                          {"stddev", ocr_source_scores.stddev}};
    j["ocr_score_gen"] = {{"count", ocr_generated_scores.count},
                          {"mean", ocr_generated_scores.mean},
                          {"stddev", ocr_generated_scores.stddev}};
    j["rights"] = {{"public_domain_set", rights.public_domain_set},
                   {"unknown", rights.unknown},
                   {"known_copyright", rights.known_copyright},
                   {"other", rights.other},
                   {"queried", rights_queried}};
    j["ingest_errors"] = ingest_errors;
    return j;
}

namespace {

std::string fmt_pct(double num, double den) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f",
                  den > 0.0 ? 100.0 * num / den : 0.0);
    return buf;
}

void write_file(std::vector<std::string>& written, const std::string& path,
                const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report file: " + path);
    out << content;
    written.push_back(path);
}

template <typename Key>
std::string histogram_csv(const std::string& key_name,
                          const std::map<Key, int64_t>& hist, int64_t total,
                          const std::string& remainder_label = "") {
    std::string csv = key_name + ",total,percent\n";
    int64_t covered = 0;
    for (const auto& [key, count] : hist) {
        std::ostringstream row;
        row << key;
        csv += row.str() + "," + std::to_string(count) + "," +
               fmt_pct(static_cast<double>(count), static_cast<double>(total)) +
               "\n";
        covered += count;
    }
    if (!remainder_label.empty() && total > covered)
        csv += remainder_label + "," + std::to_string(total - covered) + "," +
               fmt_pct(static_cast<double>(total - covered),
                       static_cast<double>(total)) +
               "\n";
    return csv;
}

// Minimal static bar chart; fixed canvas so output is deterministic.
std::string svg_bar_chart(const std::string& title,
                          const std::vector<std::pair<std::string, double>>& bars) {
    const int width = 900, height = 420, margin = 60;
    double max_v = 0.0;
    for (const auto& [label, v] : bars) max_v = std::max(max_v, v);
    if (max_v <= 0.0) max_v = 1.0;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\">\n";
    out << "<text x=\"" << margin << "\" y=\"24\" font-size=\"16\">" << title
        << "</text>\n";
    if (!bars.empty()) {
        double slot = static_cast<double>(width - 2 * margin) /
                      static_cast<double>(bars.size());
        double bar_w = std::max(2.0, slot * 0.8);
        for (size_t i = 0; i < bars.size(); ++i) {
            double h = (height - 2 * margin) * bars[i].second / max_v;
            double x = margin + slot * static_cast<double>(i);
            double y = height - margin - h;
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" "
                          "height=\"%.1f\" fill=\"#4472a8\"/>\n",
                          x, y, bar_w, h);
            out << buf;
            std::snprintf(buf, sizeof(buf),
                          "<text x=\"%.1f\" y=\"%d\" font-size=\"9\" "
                          "transform=\"rotate(45 %.1f %d)\">%s</text>\n",
                          x, height - margin + 12, x, height - margin + 12,
                          bars[i].first.c_str());
            out << buf;
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace

std::vector<std::string> emit_report(const CorpusReport& report,
                                     const std::string& out_dir,
                                     const std::set<std::string>& formats) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir))
        throw std::runtime_error("cannot create report directory: " + out_dir);
    std::vector<std::string> written;
    auto path = [&](const std::string& name) { return out_dir + "/" + name; };

    if (formats.count("json"))
        write_file(written, path("report.json"), report.to_json().dump(2) + "\n");

    if (formats.count("csv")) {
        write_file(written, path("volumes_by_decade.csv"),
                   histogram_csv("decade", report.decade_histogram,
                                 report.dated_count));
        write_file(written, path("volumes_by_century.csv"),
                   histogram_csv("century", report.century_histogram,
                                 report.dated_count));
        write_file(written, path("languages_declared.csv"),
                   histogram_csv("language", report.declared_language_volumes,
                                 report.volumes, "(undeclared)"));
        write_file(written, path("languages_detected.csv"),
                   histogram_csv("language", report.detected_language_volumes,
                                 report.volumes, "(undetected)"));
        int64_t token_total = 0;
        for (const auto& [lang, t] : report.language_token_totals)
            token_total += t;
        write_file(written, path("language_tokens.csv"),
                   histogram_csv("language", report.language_token_totals,
                                 token_total));
        write_file(written, path("topics.csv"),
                   histogram_csv("topic", report.topic_volumes, report.volumes,
                                 "(unclassified)"));
        std::map<std::string, int64_t> rights_rows = {
            {"public_domain_set", report.rights.public_domain_set},
            {"unknown", report.rights.unknown},
            {"known_copyright", report.rights.known_copyright},
            {"other", report.rights.other}};
        write_file(
            written, path("rights.csv"),
            histogram_csv("bucket", rights_rows, report.rights.total()));
        std::string dedup_csv = "metric,value\n";
        dedup_csv += "groups," + std::to_string(report.dedup_groups) + "\n";
        dedup_csv += "members," + std::to_string(report.dedup_members) + "\n";
        dedup_csv += "unique_text_volumes," +
                     std::to_string(report.unique_text_volumes) + "\n";
        write_file(written, path("dedup.csv"), dedup_csv);
    }

    if (formats.count("svg")) {
        std::vector<std::pair<std::string, double>> decade_bars;
        for (const auto& [decade, count] : report.decade_histogram)
            decade_bars.emplace_back(std::to_string(decade),
                                     static_cast<double>(count));
        write_file(written, path("volumes_by_decade.svg"),
                   svg_bar_chart("Volumes by decade", decade_bars));
        std::vector<std::pair<std::string, double>> lang_bars;
        for (const auto& [lang, tokens] : report.language_token_totals)
            lang_bars.emplace_back(lang, static_cast<double>(tokens));
        write_file(written, path("language_tokens.svg"),
                   svg_bar_chart("Detected tokens by language", lang_bars));
        std::vector<std::pair<std::string, double>> score_bars;
        for (const auto& [decade, scores] : report.scores_by_decade)
            score_bars.emplace_back(std::to_string(decade), scores.second.mean);
        write_file(written, path("ocr_scores_by_decade.svg"),
                   svg_bar_chart("Mean generated OCR score by decade",
                                 score_bars));
    }
    return written;
}

}  // namespace corpus
