#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "corpus/report.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string input;
    std::string output;
    std::string vocab;
    std::string profiles;
    std::string model;
    std::string endpoint;
    std::string cache;
    std::string report_dir;
    std::string formats = "csv,json,svg";
    int workers = 0;
    uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_output) {
    cmd->add_option("input", o.input, "input JSON Lines file")->required();
    if (needs_output)
        cmd->add_option("-o,--output", o.output, "enriched JSON Lines output");
    cmd->add_option("-c,--config", o.config_path, "pipeline config file");
    cmd->add_option("--vocab", o.vocab, "tokenizer vocabulary file");
    cmd->add_option("--profiles", o.profiles, "trigram profile directory");
    cmd->add_option("--model", o.model, "line-type model file");
    cmd->add_option("--endpoint", o.endpoint, "rights API base URL");
    cmd->add_option("--cache", o.cache, "rights cache file");
    cmd->add_option("-j,--workers", o.workers, "worker thread count");
    cmd->add_option("--seed", o.seed, "random seed")
        ->each([&o](const std::string&) { o.seed_set = true; });
}

corpus::PipelineConfig make_config(const CommonOpts& o) {
    corpus::PipelineConfig cfg;
    if (!o.config_path.empty()) cfg = corpus::load_config(o.config_path);
    if (o.workers > 0) cfg.worker_count = o.workers;
    if (o.seed_set) cfg.seed = o.seed;
    auto problems = cfg.violations();
    if (!problems.empty()) {
        for (const auto& p : problems) std::cerr << "config: " << p << "\n";
        throw CLI::RuntimeError(2);
    }
    return cfg;
}

int run_stages(const CommonOpts& o, const std::set<std::string>& stages,
               bool emit) {
    corpus::PipelineConfig cfg = make_config(o);
    corpus::PipelineResources res;
    res.vocab_path = o.vocab;
    res.profiles_dir = o.profiles;
    res.linetype_model = o.model;
    res.rights_endpoint = o.endpoint;
    res.rights_cache = o.cache;

    auto result = corpus::run_pipeline(o.input, o.output, cfg, stages, res);
    for (const auto& e : result.errors)
        std::cerr << "line " << e.line_number << ": " << e.message << "\n";

    if (emit) {
        std::set<std::string> formats;
        std::stringstream ss(o.formats);
        std::string fmt;
        while (std::getline(ss, fmt, ','))
            if (!fmt.empty()) formats.insert(fmt);
        std::string dir = o.report_dir.empty() ? "report" : o.report_dir;
        for (const auto& path : corpus::emit_report(result.report, dir, formats))
            std::cout << "wrote " << path << "\n";
    } else {
        std::cout << result.report.to_json().dump(2) << "\n";
    }
    return 0;
}

int run_ingest(const CommonOpts& o) {
    auto result = corpus::read_volume_file(o.input);
    int64_t invalid = 0;
    for (const auto& r : result.records) {
        auto problems = corpus::validate_record(r);
        if (!problems.empty()) {
            ++invalid;
            for (const auto& p : problems)
                std::cerr << r.barcode << ": " << p << "\n";
        }
    }
    for (const auto& e : result.errors)
        std::cerr << "line " << e.line_number << ": " << e.message << "\n";
    std::cout << "records: " << result.records.size()
              << "  invalid: " << invalid
              << "  malformed lines: " << result.errors.size() << "\n";
    if (!o.output.empty()) {
        std::ofstream out(o.output);
        for (const auto& r : result.records)
            out << corpus::record_to_json(r).dump() << "\n";
    }
    return result.errors.empty() && invalid == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OCR book-corpus refinement pipeline"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* ingest = app.add_subcommand("ingest", "validate a corpus file");
    add_common(ingest, opts, true);

    auto* analyze = app.add_subcommand(
        "analyze", "token counts, language detection, text metrics");
    add_common(analyze, opts, true);

    auto* dedup = app.add_subcommand("dedup", "analyze plus duplicate grouping");
    add_common(dedup, opts, true);

    auto* post = app.add_subcommand(
        "postprocess", "analyze plus line typing and page reassembly");
    add_common(post, opts, true);

    auto* enrich =
        app.add_subcommand("enrich", "topic mapping and rights lookup");
    add_common(enrich, opts, true);

    auto* report =
        app.add_subcommand("report", "full pipeline plus report files");
    add_common(report, opts, true);
    report->add_option("--report-dir", opts.report_dir, "report output directory");
    report->add_option("--formats", opts.formats, "comma list: csv,json,svg");

    auto* all = app.add_subcommand("all", "alias for report");
    add_common(all, opts, true);
    all->add_option("--report-dir", opts.report_dir, "report output directory");
    all->add_option("--formats", opts.formats, "comma list: csv,json,svg");

    std::string labeled_path, model_out;
    auto* train = app.add_subcommand("train-linetype",
                                     "train the line-type model from a TSV");
    train->add_option("labeled", labeled_path, "labeled lines TSV")->required();
    train->add_option("-o,--output", model_out, "model output path")->required();

    std::string config_out;
    auto* dump = app.add_subcommand("config-dump", "write the default config");
    dump->add_option("output", config_out, "config file path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return run_ingest(opts);
        if (analyze->parsed())
            return run_stages(opts, {"tokenstats", "langdetect", "textmetrics"},
                              false);
        if (dedup->parsed())
            return run_stages(
                opts, {"tokenstats", "langdetect", "textmetrics", "dedup"},
                false);
        if (post->parsed())
            return run_stages(
                opts, {"tokenstats", "langdetect", "textmetrics", "postprocess"},
                false);
        if (enrich->parsed()) return run_stages(opts, {"enrich"}, false);
        if (report->parsed() || all->parsed()) {
            std::set<std::string> stages = {"tokenstats", "langdetect",
                                            "textmetrics", "dedup"};
            if (!opts.model.empty()) stages.insert("postprocess");
            stages.insert("enrich");
            return run_stages(opts, stages, true);
        }
        if (train->parsed()) {
            auto rows = corpus::load_labeled_lines(labeled_path);
            auto model = corpus::LineTypeModel::train(rows);
            model.save(model_out);
            std::cout << "trained on " << rows.size() << " lines, "
                      << model.classes().size() << " classes -> " << model_out
                      << "\n";
            return 0;
        }
        if (dump->parsed()) {
            corpus::save_config(corpus::PipelineConfig{}, config_out);
            std::cout << "wrote " << config_out << "\n";
            return 0;
        }
    } catch (const CLI::RuntimeError& e) {
        return e.get_exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
