#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "corpus/langdetect.hpp"
#include "corpus/tokenizer.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"build trigram profiles and tokenizer vocabularies"};
    app.require_subcommand(1);

    std::string seed_dir, out_dir;
    auto* profiles = app.add_subcommand(
        "profiles", "one .profile per seed text (language = file stem)");
    profiles->add_option("--seed-dir", seed_dir, "directory of <lang>.txt files")
        ->required();
    profiles->add_option("--out", out_dir, "profile output directory")
        ->required();

    std::vector<std::string> inputs;
    std::string vocab_out, vocab_name = "bpe";
    size_t vocab_size = 4096;
    auto* vocab = app.add_subcommand("vocab", "train a BPE vocabulary");
    vocab->add_option("--input", inputs, "sample text files")->required();
    vocab->add_option("--out", vocab_out, "vocabulary output path")->required();
    vocab->add_option("--size", vocab_size, "vocabulary size");
    vocab->add_option("--name", vocab_name, "tokenizer name");

    CLI11_PARSE(app, argc, argv);

    try {
        if (profiles->parsed()) {
            fs::create_directories(out_dir);
            std::vector<fs::path> seeds;
            for (const auto& entry : fs::directory_iterator(seed_dir))
                if (entry.path().extension() == ".txt")
                    seeds.push_back(entry.path());
            std::sort(seeds.begin(), seeds.end());
            for (const auto& seed : seeds) {
                std::string lang = seed.stem().string();
                auto profile =
                    corpus::TrigramProfile::from_text(lang, slurp(seed.string()));
                std::string out = out_dir + "/" + lang + ".profile";
                profile.save(out);
                std::cout << lang << ": " << profile.ranked_trigrams().size()
                          << " trigrams -> " << out << "\n";
            }
            return 0;
        }
        if (vocab->parsed()) {
            std::string sample;
            for (const auto& path : inputs) {
                sample += slurp(path);
                sample += '\n';
            }
            auto tok = corpus::BpeTokenizer::train(sample, vocab_size, vocab_name);
            tok.save(vocab_out);
            std::cout << vocab_name << ": " << tok.vocab_size()
                      << " entries -> " << vocab_out << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
