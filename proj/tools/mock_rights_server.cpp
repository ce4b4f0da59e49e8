#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "corpus/util.hpp"

namespace {

// Code weights modeled on a large digitized-book collection.
const std::vector<std::pair<std::string, int>> kCodeWeights = {
    {"pd", 7315},  {"pdus", 1823}, {"ic", 157},     {"und", 37},
    {"cc-zero", 4}, {"cc-by-4.0", 2}, {"icus", 1},  {"op", 1},
};

std::string assign_code(const std::string& htid, uint64_t seed) {
    int total = 0;
    for (const auto& [code, w] : kCodeWeights) total += w;
    uint64_t h = corpus::fnv1a64(htid, seed);
    int pick = static_cast<int>(h % static_cast<uint64_t>(total));
    for (const auto& [code, w] : kCodeWeights) {
        if (pick < w) return code;
        pick -= w;
    }
    return kCodeWeights.back().first;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic mock of the rights determination API"};

    int port = 8089;
    uint64_t seed = 1;
    double miss_rate = 0.0;
    int fail_first = 0;
    std::string assignments_path;
    app.add_option("--port", port, "listen port (0 = pick a free port)");
    app.add_option("--seed", seed, "assignment seed");
    app.add_option("--miss-rate", miss_rate,
                   "fraction of ids that return 404 (hash-assigned)");
    app.add_option("--fail-first", fail_first,
                   "return 500 for the first N requests (retry testing)");
    app.add_option("--assignments", assignments_path,
                   "JSONL of {htid, rights_code}; unknown ids get 404");

    CLI11_PARSE(app, argc, argv);

    std::map<std::string, std::string> assignments;
    bool use_file = !assignments_path.empty();
    if (use_file) {
        std::ifstream in(assignments_path);
        if (!in) {
            std::cerr << "cannot read " << assignments_path << "\n";
            return 1;
        }
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object()) continue;
            assignments[j.value("htid", "")] = j.value("rights_code", "");
        }
        assignments.erase("");
    }

    httplib::Server server;
    std::atomic<int> remaining_failures{fail_first};

    server.Get("/rights/(.+)", [&](const httplib::Request& req,
                                   httplib::Response& res) {
        if (remaining_failures.fetch_sub(1) > 0) {
            res.status = 500;
            res.set_content("try again", "text/plain");
            return;
        }
        remaining_failures.store(0);
        std::string htid = req.matches[1];
        std::string code;
        if (use_file) {
            auto it = assignments.find(htid);
            if (it == assignments.end()) {
                res.status = 404;
                return;
            }
            code = it->second;
        } else {
            if (miss_rate > 0.0) {
                uint64_t h = corpus::fnv1a64(htid, seed ^ 0x404ULL);
                if (static_cast<double>(h % 10000) < miss_rate * 10000.0) {
                    res.status = 404;
                    return;
                }
            }
            code = assign_code(htid, seed);
        }
        nlohmann::ordered_json body;
        body["htid"] = htid;
        body["rights_code"] = code;
        body["reason_code"] = "bib";
        body["url"] = "https://hdl.handle.net/2027/" + htid;
        res.set_content(body.dump(), "application/json");
    });

    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok", "text/plain");
    });

    if (port == 0) {
        port = server.bind_to_any_port("127.0.0.1");
        if (port < 0) {
            std::cerr << "bind failed\n";
            return 1;
        }
        std::cout << "listening on " << port << std::endl;
        return server.listen_after_bind() ? 0 : 1;
    }
    std::cout << "listening on " << port << std::endl;
    return server.listen("127.0.0.1", port) ? 0 : 1;
}
