#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "corpus/linetype.hpp"
#include "support/synth.hpp"

using namespace corpus;

namespace {

const std::string kDataDir = CORPUS_DATA_DIR;

}  // namespace

TEST_CASE("line type names round-trip") {
    for (size_t i = 0; i < kLineTypeCount; ++i) {
        auto t = static_cast<LineType>(i);
        auto back = line_type_from_name(line_type_name(t));
        REQUIRE(back);
        CHECK(*back == t);
    }
    CHECK_FALSE(line_type_from_name("NOT_A_TYPE"));
}

TEST_CASE("positional format round-trips and rejects malformed input") {
    PositionalLine line{"— 214 —", 5, 300, 1, 40};
    std::string s = format_positional(line);
    CHECK(s == "<<5/300|1/40>> — 214 —");
    auto back = parse_positional(s);
    REQUIRE(back);
    CHECK(*back == line);

    // Text containing the marker sequence still parses: the first ">> "
    // closes the header.
    PositionalLine tricky{"a >> b", 1, 2, 3, 4};
    back = parse_positional(format_positional(tricky));
    REQUIRE(back);
    CHECK(*back == tricky);

    // Empty text is representable.
    PositionalLine empty{"", 1, 1, 1, 1};
    back = parse_positional(format_positional(empty));
    REQUIRE(back);
    CHECK(*back == empty);

    CHECK_FALSE(parse_positional("plain text"));
    CHECK_FALSE(parse_positional("<<1/2|3/4> missing close"));
    CHECK_FALSE(parse_positional("<<1/2,3/4>> wrong separators"));
    CHECK_FALSE(parse_positional("<<0/2|1/4>> page index below 1"));
    CHECK_FALSE(parse_positional("<<3/2|1/4>> page past total"));
    CHECK_FALSE(parse_positional("<<1/2|9/4>> line past total"));
}

TEST_CASE("training rejects tiny or single-class data") {
    std::vector<std::pair<PositionalLine, LineType>> few;
    for (int i = 0; i < 99; ++i)
        few.push_back({{"text", 1, 1, 1, 1},
                       i % 2 ? LineType::PAGE_NUMBER
                             : LineType::PARAGRAPH_CHUNK});
    CHECK_THROWS(LineTypeModel::train(few));

    std::vector<std::pair<PositionalLine, LineType>> mono;
    for (int i = 0; i < 150; ++i)
        mono.push_back({{"text", 1, 1, 1, 1}, LineType::PARAGRAPH_CHUNK});
    CHECK_THROWS(LineTypeModel::train(mono));
}

namespace {

// A cleanly separable two-class problem: bare page numbers against prose.
std::vector<std::pair<PositionalLine, LineType>> two_class_data(uint64_t seed,
                                                               int count) {
    synth::Rng rng(seed);
    std::vector<std::pair<PositionalLine, LineType>> rows;
    for (int i = 0; i < count; ++i) {
        int total_lines = 40;
        if (i % 2 == 0) {
            rows.push_back({{synth::page_number_line(rng, 1 + int(rng() % 400)),
                             1 + int(rng() % 20), 20, 1, total_lines},
                            LineType::PAGE_NUMBER});
        } else {
            rows.push_back({{synth::sentence(rng, "eng", 8, 14),
                             1 + int(rng() % 20), 20,
                             5 + int(rng() % 30), total_lines},
                            LineType::PARAGRAPH_CHUNK});
        }
    }
    return rows;
}

}  // namespace

TEST_CASE("a separable two-class problem is learned perfectly") {
    auto train_rows = two_class_data(41, 400);
    LineTypeModel model = LineTypeModel::train(train_rows);
    CHECK(model.classes().size() == 2);

    auto test_rows = two_class_data(42, 200);
    int correct = 0;
    for (const auto& [line, type] : test_rows) {
        LineTypePrediction p = model.predict(line);
        if (p.line_type == type) ++correct;
        // Probabilities are a proper distribution.
        double sum = 0.0;
        for (double v : p.class_probabilities) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0));
        CHECK(p.confidence ==
              doctest::Approx(*std::max_element(
                  p.class_probabilities.begin(), p.class_probabilities.end())));
    }
    CHECK(correct == static_cast<int>(test_rows.size()));
}

TEST_CASE("saved models reload with bit-identical predictions") {
    LineTypeModel model = LineTypeModel::train(two_class_data(43, 300));
    std::string path = "tmp_linetype.model";
    model.save(path);
    LineTypeModel back = LineTypeModel::load(path);
    std::filesystem::remove(path);

    CHECK(back.classes() == model.classes());
    for (const auto& [line, type] : two_class_data(44, 50)) {
        LineTypePrediction a = model.predict(line);
        LineTypePrediction b = back.predict(line);
        CHECK(a.line_type == b.line_type);
        REQUIRE(a.class_probabilities.size() == b.class_probabilities.size());
        for (size_t i = 0; i < a.class_probabilities.size(); ++i)
            CHECK(a.class_probabilities[i] == b.class_probabilities[i]);
    }
    CHECK_THROWS(LineTypeModel::load("no_such.model"));
}

TEST_CASE("labeled line TSV round-trip") {
    auto rows = synth::labeled_lines(120, 77);
    std::string path = "tmp_lines.tsv";
    save_labeled_lines(rows, path);
    auto back = load_labeled_lines(path);
    std::filesystem::remove(path);
    REQUIRE(back.size() == rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].first == rows[i].first);
        CHECK(back[i].second == rows[i].second);
    }
}

TEST_CASE("bundled fixture and model behave as documented") {
    auto rows = load_labeled_lines(kDataDir + "/fixtures/linetype/lines.tsv");
    CHECK(rows.size() >= 2000);

    LineTypeModel model =
        LineTypeModel::load(kDataDir + "/models/linetype.model");
    CHECK(model.classes().size() >= 8);

    // An em-dash page number on the first line of a page.
    LineTypePrediction p = model.predict({"— 214 —", 5, 300, 1, 40});
    CHECK(p.line_type == LineType::PAGE_NUMBER);
    CHECK(p.confidence > 0.5);

    // A long prose line in the middle of a page.
    synth::Rng rng(55);
    std::string prose;
    while (prose.size() < 400) prose += synth::sentence(rng, "eng", 8, 14) + " ";
    prose = prose.substr(0, 400);
    p = model.predict({prose, 10, 300, 20, 40});
    CHECK(p.line_type == LineType::PARAGRAPH_CHUNK);
}
