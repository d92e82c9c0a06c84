// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared-library surface the way an external consumer would:
// through geoforge.h only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "geoforge.h"

namespace fs = std::filesystem;

namespace {

struct StringOut {
    char* value = nullptr;
    ~StringOut() { gf_string_free(value); }
    std::string str() const { return value ? value : ""; }
};

const char* kTriangle =
    "A = point(label=\"A\")\n"
    "B = point(label=\"B\")\n"
    "C = point(label=\"C\")\n"
    "line_1 = line(through=[A, B])\n"
    "line_2 = line(through=[B, C])\n"
    "line_3 = line(through=[C, A])\n";

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(gf_version()) == "0.1.0");
    CHECK(std::string(gf_status_name(GF_OK)) == "ok");
    CHECK(std::string(gf_status_name(GF_ERR_SYNTAX)) == "syntax-error");
}

TEST_CASE("parse, serialize and free round trip") {
    gf_program* p = nullptr;
    REQUIRE(gf_program_parse(kTriangle, &p) == GF_OK);
    StringOut text;
    REQUIRE(gf_program_serialize(p, &text.value) == GF_OK);
    CHECK(text.str().find("line_1 = line(through=[A, B])") != std::string::npos);

    int counts[4] = {};
    REQUIRE(gf_program_counts(p, counts) == GF_OK);
    CHECK(counts[0] == 3);
    CHECK(counts[1] == 3);
    CHECK(counts[2] == 0);
    CHECK(counts[3] == 0);
    gf_program_free(p);
}

TEST_CASE("parse errors map to status codes with messages") {
    gf_program* p = nullptr;
    CHECK(gf_program_parse("line_1 = line(through=[A, B])\n", &p) ==
          GF_ERR_REFERENCE);
    CHECK(std::string(gf_last_error()).find("undeclared") != std::string::npos);
    CHECK(gf_program_parse("A = point(label=\"A\"", &p) == GF_ERR_SYNTAX);
    CHECK(gf_program_parse("A = point(label=\"A\")\nB = point(label=\"A\")\n",
                           &p) == GF_ERR_DUPLICATE_LABEL);
}

TEST_CASE("validation report") {
    gf_program* p = nullptr;
    REQUIRE(gf_program_parse("c = circle(through=[])\n", &p) == GF_OK);
    StringOut json;
    REQUIRE(gf_program_validate(p, &json.value) == GF_OK);
    auto report = nlohmann::json::parse(json.str());
    CHECK(report["error_count"] == 0);
    CHECK(report["warning_count"] == 1);
    CHECK(report["violations"][0]["code"] == "empty-circle");
    gf_program_free(p);
}

TEST_CASE("generate respects the config json") {
    gf_program* p = nullptr;
    REQUIRE(gf_generate("{\"extra_steps\":0,\"seed\":7,\"init_probs\":"
                        "{\"triangle\":1.0,\"quadrilateral\":0,\"circle\":0}}",
                        &p) == GF_OK);
    int counts[4] = {};
    gf_program_counts(p, counts);
    CHECK(counts[0] == 3);
    CHECK(counts[1] == 3);
    gf_program_free(p);

    CHECK(gf_generate("{\"init_probs\":{\"triangle\":0.9,\"quadrilateral\":0.9,"
                      "\"circle\":0}}",
                      &p) == GF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("scoring through the C surface") {
    gf_program* truth = nullptr;
    gf_program* pred = nullptr;
    REQUIRE(gf_program_parse(kTriangle, &truth) == GF_OK);
    REQUIRE(gf_program_parse(kTriangle, &pred) == GF_OK);
    StringOut json;
    REQUIRE(gf_score(truth, pred, nullptr, &json.value) == GF_OK);
    auto report = nlohmann::json::parse(json.str());
    CHECK(report["points"]["f1"] == 1.0);
    CHECK(report["lines"]["f1"] == 1.0);

    StringOut weighted;
    CHECK(gf_score(truth, pred,
                   "{\"points\":0.7,\"lines\":0.3,\"circles\":0,"
                   "\"constraints\":0}",
                   &weighted.value) == GF_OK);
    auto wreport = nlohmann::json::parse(weighted.str());
    CHECK(wreport["overall"] == 1.0);

    CHECK(gf_score(truth, pred, "{\"points\":0.9}", &json.value) ==
          GF_ERR_INVALID_ARGUMENT);
    gf_program_free(truth);
    gf_program_free(pred);
}

TEST_CASE("solve render rasterize chain") {
    gf_program* p = nullptr;
    REQUIRE(gf_program_parse(kTriangle, &p) == GF_OK);
    gf_solution* s = nullptr;
    REQUIRE(gf_solve(p, "{\"seed\":17}", &s) == GF_OK);
    CHECK(gf_solution_solved(s) == 1);

    StringOut sol_json;
    REQUIRE(gf_solution_to_json(s, &sol_json.value) == GF_OK);
    auto sol = nlohmann::json::parse(sol_json.str());
    CHECK(sol["status"] == "Solved");
    CHECK(sol["points"].contains("A"));

    StringOut svg;
    REQUIRE(gf_render_svg(s, nullptr, &svg.value) == GF_OK);
    CHECK(svg.str().find("<svg") != std::string::npos);

    unsigned char* png = nullptr;
    size_t len = 0;
    REQUIRE(gf_rasterize_png(svg.value, nullptr, &png, &len) == GF_OK);
    CHECK(len > 8);
    CHECK(png[1] == 'P');
    gf_buffer_free(png);
    gf_solution_free(s);
    gf_program_free(p);
}

TEST_CASE("corpus build, stats and pair generation") {
    fs::path dir = fs::temp_directory_path() / "geoforge_capi_corpus";
    fs::remove_all(dir);

    StringOut stats;
    REQUIRE(gf_build_corpus("{\"master_seed\":11,\"counts\":{\"1\":4}}",
                            dir.string().c_str(), &stats.value) == GF_OK);
    auto sj = nlohmann::json::parse(stats.str());
    CHECK(sj["iterations"][0]["solved"] == 4);

    std::string manifest = (dir / "manifest.jsonl").string();
    StringOut stats2;
    REQUIRE(gf_corpus_stats(manifest.c_str(), &stats2.value) == GF_OK);
    CHECK(stats.str() == stats2.str());

    std::string pairs_path = (dir / "pairs.jsonl").string();
    StringOut summary;
    REQUIRE(gf_generate_pairs(manifest.c_str(),
                              "{\"n_samples\":6,\"delta_min\":0.2,"
                              "\"degradation_level\":2,\"seed\":3}",
                              pairs_path.c_str(), &summary.value) == GF_OK);
    auto sum = nlohmann::json::parse(summary.str());
    CHECK(sum["instances"] == 4);
    std::ifstream pairs_file(pairs_path);
    std::string line;
    int n_pairs = 0;
    while (std::getline(pairs_file, line)) {
        auto pj = nlohmann::json::parse(line);
        CHECK(pj["s_w"].get<double>() - pj["s_l"].get<double>() > 0.2);
        ++n_pairs;
    }
    CHECK(n_pairs == sum["pairs"].get<int>());
    fs::remove_all(dir);
}

TEST_CASE("null arguments are rejected politely") {
    CHECK(gf_program_parse(nullptr, nullptr) == GF_ERR_INVALID_ARGUMENT);
    CHECK(gf_solution_solved(nullptr) == 0);
    StringOut out;
    CHECK(gf_corpus_stats("/nope/missing.jsonl", &out.value) == GF_ERR_IO);
}
