// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pipeline.hpp"

using namespace geoforge;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("geoforge_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

PipelineConfig small_config() {
    PipelineConfig cfg;
    cfg.master_seed = 31337;
    cfg.counts = {{1, 8}};
    return cfg;
}

}  // namespace

TEST_CASE("build_corpus reaches the requested count") {
    TempDir dir("build");
    CorpusStats stats = build_corpus(small_config(), dir.str());
    REQUIRE(stats.iterations.size() == 1);
    CHECK(stats.iterations[0].solved == 8);
    CHECK(stats.iterations[0].requested == 8);
    CHECK(!stats.iterations[0].budget_exhausted);
    CHECK(stats.iterations[0].success_rate > 0.0);
    CHECK(stats.iterations[0].success_rate <= 100.0);

    auto instances = load_corpus((dir.path / "manifest.jsonl").string());
    REQUIRE(instances.size() == 8);
    for (const auto& inst : instances) {
        CHECK(inst.solved);
        CHECK(inst.iteration == 1);
        CHECK(fs::exists(dir.path / inst.svg_path));
        CHECK(fs::exists(dir.path / (inst.id + ".geodsl")));
        CHECK(!has_errors(validate(inst.program)));
    }
    CHECK(fs::exists(dir.path / "stats.json"));
    CHECK(fs::exists(dir.path / "unsolvable.jsonl"));
}

TEST_CASE("empty request produces an empty corpus") {
    TempDir dir("empty");
    PipelineConfig cfg;
    CorpusStats stats = build_corpus(cfg, dir.str());
    CHECK(stats.iterations.empty());
    CHECK(slurp(dir.path / "manifest.jsonl").empty());
    CHECK(load_corpus((dir.path / "manifest.jsonl").string()).empty());
}

TEST_CASE("corpus build is deterministic and independent of worker count") {
    TempDir a("det_a"), b("det_b"), c("det_c");
    PipelineConfig cfg = small_config();
    cfg.counts = {{1, 5}, {2, 3}};
    build_corpus(cfg, a.str());
    build_corpus(cfg, b.str());
    cfg.jobs = 4;
    build_corpus(cfg, c.str());
    CHECK(slurp(a.path / "manifest.jsonl") == slurp(b.path / "manifest.jsonl"));
    CHECK(slurp(a.path / "manifest.jsonl") == slurp(c.path / "manifest.jsonl"));
    CHECK(slurp(a.path / "stats.json") == slurp(c.path / "stats.json"));
    for (const auto& inst : load_corpus((a.path / "manifest.jsonl").string()))
        CHECK(slurp(a.path / inst.svg_path) == slurp(c.path / inst.svg_path));
}

TEST_CASE("manifest round trip preserves instances") {
    TempDir dir("round");
    build_corpus(small_config(), dir.str());
    std::string manifest = (dir.path / "manifest.jsonl").string();
    auto first = load_corpus(manifest);
    auto second = load_corpus(manifest);
    REQUIRE(first.size() == second.size());
    for (size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].id == second[i].id);
        CHECK(first[i].program == second[i].program);
        CHECK(first[i].seed == second[i].seed);
    }
}

TEST_CASE("truncated manifest lines are corrupt records") {
    TempDir dir("trunc");
    build_corpus(small_config(), dir.str());
    std::string manifest = (dir.path / "manifest.jsonl").string();
    std::string content = slurp(manifest);
    std::ofstream out(manifest, std::ios::binary);
    out << content.substr(0, content.size() - 25);
    out.close();
    try {
        load_corpus(manifest);
        FAIL("expected CorruptRecord");
    } catch (const CorruptRecord& e) {
        CHECK(e.line() == 8);
        CHECK(std::string(e.what()).find("line 8") != std::string::npos);
    }
}

TEST_CASE("missing artifacts load with a warning") {
    TempDir dir("missing");
    build_corpus(small_config(), dir.str());
    auto instances = load_corpus((dir.path / "manifest.jsonl").string());
    fs::remove(dir.path / instances[2].svg_path);
    std::vector<std::string> warnings;
    auto reloaded = load_corpus((dir.path / "manifest.jsonl").string(), &warnings);
    CHECK(reloaded.size() == instances.size());
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find(instances[2].id) != std::string::npos);
}

TEST_CASE("missing manifest raises IOError") {
    CHECK_THROWS_AS(load_corpus("/nonexistent/manifest.jsonl"), IOError);
}

TEST_CASE("budget exhaustion is reported and the partial corpus kept") {
    TempDir dir("budget");
    PipelineConfig cfg;
    cfg.master_seed = 5;
    cfg.counts = {{5, 12}};  // iteration-5 scenes fail often
    cfg.budget_factor = 1.0; // one attempt per requested instance
    CorpusStats stats = build_corpus(cfg, dir.str());
    REQUIRE(stats.iterations.size() == 1);
    CHECK(stats.iterations[0].attempted == 12);
    CHECK(stats.iterations[0].solved < 12);
    CHECK(stats.iterations[0].budget_exhausted);
    auto instances = load_corpus((dir.path / "manifest.jsonl").string());
    CHECK(static_cast<int>(instances.size()) == stats.iterations[0].solved);
    // failures land in the side log
    CHECK(!slurp(dir.path / "unsolvable.jsonl").empty());
}

TEST_CASE("stats reload equals the build-time stats") {
    TempDir dir("stats");
    PipelineConfig cfg = small_config();
    cfg.counts = {{1, 4}, {3, 2}};
    CorpusStats built = build_corpus(cfg, dir.str());
    CorpusStats loaded = stats_for_manifest((dir.path / "manifest.jsonl").string());
    REQUIRE(loaded.iterations.size() == built.iterations.size());
    for (size_t i = 0; i < built.iterations.size(); ++i) {
        CHECK(loaded.iterations[i].iteration == built.iterations[i].iteration);
        CHECK(loaded.iterations[i].attempted == built.iterations[i].attempted);
        CHECK(loaded.iterations[i].solved == built.iterations[i].solved);
        CHECK(loaded.iterations[i].success_rate ==
              built.iterations[i].success_rate);
    }
    // reconstruction path: drop stats.json, rates come from the two logs
    fs::remove(dir.path / "stats.json");
    CorpusStats rebuilt = stats_for_manifest((dir.path / "manifest.jsonl").string());
    REQUIRE(rebuilt.iterations.size() == built.iterations.size());
    for (size_t i = 0; i < built.iterations.size(); ++i) {
        CHECK(rebuilt.iterations[i].solved == built.iterations[i].solved);
        CHECK(rebuilt.iterations[i].attempted == built.iterations[i].attempted);
    }
}

TEST_CASE("png artifacts are written when enabled") {
    TempDir dir("png");
    PipelineConfig cfg = small_config();
    cfg.counts = {{1, 2}};
    cfg.render_png = true;
    build_corpus(cfg, dir.str());
    auto instances = load_corpus((dir.path / "manifest.jsonl").string());
    REQUIRE(instances.size() == 2);
    for (const auto& inst : instances) {
        REQUIRE(!inst.png_path.empty());
        CHECK(fs::exists(dir.path / inst.png_path));
    }
}

TEST_CASE("pipeline config json") {
    PipelineConfig cfg = pipeline_config_from_json(
        "{\"master_seed\":9,\"counts\":{\"1\":10,\"3\":5},"
        "\"budget_factor\":2.5,\"jobs\":2,\"render_png\":true,"
        "\"gen\":{\"touch_point_prob\":0.4},\"solve\":{\"max_iters\":100},"
        "\"render\":{\"width\":128}}");
    CHECK(cfg.master_seed == 9);
    CHECK(cfg.counts.at(1) == 10);
    CHECK(cfg.counts.at(3) == 5);
    CHECK(cfg.budget_factor == 2.5);
    CHECK(cfg.jobs == 2);
    CHECK(cfg.render_png);
    CHECK(cfg.solve.max_iters == 100);
    CHECK(cfg.render.width == 128);
    CHECK_THROWS_AS(pipeline_config_from_json("{\"budget_factor\":0.5}"),
                    std::invalid_argument);
    CHECK_THROWS_AS(pipeline_config_from_json("{\"counts\":{\"1\":-2}}"),
                    std::invalid_argument);
}
