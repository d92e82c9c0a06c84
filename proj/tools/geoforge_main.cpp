// SPDX-License-Identifier: Apache-2.0
//
// geoforge CLI: generate / solve / render / score / pipeline / stats /
// pairgen subcommands over the shared C API.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geoforge.h"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct CliError {
    int exit_code;
    std::string message;
};

[[noreturn]] void die(int code, const std::string& message) {
    throw CliError{code, message};
}

int exit_code_for(gf_status status) {
    return status == GF_ERR_INVALID_ARGUMENT ? 2 : 1;
}

void check(gf_status status, const std::string& context) {
    if (status == GF_OK) return;
    die(exit_code_for(status), context + ": " + gf_status_name(status) + " (" +
                                   gf_last_error() + ")");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) die(1, "cannot read " + path);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) die(1, "cannot write " + path);
    out << content;
    if (!out) die(1, "failed writing " + path);
}

struct OwnedString {
    char* value = nullptr;
    ~OwnedString() { gf_string_free(value); }
    std::string str() const { return value ? value : ""; }
};

struct OwnedProgram {
    gf_program* value = nullptr;
    ~OwnedProgram() { gf_program_free(value); }
};

struct OwnedSolution {
    gf_solution* value = nullptr;
    ~OwnedSolution() { gf_solution_free(value); }
};

// Merged configuration sources: flag > config file > built-in default.
struct CliConfig {
    json file;  // contents of geoforge.json (or --config-file)

    std::uint64_t seed(const std::optional<std::uint64_t>& flag) const {
        if (flag) return *flag;
        if (file.contains("seed")) return file["seed"].get<std::uint64_t>();
        if (const char* env = std::getenv("GEOFORGE_SEED"))
            return std::strtoull(env, nullptr, 10);
        return 0;
    }

    int jobs(const std::optional<int>& flag) const {
        if (flag) return *flag;
        if (file.contains("jobs")) return file["jobs"].get<int>();
        return 1;
    }
};

CliConfig load_cli_config(const std::string& explicit_path) {
    CliConfig cfg;
    cfg.file = json::object();
    std::string path = explicit_path;
    if (path.empty() && fs::exists("geoforge.json")) path = "geoforge.json";
    if (!path.empty()) {
        try {
            cfg.file = json::parse(read_file(path));
        } catch (const json::exception& e) {
            die(2, path + ": " + e.what());
        }
    }
    return cfg;
}

OwnedProgram parse_file(const std::string& path) {
    OwnedProgram p;
    std::string text = read_file(path);
    gf_status status = gf_program_parse(text.c_str(), &p.value);
    if (status != GF_OK)
        die(1, path + ": " + gf_status_name(status) + " (" + gf_last_error() + ")");
    return p;
}

void print_score_table(const std::string& report_json) {
    json r = json::parse(report_json);
    std::printf("Overall: %.2f\n", r["overall"].get<double>() * 100.0);
    std::printf("%-12s %8s %8s %8s\n", "category", "P", "R", "F1");
    for (const char* cat : {"points", "lines", "circles", "constraints"}) {
        std::printf("%-12s %8.2f %8.2f %8.2f\n", cat,
                    r[cat]["p"].get<double>() * 100.0,
                    r[cat]["r"].get<double>() * 100.0,
                    r[cat]["f1"].get<double>() * 100.0);
    }
}

void print_stats_table(const std::string& stats_json) {
    json s = json::parse(stats_json);
    std::printf("%5s %10s %10s %8s %8s %8s %8s %9s %12s\n", "iter", "requested",
                "attempted", "solved", "SR(%)", "points", "lines", "circles",
                "constraints");
    for (const auto& row : s["iterations"]) {
        const auto& mc = row["mean_counts"];
        std::printf("%5d %10d %10d %8d %8.1f %8.2f %8.2f %9.2f %12.2f%s\n",
                    row["iteration"].get<int>(), row["requested"].get<int>(),
                    row["attempted"].get<int>(), row["solved"].get<int>(),
                    row["success_rate"].get<double>(),
                    mc["points"].get<double>(), mc["lines"].get<double>(),
                    mc["circles"].get<double>(),
                    mc["constraints"].get<double>(),
                    row["budget_exhausted"].get<bool>() ? "  [budget exhausted]"
                                                        : "");
    }
}

// --------------------------------------------------------------- commands

int cmd_generate(int iterations, int count, std::uint64_t seed,
                 const std::string& out_dir, const std::string& gen_config) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) die(1, "cannot create " + out_dir + ": " + ec.message());
    json base = gen_config.empty() ? json::object()
                                   : json::parse(read_file(gen_config));
    for (int i = 0; i < count; ++i) {
        base["extra_steps"] = iterations;
        base["seed"] = seed + static_cast<std::uint64_t>(i);
        OwnedProgram p;
        check(gf_generate(base.dump().c_str(), &p.value), "generate");
        OwnedString text;
        check(gf_program_serialize(p.value, &text.value), "serialize");
        char name[64];
        std::snprintf(name, sizeof(name), "iter%d_%05d.geodsl", iterations, i);
        write_file((fs::path(out_dir) / name).string(), text.str());
    }
    std::printf("wrote %d programs to %s\n", count, out_dir.c_str());
    return 0;
}

int cmd_score(const std::string& truth_path, const std::string& pred_path,
              bool as_json, const std::string& weights) {
    OwnedProgram truth = parse_file(truth_path);
    OwnedProgram pred = parse_file(pred_path);
    OwnedString report;
    check(gf_score(truth.value, pred.value,
                   weights.empty() ? nullptr : weights.c_str(), &report.value),
          "score");
    if (as_json)
        std::printf("%s\n", report.str().c_str());
    else
        print_score_table(report.str());
    return 0;
}

int cmd_solve(const std::string& input, bool as_json, std::uint64_t seed,
              const std::string& solve_config, const std::string& out_path) {
    OwnedProgram p = parse_file(input);
    json cfg = solve_config.empty() ? json::object()
                                    : json::parse(read_file(solve_config));
    if (!cfg.contains("seed")) cfg["seed"] = seed;
    OwnedSolution s;
    check(gf_solve(p.value, cfg.dump().c_str(), &s.value), "solve");
    OwnedString result;
    check(gf_solution_to_json(s.value, &result.value), "solution");
    if (!out_path.empty()) write_file(out_path, result.str() + "\n");
    if (as_json)
        std::printf("%s\n", result.str().c_str());
    else
        std::printf("%s (%s iterations)\n",
                    gf_solution_solved(s.value) ? "Solved" : "Unsolvable",
                    json::parse(result.str())["iterations"].dump().c_str());
    // an unsolvable scene is a reported status, not a failure
    return 0;
}

int cmd_render(const std::string& input, const std::string& svg_out,
               const std::string& png_out, std::uint64_t seed,
               const std::string& solve_config, const std::string& render_config) {
    OwnedProgram p = parse_file(input);
    json scfg = solve_config.empty() ? json::object()
                                     : json::parse(read_file(solve_config));
    if (!scfg.contains("seed")) scfg["seed"] = seed;
    OwnedSolution s;
    check(gf_solve(p.value, scfg.dump().c_str(), &s.value), "solve");
    if (!gf_solution_solved(s.value)) die(1, input + ": unsolvable scene");
    std::string rcfg =
        render_config.empty() ? "" : json::parse(read_file(render_config)).dump();
    OwnedString svg;
    check(gf_render_svg(s.value, rcfg.empty() ? nullptr : rcfg.c_str(),
                        &svg.value),
          "render");
    write_file(svg_out, svg.str());
    if (!png_out.empty()) {
        unsigned char* bytes = nullptr;
        size_t len = 0;
        check(gf_rasterize_png(svg.value, rcfg.empty() ? nullptr : rcfg.c_str(),
                               &bytes, &len),
              "rasterize");
        std::ofstream out(png_out, std::ios::binary);
        if (!out) die(1, "cannot write " + png_out);
        out.write(reinterpret_cast<const char*>(bytes), static_cast<long>(len));
        gf_buffer_free(bytes);
    }
    std::printf("rendered %s\n", svg_out.c_str());
    return 0;
}

int cmd_pipeline(const std::string& config_path, const std::string& counts_flag,
                 std::optional<std::uint64_t> seed_flag,
                 std::optional<int> jobs_flag, bool png, const CliConfig& cli,
                 const std::string& out_dir) {
    json cfg = config_path.empty() ? json::object()
                                   : json::parse(read_file(config_path));
    if (!counts_flag.empty()) {
        json counts = json::object();
        std::stringstream ss(counts_flag);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto colon = item.find(':');
            if (colon == std::string::npos)
                die(2, "--counts expects iter:count pairs, got '" + item + "'");
            counts[item.substr(0, colon)] = std::stoi(item.substr(colon + 1));
        }
        cfg["counts"] = counts;
    }
    if (seed_flag || !cfg.contains("master_seed"))
        cfg["master_seed"] = cli.seed(seed_flag);
    if (jobs_flag || !cfg.contains("jobs")) cfg["jobs"] = cli.jobs(jobs_flag);
    if (png) cfg["render_png"] = true;
    OwnedString stats;
    check(gf_build_corpus(cfg.dump().c_str(), out_dir.c_str(), &stats.value),
          "pipeline");
    print_stats_table(stats.str());
    return 0;
}

int cmd_stats(const std::string& manifest, bool as_json) {
    OwnedString stats;
    check(gf_corpus_stats(manifest.c_str(), &stats.value), "stats");
    if (as_json)
        std::printf("%s", stats.str().c_str());
    else
        print_stats_table(stats.str());
    return 0;
}

int cmd_pairgen(const std::string& manifest, const std::string& out_path,
                const std::string& sampler, const std::string& sampler_cmd,
                const std::string& translator, const std::string& translator_cmd,
                int n_samples, double delta_min, int degradation,
                std::optional<std::uint64_t> seed_flag,
                std::optional<int> jobs_flag, const CliConfig& cli) {
    ordered_json cfg;
    cfg["sampler"] = sampler;
    if (!sampler_cmd.empty()) cfg["sampler_cmd"] = sampler_cmd;
    cfg["translator"] = translator;
    if (!translator_cmd.empty()) cfg["translator_cmd"] = translator_cmd;
    cfg["n_samples"] = n_samples;
    cfg["delta_min"] = delta_min;
    cfg["degradation_level"] = degradation;
    cfg["seed"] = cli.seed(seed_flag);
    cfg["jobs"] = cli.jobs(jobs_flag);
    OwnedString summary;
    check(gf_generate_pairs(manifest.c_str(), cfg.dump().c_str(),
                            out_path.c_str(), &summary.value),
          "pairgen");
    std::printf("%s\n", summary.str().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geoforge: generate, solve, render and score geometry-diagram "
                 "programs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(gf_version()));

    std::string config_file_path;
    app.add_option("--config-file", config_file_path,
                   "path to geoforge.json (default: ./geoforge.json when present)");

    // generate
    auto* generate = app.add_subcommand("generate", "sample programs to .geodsl files");
    int gen_iterations = 1, gen_count = 1;
    std::optional<std::uint64_t> gen_seed;
    std::string gen_out, gen_config;
    generate->add_option("--iterations", gen_iterations, "construction steps")
        ->check(CLI::NonNegativeNumber);
    generate->add_option("--count", gen_count, "number of programs")
        ->check(CLI::NonNegativeNumber);
    generate->add_option("--seed", gen_seed, "base RNG seed");
    generate->add_option("--out", gen_out, "output directory")->required();
    generate->add_option("--config", gen_config, "generator config JSON file");

    // score
    auto* score = app.add_subcommand("score", "score a prediction against ground truth");
    std::string truth_path, pred_path, weights_json;
    bool score_json = false;
    score->add_option("--truth", truth_path, "ground-truth .geodsl")->required();
    score->add_option("--pred", pred_path, "predicted .geodsl")->required();
    score->add_flag("--json", score_json, "emit the JSON report");
    score->add_option("--weights", weights_json,
                      "weights JSON object, e.g. {\"points\":0.25,...}");

    // solve
    auto* solve = app.add_subcommand("solve", "solve a program into numeric geometry");
    std::string solve_input, solve_cfg_path, solve_out;
    bool solve_json = false;
    std::optional<std::uint64_t> solve_seed;
    solve->add_option("input", solve_input, ".geodsl file")->required();
    solve->add_flag("--json", solve_json, "emit the solution JSON");
    solve->add_option("--seed", solve_seed, "solver seed");
    solve->add_option("--config", solve_cfg_path, "solver config JSON file");
    solve->add_option("--out", solve_out, "write the solution JSON to a file");

    // render
    auto* render = app.add_subcommand("render", "solve and render a program");
    std::string render_input, render_svg_out, render_png_out, render_cfg_path,
        render_solve_cfg;
    std::optional<std::uint64_t> render_seed;
    render->add_option("input", render_input, ".geodsl file")->required();
    render->add_option("--out", render_svg_out, "output SVG path")->required();
    render->add_option("--png", render_png_out, "also write a PNG");
    render->add_option("--seed", render_seed, "solver seed");
    render->add_option("--solve-config", render_solve_cfg, "solver config JSON file");
    render->add_option("--render-config", render_cfg_path, "render config JSON file");

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "build a corpus end to end");
    std::string pipe_cfg_path, pipe_counts, pipe_out;
    std::optional<std::uint64_t> pipe_seed;
    std::optional<int> pipe_jobs;
    bool pipe_png = false;
    pipeline->add_option("--config", pipe_cfg_path, "pipeline config JSON file");
    pipeline->add_option("--counts", pipe_counts,
                         "inline counts, e.g. 1:100,2:50");
    pipeline->add_option("--seed", pipe_seed, "master seed");
    pipeline->add_option("--jobs", pipe_jobs, "worker threads")
        ->check(CLI::PositiveNumber);
    pipeline->add_flag("--png", pipe_png, "also rasterize PNGs");
    pipeline->add_option("--out", pipe_out, "output directory")->required();

    // stats
    auto* stats = app.add_subcommand("stats", "per-iteration corpus statistics");
    std::string stats_manifest;
    bool stats_json = false;
    stats->add_option("manifest", stats_manifest, "manifest.jsonl")->required();
    stats->add_flag("--json", stats_json, "emit raw JSON");

    // pairgen
    auto* pairgen = app.add_subcommand("pairgen", "build preference pairs from a corpus");
    std::string pg_manifest, pg_out, pg_sampler = "stub", pg_sampler_cmd,
                pg_translator = "parser", pg_translator_cmd;
    int pg_samples = 10, pg_degradation = 2;
    double pg_delta = 0.3;
    std::optional<std::uint64_t> pg_seed;
    std::optional<int> pg_jobs;
    pairgen->add_option("--manifest", pg_manifest, "manifest.jsonl")->required();
    pairgen->add_option("--out", pg_out, "output pairs JSONL")->required();
    pairgen->add_option("--sampler", pg_sampler, "stub | process");
    pairgen->add_option("--sampler-cmd", pg_sampler_cmd,
                        "command for --sampler process");
    pairgen->add_option("--translator", pg_translator, "parser | process");
    pairgen->add_option("--translator-cmd", pg_translator_cmd,
                        "command for --translator process");
    pairgen->add_option("--n-samples", pg_samples, "samples per instance")
        ->check(CLI::Range(2, 1000));
    pairgen->add_option("--delta-min", pg_delta, "minimum score gap");
    pairgen->add_option("--degradation", pg_degradation,
                        "stub sampler corruption level")
        ->check(CLI::NonNegativeNumber);
    pairgen->add_option("--seed", pg_seed, "sampling seed");
    pairgen->add_option("--jobs", pg_jobs, "worker threads")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        CliConfig cli = load_cli_config(config_file_path);
        if (generate->parsed())
            return cmd_generate(gen_iterations, gen_count, cli.seed(gen_seed),
                                gen_out, gen_config);
        if (score->parsed())
            return cmd_score(truth_path, pred_path, score_json, weights_json);
        if (solve->parsed())
            return cmd_solve(solve_input, solve_json, cli.seed(solve_seed),
                             solve_cfg_path, solve_out);
        if (render->parsed())
            return cmd_render(render_input, render_svg_out, render_png_out,
                              cli.seed(render_seed), render_solve_cfg,
                              render_cfg_path);
        if (pipeline->parsed())
            return cmd_pipeline(pipe_cfg_path, pipe_counts, pipe_seed, pipe_jobs,
                                pipe_png, cli, pipe_out);
        if (stats->parsed()) return cmd_stats(stats_manifest, stats_json);
        if (pairgen->parsed())
            return cmd_pairgen(pg_manifest, pg_out, pg_sampler, pg_sampler_cmd,
                               pg_translator, pg_translator_cmd, pg_samples,
                               pg_delta, pg_degradation, pg_seed, pg_jobs, cli);
    } catch (const CliError& e) {
        std::fprintf(stderr, "geoforge: %s\n", e.message.c_str());
        return e.exit_code;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "geoforge: %s\n", e.what());
        return 2;
    }
    return 2;
}
