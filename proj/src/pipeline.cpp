// SPDX-License-Identifier: Apache-2.0
#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "raster.hpp"
#include "rng.hpp"

namespace fs = std::filesystem;

namespace geoforge {

namespace {

std::string instance_id(int iteration, int seq) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "iter%d_%05d", iteration, seq);
    return buf;
}

struct AttemptResult {
    std::uint64_t seed = 0;
    GeoProgram program;
    SolveResult solution;
    std::string svg;  // rendered only when solved
};

AttemptResult run_attempt(const PipelineConfig& cfg, int iteration, int attempt) {
    AttemptResult out;
    out.seed = derive_seed(cfg.master_seed,
                           {static_cast<std::uint64_t>(iteration),
                            static_cast<std::uint64_t>(attempt)});
    GenConfig gen = cfg.gen;
    gen.extra_steps = iteration;
    gen.seed = out.seed;
    out.program = generate(gen);
    SolveConfig solve_cfg = cfg.solve;
    solve_cfg.seed = derive_seed(out.seed, {1});
    out.solution = solve(out.program, solve_cfg);
    if (out.solution.solved())
        out.svg = render_svg(out.solution, out.program, cfg.render);
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IOError("cannot open " + path.string() + " for writing");
    f << content;
    if (!f) throw IOError("failed writing " + path.string());
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IOError("cannot open " + path.string() + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IOError("failed writing " + path.string());
}

}  // namespace

CorpusStats build_corpus(const PipelineConfig& cfg, const std::string& out_dir) {
    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IOError("cannot create " + out_dir + ": " + ec.message());

    std::ofstream manifest(dir / "manifest.jsonl", std::ios::binary);
    std::ofstream unsolvable(dir / "unsolvable.jsonl", std::ios::binary);
    if (!manifest || !unsolvable) throw IOError("cannot open outputs in " + out_dir);

    CorpusStats stats;
    stats.master_seed = cfg.master_seed;

    const int jobs = std::max(1, cfg.jobs);
    for (const auto& [iteration, requested] : cfg.counts) {
        const int budget = std::max(
            requested, static_cast<int>(requested * cfg.budget_factor + 0.5));
        IterationStats it;
        it.iteration = iteration;
        it.requested = requested;

        long points = 0, lines = 0, circles = 0, constraints = 0;
        int next_attempt = 0;
        while (it.solved < requested && next_attempt < budget) {
            int wave = std::min(budget - next_attempt,
                                std::max(jobs, (requested - it.solved) * 2));
            std::vector<AttemptResult> results(wave);
            if (jobs == 1) {
                for (int w = 0; w < wave; ++w)
                    results[w] = run_attempt(cfg, iteration, next_attempt + w);
            } else {
                std::vector<std::thread> workers;
                std::atomic<int> cursor{0};
                for (int t = 0; t < jobs; ++t)
                    workers.emplace_back([&] {
                        for (int w = cursor.fetch_add(1); w < wave;
                             w = cursor.fetch_add(1))
                            results[w] = run_attempt(cfg, iteration, next_attempt + w);
                    });
                for (auto& t : workers) t.join();
            }
            // consume in attempt order so worker count cannot change output
            for (int w = 0; w < wave && it.solved < requested; ++w) {
                AttemptResult& r = results[w];
                ++it.attempted;
                nlohmann::ordered_json record;
                record["schema"] = 1;
                if (r.solution.solved()) {
                    std::string id = instance_id(iteration, it.solved);
                    record["id"] = id;
                    record["iteration"] = iteration;
                    record["seed"] = r.seed;
                    record["status"] = "Solved";
                    std::string text = serialize_program(r.program);
                    record["program"] = text;
                    write_file(dir / (id + ".geodsl"), text);
                    write_file(dir / (id + ".svg"), r.svg);
                    record["svg"] = id + ".svg";
                    if (cfg.render_png) {
                        Image img = rasterize_svg(r.svg, cfg.render.width,
                                                  cfg.render.height);
                        write_bytes(dir / (id + ".png"), encode_png(img));
                        record["png"] = id + ".png";
                    }
                    record["iterations"] = r.solution.iterations;
                    manifest << record.dump() << "\n";
                    ++it.solved;
                    points += r.program.points.size();
                    lines += r.program.lines.size();
                    circles += r.program.circles.size();
                    constraints += r.program.constraints.size();
                } else {
                    record["id"] = "";
                    record["iteration"] = iteration;
                    record["seed"] = r.seed;
                    record["status"] = "Unsolvable";
                    record["program"] = serialize_program(r.program);
                    record["iterations"] = r.solution.iterations;
                    unsolvable << record.dump() << "\n";
                }
            }
            next_attempt += wave;
        }
        it.budget_exhausted = it.solved < requested;
        it.success_rate =
            it.attempted ? 100.0 * it.solved / it.attempted : 0.0;
        if (it.solved > 0) {
            it.mean_points = static_cast<double>(points) / it.solved;
            it.mean_lines = static_cast<double>(lines) / it.solved;
            it.mean_circles = static_cast<double>(circles) / it.solved;
            it.mean_constraints = static_cast<double>(constraints) / it.solved;
        }
        stats.iterations.push_back(it);
    }
    manifest.flush();
    unsolvable.flush();
    if (!manifest || !unsolvable) throw IOError("failed writing outputs");
    write_file(dir / "stats.json", corpus_stats_to_json(stats));
    return stats;
}

std::vector<Instance> load_corpus(const std::string& manifest_path,
                                  std::vector<std::string>* warnings) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw IOError("cannot open " + manifest_path);
    fs::path base = fs::path(manifest_path).parent_path();

    std::vector<Instance> instances;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        Instance inst;
        try {
            nlohmann::json j = nlohmann::json::parse(line);
            inst.id = j.at("id").get<std::string>();
            inst.iteration = j.at("iteration").get<int>();
            inst.seed = j.at("seed").get<std::uint64_t>();
            inst.program_text = j.at("program").get<std::string>();
            inst.solved = j.at("status").get<std::string>() == "Solved";
            inst.svg_path = j.value("svg", std::string());
            inst.png_path = j.value("png", std::string());
            inst.solver_iterations = j.value("iterations", 0);
        } catch (const nlohmann::json::exception& e) {
            throw CorruptRecord(line_no, e.what());
        }
        try {
            inst.program = parse_program(inst.program_text);
        } catch (const ParseError& e) {
            throw CorruptRecord(line_no, std::string("program: ") + e.what());
        }
        if (has_errors(validate(inst.program)))
            throw CorruptRecord(line_no, "program fails validation");
        if (warnings && !inst.svg_path.empty() && !fs::exists(base / inst.svg_path))
            warnings->push_back(inst.id + ": missing artifact " + inst.svg_path);
        instances.push_back(std::move(inst));
    }
    return instances;
}

std::string corpus_stats_to_json(const CorpusStats& stats) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["master_seed"] = stats.master_seed;
    nlohmann::ordered_json arr = nlohmann::json::array();
    for (const auto& it : stats.iterations) {
        nlohmann::ordered_json row;
        row["iteration"] = it.iteration;
        row["requested"] = it.requested;
        row["attempted"] = it.attempted;
        row["solved"] = it.solved;
        row["success_rate"] = it.success_rate;
        row["budget_exhausted"] = it.budget_exhausted;
        row["mean_counts"] = {{"points", it.mean_points},
                              {"lines", it.mean_lines},
                              {"circles", it.mean_circles},
                              {"constraints", it.mean_constraints}};
        arr.push_back(row);
    }
    j["iterations"] = arr;
    return j.dump(2) + "\n";
}

namespace {

CorpusStats stats_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CorpusStats stats;
    stats.master_seed = j.value("master_seed", 0ULL);
    for (const auto& row : j.at("iterations")) {
        IterationStats it;
        it.iteration = row.at("iteration").get<int>();
        it.requested = row.value("requested", 0);
        it.attempted = row.value("attempted", 0);
        it.solved = row.value("solved", 0);
        it.success_rate = row.value("success_rate", 0.0);
        it.budget_exhausted = row.value("budget_exhausted", false);
        if (row.contains("mean_counts")) {
            const auto& mc = row["mean_counts"];
            it.mean_points = mc.value("points", 0.0);
            it.mean_lines = mc.value("lines", 0.0);
            it.mean_circles = mc.value("circles", 0.0);
            it.mean_constraints = mc.value("constraints", 0.0);
        }
        stats.iterations.push_back(it);
    }
    return stats;
}

}  // namespace

CorpusStats stats_for_manifest(const std::string& manifest_path) {
    fs::path base = fs::path(manifest_path).parent_path();
    fs::path stats_file = base / "stats.json";
    if (fs::exists(stats_file)) {
        std::ifstream in(stats_file, std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        return stats_from_json(text);
    }

    // Reconstruct from the manifest and, when present, the unsolvable log.
    CorpusStats stats;
    std::map<int, IterationStats> by_iter;
    struct Sums {
        long points = 0, lines = 0, circles = 0, constraints = 0;
    };
    std::map<int, Sums> sums;
    for (const Instance& inst : load_corpus(manifest_path)) {
        IterationStats& it = by_iter[inst.iteration];
        it.iteration = inst.iteration;
        ++it.solved;
        ++it.attempted;
        Sums& s = sums[inst.iteration];
        s.points += inst.program.points.size();
        s.lines += inst.program.lines.size();
        s.circles += inst.program.circles.size();
        s.constraints += inst.program.constraints.size();
    }
    fs::path unsolvable = base / "unsolvable.jsonl";
    if (fs::exists(unsolvable)) {
        std::ifstream in(unsolvable, std::ios::binary);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                nlohmann::json j = nlohmann::json::parse(line);
                int iteration = j.value("iteration", 0);
                by_iter[iteration].iteration = iteration;
                ++by_iter[iteration].attempted;
            } catch (const nlohmann::json::exception&) {
                // a damaged failure log should not block statistics
            }
        }
    }
    for (auto& [iteration, it] : by_iter) {
        it.requested = it.solved;
        it.success_rate = it.attempted ? 100.0 * it.solved / it.attempted : 0.0;
        if (it.solved) {
            const Sums& s = sums[iteration];
            it.mean_points = static_cast<double>(s.points) / it.solved;
            it.mean_lines = static_cast<double>(s.lines) / it.solved;
            it.mean_circles = static_cast<double>(s.circles) / it.solved;
            it.mean_constraints = static_cast<double>(s.constraints) / it.solved;
        }
        stats.iterations.push_back(it);
    }
    return stats;
}

PipelineConfig pipeline_config_from_json(const std::string& json_text) {
    PipelineConfig cfg;
    if (json_text.empty()) return cfg;
    nlohmann::json j = nlohmann::json::parse(json_text);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    if (j.contains("counts"))
        for (const auto& [key, value] : j["counts"].items()) {
            int iteration = std::stoi(key);
            int count = value.get<int>();
            if (iteration < 0 || count < 0)
                throw std::invalid_argument("counts must be non-negative");
            cfg.counts[iteration] = count;
        }
    cfg.budget_factor = j.value("budget_factor", cfg.budget_factor);
    cfg.jobs = j.value("jobs", cfg.jobs);
    cfg.render_png = j.value("render_png", cfg.render_png);
    if (j.contains("gen")) cfg.gen = gen_config_from_json(j["gen"].dump());
    if (j.contains("solve")) cfg.solve = solve_config_from_json(j["solve"].dump());
    if (j.contains("render"))
        cfg.render = render_config_from_json(j["render"].dump());
    if (cfg.budget_factor < 1.0)
        throw std::invalid_argument("budget_factor must be >= 1");
    return cfg;
}

}  // namespace geoforge
