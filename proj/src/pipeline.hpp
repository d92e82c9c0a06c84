// SPDX-License-Identifier: Apache-2.0
//
// Corpus orchestration: generate -> solve -> render at scale, with a JSONL
// manifest for solved instances, a separate log for unsolvable ones, and
// per-iteration statistics. Deterministic given the master seed: instance
// seeds derive from (master, iteration, attempt) and selection follows
// attempt order regardless of worker count.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsl.hpp"
#include "generator.hpp"
#include "solver.hpp"
#include "svg_render.hpp"

namespace geoforge {

struct Instance {
    std::string id;
    int iteration = 0;
    std::uint64_t seed = 0;
    std::string program_text;
    GeoProgram program;
    bool solved = false;
    std::string svg_path;  // relative to the manifest, empty if unsolved
    std::string png_path;  // optional
    int solver_iterations = 0;
};

struct IterationStats {
    int iteration = 0;
    int requested = 0;
    int attempted = 0;
    int solved = 0;
    double success_rate = 0.0;  // percent
    bool budget_exhausted = false;
    double mean_points = 0.0, mean_lines = 0.0, mean_circles = 0.0,
           mean_constraints = 0.0;  // over kept instances
};

struct CorpusStats {
    std::uint64_t master_seed = 0;
    std::vector<IterationStats> iterations;
};

struct PipelineConfig {
    std::uint64_t master_seed = 0;
    std::map<int, int> counts;  // iteration -> solved instances wanted
    double budget_factor = 3.0; // attempts allowed per requested instance
    int jobs = 1;
    bool render_png = false;
    GenConfig gen;      // per-instance seed and extra_steps are overridden
    SolveConfig solve;  // per-instance seed is overridden
    RenderConfig render;
};

PipelineConfig pipeline_config_from_json(const std::string& json_text);

class IOError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CorruptRecord : public std::runtime_error {
public:
    CorruptRecord(int line, const std::string& what)
        : std::runtime_error("manifest line " + std::to_string(line) + ": " + what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Writes manifest.jsonl, unsolvable.jsonl, stats.json plus per-instance
// .geodsl/.svg (and optionally .png) artifacts into out_dir.
CorpusStats build_corpus(const PipelineConfig& cfg, const std::string& out_dir);

// Parses and re-validates every manifest record. Non-fatal issues (e.g. a
// missing artifact file) are reported through `warnings`.
std::vector<Instance> load_corpus(const std::string& manifest_path,
                                  std::vector<std::string>* warnings = nullptr);

std::string corpus_stats_to_json(const CorpusStats& stats);

// stats.json next to the manifest when present, otherwise reconstructed
// from manifest.jsonl + unsolvable.jsonl.
CorpusStats stats_for_manifest(const std::string& manifest_path);

}  // namespace geoforge
