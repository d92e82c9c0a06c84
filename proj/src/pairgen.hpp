// SPDX-License-Identifier: Apache-2.0
//
// Preference-pair construction from scored samples. The sampler and the
// translator are pluggable so the selection loop can be exercised with desk
// stubs (corrupted ground truth + the DSL parser) or with external models
// speaking line-delimited JSON over stdio.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dsl.hpp"
#include "pipeline.hpp"
#include "rng.hpp"
#include "scoring.hpp"

namespace geoforge {

class Sampler {
public:
    virtual ~Sampler() = default;
    // One candidate description of the instance's diagram.
    virtual std::string sample(const Instance& instance, Rng& rng) = 0;
    virtual bool thread_safe() const { return false; }
};

class Translator {
public:
    virtual ~Translator() = default;
    // Text to program; nullopt is an explicit translation failure.
    virtual std::optional<GeoProgram> translate(const std::string& text) = 0;
    virtual bool thread_safe() const { return false; }
};

struct PreferencePair {
    std::string id;
    std::string winner;
    std::string loser;
    double s_w = 0.0;
    double s_l = 0.0;
};

// Translate-then-score; translation failures score 0.
double score_sample(const Instance& instance, const std::string& text,
                    Translator& translator);

// Winner/loser selection on a descending score list: winners walk the top
// half while losers start just past the middle, both advancing on emission
// and only the loser otherwise. Returns (winner, loser) positions into the
// sorted order.
std::vector<std::pair<int, int>> select_pairs(const std::vector<double>& sorted_scores,
                                              double delta_min);

std::vector<PreferencePair> generate_pairs(const std::vector<Instance>& corpus,
                                           Sampler& sampler, Translator& translator,
                                           int n_samples, double delta_min,
                                           std::uint64_t seed, int jobs = 1);

// ---------------------------------------------------------------------------
// Desk-scale stand-ins

// Ground-truth text with `level` random corruptions (relabel a point, drop a
// line together with the constraints that mention it, flip a constraint
// kind). Level 0 returns the exact canonical text.
std::string degrade_program(const GeoProgram& truth, int level, Rng& rng);

class StubSampler : public Sampler {
public:
    explicit StubSampler(int degradation_level)
        : degradation_level_(degradation_level) {}
    std::string sample(const Instance& instance, Rng& rng) override;
    bool thread_safe() const override { return true; }

private:
    int degradation_level_;
};

class ParserTranslator : public Translator {
public:
    std::optional<GeoProgram> translate(const std::string& text) override;
    bool thread_safe() const override { return true; }
};

// ---------------------------------------------------------------------------
// External-process adapters: one JSON object per line on stdin/stdout.
//   sampler   <- {"id": ..., "iteration": ..., "program": ...}
//   sampler   -> {"text": ...}
//   translator <- {"text": ...}
//   translator -> {"program": ...} | {"error": ...}

class Subprocess;

class ProcessSampler : public Sampler {
public:
    explicit ProcessSampler(const std::string& command);
    ~ProcessSampler() override;
    std::string sample(const Instance& instance, Rng& rng) override;

private:
    std::unique_ptr<Subprocess> proc_;
};

class ProcessTranslator : public Translator {
public:
    explicit ProcessTranslator(const std::string& command);
    ~ProcessTranslator() override;
    std::optional<GeoProgram> translate(const std::string& text) override;

private:
    std::unique_ptr<Subprocess> proc_;
};

// {id, winner, loser, s_w, s_l} per line.
std::string pairs_to_jsonl(const std::vector<PreferencePair>& pairs);

}  // namespace geoforge
