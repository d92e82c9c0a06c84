// SPDX-License-Identifier: Apache-2.0
#include "geoforge.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include <json.hpp>

#include "dsl.hpp"
#include "generator.hpp"
#include "pairgen.hpp"
#include "pipeline.hpp"
#include "raster.hpp"
#include "scoring.hpp"
#include "solver.hpp"
#include "svg_render.hpp"

using namespace geoforge;

struct gf_program {
    GeoProgram value;
};

struct gf_solution {
    SolveResult result;
    GeoProgram program;  // the scene the result belongs to
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

gf_status fail(gf_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Runs the body and maps thrown errors onto status codes.
template <typename Fn>
gf_status guarded(Fn&& body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const ParseError& e) {
        gf_status status = GF_ERR_SYNTAX;
        switch (e.kind()) {
            case ParseError::Kind::Syntax: status = GF_ERR_SYNTAX; break;
            case ParseError::Kind::Reference: status = GF_ERR_REFERENCE; break;
            case ParseError::Kind::DuplicateLabel:
                status = GF_ERR_DUPLICATE_LABEL;
                break;
            case ParseError::Kind::Arity: status = GF_ERR_ARITY; break;
        }
        return fail(status, e.what());
    } catch (const CorruptRecord& e) {
        return fail(GF_ERR_CORRUPT_RECORD, e.what());
    } catch (const IOError& e) {
        return fail(GF_ERR_IO, e.what());
    } catch (const NotSolved& e) {
        return fail(GF_ERR_NOT_SOLVED, e.what());
    } catch (const RasterBackendUnavailable& e) {
        return fail(GF_ERR_RASTER, e.what());
    } catch (const SvgParseError& e) {
        return fail(GF_ERR_RASTER, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(GF_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(GF_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(GF_ERR_INTERNAL, e.what());
    }
}

ScoreWeights weights_from_json(const char* weights_json) {
    ScoreWeights w;
    if (!weights_json || !*weights_json) return w;
    nlohmann::json j = nlohmann::json::parse(weights_json);
    w.points = j.value("points", w.points);
    w.lines = j.value("lines", w.lines);
    w.circles = j.value("circles", w.circles);
    w.constraints = j.value("constraints", w.constraints);
    double total = w.points + w.lines + w.circles + w.constraints;
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("score weights must sum to 1");
    return w;
}

std::string as_string(const char* s) { return s ? std::string(s) : std::string(); }

}  // namespace

extern "C" {

const char* gf_version(void) { return "0.1.0"; }

const char* gf_status_name(gf_status status) {
    switch (status) {
        case GF_OK: return "ok";
        case GF_ERR_SYNTAX: return "syntax-error";
        case GF_ERR_REFERENCE: return "reference-error";
        case GF_ERR_DUPLICATE_LABEL: return "duplicate-label";
        case GF_ERR_ARITY: return "arity-error";
        case GF_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case GF_ERR_NOT_SOLVED: return "not-solved";
        case GF_ERR_IO: return "io-error";
        case GF_ERR_CORRUPT_RECORD: return "corrupt-record";
        case GF_ERR_RASTER: return "raster-error";
        case GF_ERR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

const char* gf_last_error(void) { return g_last_error.c_str(); }

void gf_string_free(char* s) { std::free(s); }
void gf_buffer_free(unsigned char* p) { std::free(p); }
void gf_program_free(gf_program* p) { delete p; }
void gf_solution_free(gf_solution* s) { delete s; }

gf_status gf_program_parse(const char* text, gf_program** out) {
    if (!text || !out) return fail(GF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new gf_program{parse_program(text)};
        return GF_OK;
    });
}

gf_status gf_program_serialize(const gf_program* p, char** out_text) {
    if (!p || !out_text) return fail(GF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out_text = dup_string(serialize_program(p->value));
        return GF_OK;
    });
}

gf_status gf_program_validate(const gf_program* p, char** out_json) {
    if (!p || !out_json) return fail(GF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        nlohmann::ordered_json j;
        nlohmann::ordered_json violations = nlohmann::json::array();
        int errors = 0, warnings = 0;
        for (const Violation& v : validate(p->value)) {
            bool is_error = v.severity == Severity::Error;
            (is_error ? errors : warnings) += 1;
            violations.push_back({{"severity", is_error ? "error" : "warning"},
                                  {"code", v.code},
                                  {"message", v.message}});
        }
        j["violations"] = violations;
        j["error_count"] = errors;
        j["warning_count"] = warnings;
        *out_json = dup_string(j.dump());
        return GF_OK;
    });
}

gf_status gf_program_counts(const gf_program* p, int counts[4]) {
    if (!p || !counts) return fail(GF_ERR_INVALID_ARGUMENT, "null argument");
    counts[0] = static_cast<int>(p->value.points.size());
    counts[1] = static_cast<int>(p->value.lines.size());
    counts[2] = static_cast<int>(p->value.circles.size());
    counts[3] = static_cast<int>(p->value.constraints.size());
    return GF_OK;
}

gf_status gf_generate(const char* config_json, gf_program** out) {
    if (!out) return fail(GF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        GenConfig cfg = gen_config_from_json(as_string(config_json));
        *out = new gf_program{generate(cfg)};
        return GF_OK;
    });
}

gf_status gf_score(const gf_program* truth, const gf_program* predicted,
                   const char* weights_json, char** out_json) {
    if (!truth || !predicted || !out_json)
        return fail(GF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        ScoreReport report =
            score(truth->value, predicted->value, weights_from_json(weights_json));
        *out_json = dup_string(score_report_to_json(report));
        return GF_OK;
    });
}

gf_status gf_solve(const gf_program* p, const char* config_json,
                   gf_solution** out) {
    if (!p || !out) return fail(GF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        SolveConfig cfg = solve_config_from_json(as_string(config_json));
        auto* solution = new gf_solution{solve(p->value, cfg), p->value};
        *out = solution;
        return GF_OK;
    });
}

int gf_solution_solved(const gf_solution* s) {
    return s && s->result.solved() ? 1 : 0;
}

gf_status gf_solution_to_json(const gf_solution* s, char** out_json) {
    if (!s || !out_json) return fail(GF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out_json = dup_string(solve_result_to_json(s->result, s->program));
        return GF_OK;
    });
}

gf_status gf_render_svg(const gf_solution* s, const char* config_json,
                        char** out_svg) {
    if (!s || !out_svg) return fail(GF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        RenderConfig cfg = render_config_from_json(as_string(config_json));
        *out_svg = dup_string(render_svg(s->result, s->program, cfg));
        return GF_OK;
    });
}

gf_status gf_rasterize_png(const char* svg, const char* config_json,
                           unsigned char** out_bytes, size_t* out_len) {
    if (!svg || !out_bytes || !out_len)
        return fail(GF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        RenderConfig cfg = render_config_from_json(as_string(config_json));
        Image img = rasterize_svg(svg, cfg.width, cfg.height);
        std::vector<std::uint8_t> png = encode_png(img);
        auto* bytes = static_cast<unsigned char*>(std::malloc(png.size()));
        std::memcpy(bytes, png.data(), png.size());
        *out_bytes = bytes;
        *out_len = png.size();
        return GF_OK;
    });
}

gf_status gf_build_corpus(const char* config_json, const char* out_dir,
                          char** out_stats_json) {
    if (!out_dir) return fail(GF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        PipelineConfig cfg = pipeline_config_from_json(as_string(config_json));
        CorpusStats stats = build_corpus(cfg, out_dir);
        if (out_stats_json) *out_stats_json = dup_string(corpus_stats_to_json(stats));
        return GF_OK;
    });
}

gf_status gf_corpus_stats(const char* manifest_path, char** out_stats_json) {
    if (!manifest_path || !out_stats_json)
        return fail(GF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        CorpusStats stats = stats_for_manifest(manifest_path);
        *out_stats_json = dup_string(corpus_stats_to_json(stats));
        return GF_OK;
    });
}

gf_status gf_generate_pairs(const char* manifest_path, const char* config_json,
                            const char* out_path, char** out_summary_json) {
    if (!manifest_path || !out_path)
        return fail(GF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        nlohmann::json j = config_json && *config_json
                               ? nlohmann::json::parse(config_json)
                               : nlohmann::json::object();
        int n_samples = j.value("n_samples", 10);
        double delta_min = j.value("delta_min", 0.3);
        int degradation = j.value("degradation_level", 2);
        std::uint64_t seed = j.value("seed", 0ULL);
        int jobs = j.value("jobs", 1);

        std::unique_ptr<Sampler> sampler;
        std::string sampler_kind = j.value("sampler", "stub");
        if (sampler_kind == "stub") {
            sampler = std::make_unique<StubSampler>(degradation);
        } else if (sampler_kind == "process") {
            sampler = std::make_unique<ProcessSampler>(
                j.at("sampler_cmd").get<std::string>());
        } else {
            throw std::invalid_argument("unknown sampler: " + sampler_kind);
        }
        std::unique_ptr<Translator> translator;
        std::string translator_kind = j.value("translator", "parser");
        if (translator_kind == "parser") {
            translator = std::make_unique<ParserTranslator>();
        } else if (translator_kind == "process") {
            translator = std::make_unique<ProcessTranslator>(
                j.at("translator_cmd").get<std::string>());
        } else {
            throw std::invalid_argument("unknown translator: " + translator_kind);
        }

        std::vector<Instance> corpus = load_corpus(manifest_path);
        std::vector<PreferencePair> pairs = generate_pairs(
            corpus, *sampler, *translator, n_samples, delta_min, seed, jobs);
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw IOError(std::string("cannot open ") + out_path);
        out << pairs_to_jsonl(pairs);
        if (!out) throw IOError(std::string("failed writing ") + out_path);

        if (out_summary_json) {
            nlohmann::ordered_json summary;
            summary["instances"] = corpus.size();
            summary["pairs"] = pairs.size();
            *out_summary_json = dup_string(summary.dump());
        }
        return GF_OK;
    });
}

}  // extern "C"
