/* SPDX-License-Identifier: Apache-2.0
 *
 * geoforge — geometry-diagram program toolkit.
 *
 * C interface to the generation / solving / rendering / scoring pipeline.
 * All structured inputs and outputs are JSON strings; handles are opaque
 * and every non-trivial call reports a gf_status. On failure, a
 * thread-local message is available through gf_last_error().
 *
 * Strings returned through `char**` are heap-allocated and must be released
 * with gf_string_free(); byte buffers with gf_buffer_free().
 */
#ifndef GEOFORGE_H
#define GEOFORGE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gf_status {
    GF_OK = 0,
    GF_ERR_SYNTAX = 1,          /* malformed program text */
    GF_ERR_REFERENCE = 2,       /* use of an undeclared identifier */
    GF_ERR_DUPLICATE_LABEL = 3, /* duplicate point label / name binding */
    GF_ERR_ARITY = 4,           /* constraint argument of the wrong kind */
    GF_ERR_INVALID_ARGUMENT = 5,/* bad configuration or parameter */
    GF_ERR_NOT_SOLVED = 6,      /* operation requires a solved scene */
    GF_ERR_IO = 7,              /* filesystem or subprocess failure */
    GF_ERR_CORRUPT_RECORD = 8,  /* malformed manifest record */
    GF_ERR_RASTER = 9,          /* rasterizer failure */
    GF_ERR_INTERNAL = 10
} gf_status;

typedef struct gf_program gf_program;   /* parsed program */
typedef struct gf_solution gf_solution; /* solver output bound to its program */

const char* gf_version(void);
const char* gf_status_name(gf_status status);

/* Message describing this thread's most recent failure ("" when none). */
const char* gf_last_error(void);

void gf_string_free(char* s);
void gf_buffer_free(unsigned char* p);
void gf_program_free(gf_program* p);
void gf_solution_free(gf_solution* s);

/* ------------------------------------------------------------------ DSL */

gf_status gf_program_parse(const char* text, gf_program** out);
gf_status gf_program_serialize(const gf_program* p, char** out_text);

/* {"violations":[{severity,code,message}...],"error_count","warning_count"} */
gf_status gf_program_validate(const gf_program* p, char** out_json);

/* counts[0..3] = points, lines, circles, constraints */
gf_status gf_program_counts(const gf_program* p, int counts[4]);

/* ------------------------------------------------------------ generator */

/* config: {"extra_steps","seed","init_probs":{...},"center_prob",...};
 * pass NULL or "" for the defaults. */
gf_status gf_generate(const char* config_json, gf_program** out);

/* -------------------------------------------------------------- scoring */

/* weights_json: NULL for equal weights, else
 * {"points":wP,"lines":wL,"circles":wC,"constraints":wR}, summing to 1.
 * out: {overall, points:{p,r,f1}, lines:{...}, circles:{...},
 *       constraints:{...}, weights} */
gf_status gf_score(const gf_program* truth, const gf_program* predicted,
                   const char* weights_json, char** out_json);

/* --------------------------------------------------------------- solver */

gf_status gf_solve(const gf_program* p, const char* config_json,
                   gf_solution** out);
int gf_solution_solved(const gf_solution* s);

/* {status, points, lines, circles, losses, iterations} */
gf_status gf_solution_to_json(const gf_solution* s, char** out_json);

/* ------------------------------------------------------------- renderer */

gf_status gf_render_svg(const gf_solution* s, const char* config_json,
                        char** out_svg);
gf_status gf_rasterize_png(const char* svg, const char* config_json,
                           unsigned char** out_bytes, size_t* out_len);

/* ------------------------------------------------------------- pipeline */

/* config: {"master_seed","counts":{"1":n,...},"budget_factor","jobs",
 *          "render_png","gen":{...},"solve":{...},"render":{...}}.
 * Writes manifest.jsonl, unsolvable.jsonl, stats.json and artifacts. */
gf_status gf_build_corpus(const char* config_json, const char* out_dir,
                          char** out_stats_json);

/* stats.json contents when present, else reconstructed from the logs. */
gf_status gf_corpus_stats(const char* manifest_path, char** out_stats_json);

/* -------------------------------------------------------------- pairgen */

/* config: {"sampler":"stub"|"process","sampler_cmd":...,
 *          "translator":"parser"|"process","translator_cmd":...,
 *          "n_samples":10,"delta_min":0.3,"degradation_level":2,
 *          "seed":0,"jobs":1}.
 * Writes {id,winner,loser,s_w,s_l} JSONL to out_path; summary:
 * {"instances":m,"pairs":n}. */
gf_status gf_generate_pairs(const char* manifest_path, const char* config_json,
                            const char* out_path, char** out_summary_json);

#ifdef __cplusplus
}
#endif

#endif /* GEOFORGE_H */
