// SPDX-License-Identifier: Apache-2.0
//
// Numeric instantiation of a program: primitives become free parameters,
// declared relations become differentiable losses, and an Adam loop with a
// step-decayed learning rate drives every hard term below a stop threshold.
// Scenes that never get there are reported as Unsolvable, not as errors.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dsl.hpp"

namespace geoforge {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

enum class LossKind {
    PointLineIncidence,
    LineNorm,
    PointCircleIncidence,
    FixedCenter,
    EqualLength,
    Perpendicular,
    Parallel,
    LineCircleTangent,
    CircleCircleTangent,
    PrescribedLength,
    PrescribedAngle,
    DensityPenalty,
    SpreadPenalty,
    ScalePenalty,
    BoundaryPenalty,
};

struct LossTerm {
    LossKind kind;
    double weight = 1.0;          // w_k, or lambda * v_m for penalties
    std::array<int, 4> refs{-1, -1, -1, -1};  // entity indices, per kind
    double target = 0.0;          // L, theta, tau, rho, ... per kind
    bool hard = true;             // participates in the stop criterion
    std::string id;               // stable name used in reports
};

// Parameter vector layout: (x, y) per point, (a, b, c) per line and
// (cx, cy, rho) per circle, where radius = softplus(rho) keeps r > 0.
struct SceneLayout {
    int n_points = 0;
    int n_lines = 0;
    int n_circles = 0;

    int point_offset(int i) const { return 2 * i; }
    int line_offset(int j) const { return 2 * n_points + 3 * j; }
    int circle_offset(int k) const { return 2 * n_points + 3 * n_lines + 3 * k; }
    int size() const { return 2 * n_points + 3 * n_lines + 3 * n_circles; }
};

struct LossSystem {
    SceneLayout layout;
    std::vector<LossTerm> terms;
};

struct SolveConfig {
    int max_iters = 500;
    double lr_initial = 0.05;
    double lr_decay_factor = 0.5;
    int lr_decay_every = 2000;
    double epsilon = 1e-6;  // per-term stop threshold for hard constraints
    double lambda = 0.1;    // penalty weight
    double density_tau = 0.15;
    double spread_rho = 0.8;
    double scale_min_dist = 0.05;
    int attempts = 1;       // optimization runs before declaring Unsolvable
    std::uint64_t seed = 0;

    // initialization ranges on the [-1, 1]^2 canvas
    double init_point_range = 0.8;
    double init_center_range = 0.5;
    double init_radius_min = 0.2;
    double init_radius_max = 0.6;
    double init_offset_range = 0.5;
};

enum class SolveStatus { Solved, Unsolvable };

struct SceneGeometry {
    std::vector<Vec2> points;
    std::vector<std::array<double, 3>> lines;    // a, b, c
    std::vector<std::array<double, 3>> circles;  // cx, cy, r (actual radius)
};

struct SolveResult {
    SolveStatus status = SolveStatus::Unsolvable;
    SceneLayout layout;
    std::vector<double> params;
    std::vector<LossTerm> terms;
    std::vector<double> term_values;  // raw (unweighted) values
    int iterations = 0;               // steps taken in the final attempt
    int attempts = 0;
    double max_hard = 0.0;

    bool solved() const { return status == SolveStatus::Solved; }
};

// One loss term per declared relation plus the plausibility penalties.
LossSystem build_losses(const GeoProgram& p, const SolveConfig& cfg);

struct Objective {
    double total = 0.0;              // weighted sum
    std::vector<double> per_term;    // raw values, aligned with terms
};

Objective eval_objective(const LossSystem& sys, const std::vector<double>& params);

// Analytic gradient of the weighted total.
std::vector<double> gradient(const LossSystem& sys, const std::vector<double>& params);

SolveResult solve(const GeoProgram& p, const SolveConfig& cfg);

// Like solve(), but hands back the objective trace of the final attempt
// (one entry per step). Used by convergence diagnostics and tests.
SolveResult solve_traced(const GeoProgram& p, const SolveConfig& cfg,
                         std::vector<double>* trace);

// ---------------------------------------------------------------------------
// Standalone losses without DSL predicates, exposed for solver API users.

class DegenerateArm : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

double prescribed_length_loss(Vec2 p1, Vec2 p2, double length);

// Squared deviation of angle p1-vertex-p2 from theta (radians). The cosine
// is clamped away from +-1 so the gradient stays finite. Throws
// DegenerateArm when an arm has zero length.
double prescribed_angle_loss(Vec2 vertex, Vec2 p1, Vec2 p2, double theta);

// ---------------------------------------------------------------------------
// Decoding and reporting

double softplus(double x);

SceneGeometry decode_scene(const SceneLayout& layout,
                           const std::vector<double>& params);

// {status, points, lines, circles, losses, iterations}
std::string solve_result_to_json(const SolveResult& r, const GeoProgram& p);

SolveConfig solve_config_from_json(const std::string& json_text);

}  // namespace geoforge
