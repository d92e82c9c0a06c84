// SPDX-License-Identifier: Apache-2.0
#include "solver.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "rng.hpp"

namespace geoforge {

namespace {

constexpr double kTangentDelta = 1e-8;   // smooths |.| in the tangency loss
constexpr double kCosClamp = 1e-7;       // keeps arccos' away from +-1
constexpr double kTiny = 1e-12;

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

double softplus_inverse(double y) {
    // y = log(1 + e^x)  =>  x = log(e^y - 1)
    return std::log(std::expm1(y));
}

}  // namespace

double softplus(double x) {
    if (x > 30.0) return x;
    return std::log1p(std::exp(x));
}

// ---------------------------------------------------------------------------
// Loss construction

LossSystem build_losses(const GeoProgram& p, const SolveConfig& cfg) {
    LossSystem sys;
    sys.layout.n_points = static_cast<int>(p.points.size());
    sys.layout.n_lines = static_cast<int>(p.lines.size());
    sys.layout.n_circles = static_cast<int>(p.circles.size());

    auto add = [&sys](LossTerm t) { sys.terms.push_back(std::move(t)); };

    for (size_t j = 0; j < p.lines.size(); ++j) {
        for (int pt : p.lines[j].through) {
            LossTerm t;
            t.kind = LossKind::PointLineIncidence;
            t.refs = {pt, static_cast<int>(j), -1, -1};
            t.id = "incidence:" + p.point_name(pt) + ":" +
                   p.line_name(static_cast<int>(j));
            add(std::move(t));
        }
        LossTerm t;
        t.kind = LossKind::LineNorm;
        t.refs = {static_cast<int>(j), -1, -1, -1};
        t.id = "norm:" + p.line_name(static_cast<int>(j));
        add(std::move(t));
    }

    for (size_t k = 0; k < p.circles.size(); ++k) {
        for (int pt : p.circles[k].through) {
            LossTerm t;
            t.kind = LossKind::PointCircleIncidence;
            t.refs = {pt, static_cast<int>(k), -1, -1};
            t.id = "on_circle:" + p.point_name(pt) + ":" +
                   p.circle_name(static_cast<int>(k));
            add(std::move(t));
        }
        if (p.circles[k].center) {
            LossTerm t;
            t.kind = LossKind::FixedCenter;
            t.refs = {static_cast<int>(k), *p.circles[k].center, -1, -1};
            t.id = "center:" + p.circle_name(static_cast<int>(k));
            add(std::move(t));
        }
    }

    for (size_t r = 0; r < p.constraints.size(); ++r) {
        const ConstraintDecl& c = p.constraints[r];
        LossTerm t;
        t.id = std::string(constraint_kind_name(c.kind)) + ":" +
               std::to_string(r + 1);
        switch (c.kind) {
            case ConstraintKind::Perpendicular:
                t.kind = LossKind::Perpendicular;
                t.refs = {c.curves[0], c.curves[1], -1, -1};
                break;
            case ConstraintKind::Parallel:
                t.kind = LossKind::Parallel;
                t.refs = {c.curves[0], c.curves[1], -1, -1};
                break;
            case ConstraintKind::LineCircleTangent:
                t.kind = LossKind::LineCircleTangent;
                t.refs = {c.curves[0], c.curves[1], -1, -1};
                break;
            case ConstraintKind::CircleCircleTangent:
                t.kind = LossKind::CircleCircleTangent;
                t.refs = {c.curves[0], c.curves[1], -1, -1};
                break;
            case ConstraintKind::EqualDistance:
                t.kind = LossKind::EqualLength;
                t.refs = {c.points[0], c.points[1], c.points[2], c.points[3]};
                break;
        }
        add(std::move(t));
    }

    const int n = sys.layout.n_points;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            LossTerm t;
            t.kind = LossKind::DensityPenalty;
            t.weight = cfg.lambda;
            t.hard = false;
            t.refs = {i, j, -1, -1};
            t.target = cfg.density_tau;
            t.id = "density:" + p.point_name(i) + ":" + p.point_name(j);
            add(std::move(t));
        }
    }
    if (n > 0) {
        LossTerm t;
        t.kind = LossKind::SpreadPenalty;
        t.weight = cfg.lambda;
        t.hard = false;
        t.target = cfg.spread_rho;
        t.id = "spread";
        add(std::move(t));
    }
    if (n > 1) {
        LossTerm t;
        t.kind = LossKind::ScalePenalty;
        t.weight = cfg.lambda;
        t.hard = false;
        t.target = cfg.scale_min_dist;
        t.id = "scale";
        add(std::move(t));
    }
    if (n > 0 || sys.layout.n_circles > 0) {
        LossTerm t;
        t.kind = LossKind::BoundaryPenalty;
        t.weight = cfg.lambda;
        t.hard = false;
        t.target = 1.0;  // canvas half-extent
        t.id = "boundary";
        add(std::move(t));
    }
    return sys;
}

// ---------------------------------------------------------------------------
// Evaluation: raw term value, optionally accumulating the weighted gradient.

namespace {

struct View {
    const SceneLayout& layout;
    const std::vector<double>& x;
    std::vector<double>* grad;  // may be null

    double p(int i, int c) const { return x[layout.point_offset(i) + c]; }
    double l(int j, int c) const { return x[layout.line_offset(j) + c]; }
    double k(int c_idx, int c) const { return x[layout.circle_offset(c_idx) + c]; }

    void add_p(int i, int c, double v) const {
        if (grad) (*grad)[layout.point_offset(i) + c] += v;
    }
    void add_l(int j, int c, double v) const {
        if (grad) (*grad)[layout.line_offset(j) + c] += v;
    }
    void add_k(int c_idx, int c, double v) const {
        if (grad) (*grad)[layout.circle_offset(c_idx) + c] += v;
    }
};

double eval_term(const LossTerm& t, const View& v) {
    const double w = t.weight;
    switch (t.kind) {
        case LossKind::PointLineIncidence: {
            int pi = t.refs[0], lj = t.refs[1];
            double x = v.p(pi, 0), y = v.p(pi, 1);
            double a = v.l(lj, 0), b = v.l(lj, 1), c = v.l(lj, 2);
            double e = a * x + b * y + c;
            double g = w * 2.0 * e;
            v.add_p(pi, 0, g * a);
            v.add_p(pi, 1, g * b);
            v.add_l(lj, 0, g * x);
            v.add_l(lj, 1, g * y);
            v.add_l(lj, 2, g);
            return e * e;
        }
        case LossKind::LineNorm: {
            int lj = t.refs[0];
            double a = v.l(lj, 0), b = v.l(lj, 1);
            double n = std::sqrt(std::max(a * a + b * b, kTiny));
            double e = n - 1.0;
            double g = w * 2.0 * e / n;
            v.add_l(lj, 0, g * a);
            v.add_l(lj, 1, g * b);
            return e * e;
        }
        case LossKind::PointCircleIncidence: {
            int pi = t.refs[0], ck = t.refs[1];
            double dx = v.p(pi, 0) - v.k(ck, 0);
            double dy = v.p(pi, 1) - v.k(ck, 1);
            double d = std::sqrt(std::max(dx * dx + dy * dy, kTiny));
            double rho = v.k(ck, 2);
            double e = d - softplus(rho);
            double g = w * 2.0 * e;
            v.add_p(pi, 0, g * dx / d);
            v.add_p(pi, 1, g * dy / d);
            v.add_k(ck, 0, -g * dx / d);
            v.add_k(ck, 1, -g * dy / d);
            v.add_k(ck, 2, -g * sigmoid(rho));
            return e * e;
        }
        case LossKind::FixedCenter: {
            int ck = t.refs[0], pi = t.refs[1];
            double dx = v.k(ck, 0) - v.p(pi, 0);
            double dy = v.k(ck, 1) - v.p(pi, 1);
            v.add_k(ck, 0, w * 2.0 * dx);
            v.add_k(ck, 1, w * 2.0 * dy);
            v.add_p(pi, 0, -w * 2.0 * dx);
            v.add_p(pi, 1, -w * 2.0 * dy);
            return dx * dx + dy * dy;
        }
        case LossKind::EqualLength:
        case LossKind::PrescribedLength: {
            int p1 = t.refs[0], p2 = t.refs[1];
            double ux = v.p(p1, 0) - v.p(p2, 0);
            double uy = v.p(p1, 1) - v.p(p2, 1);
            double d1 = std::sqrt(std::max(ux * ux + uy * uy, kTiny));
            double d2 = t.target;
            double wx = 0, wy = 0;
            int p3 = -1, p4 = -1;
            if (t.kind == LossKind::EqualLength) {
                p3 = t.refs[2];
                p4 = t.refs[3];
                wx = v.p(p3, 0) - v.p(p4, 0);
                wy = v.p(p3, 1) - v.p(p4, 1);
                d2 = std::sqrt(std::max(wx * wx + wy * wy, kTiny));
            }
            double e = d1 - d2;
            double g = w * 2.0 * e;
            v.add_p(p1, 0, g * ux / d1);
            v.add_p(p1, 1, g * uy / d1);
            v.add_p(p2, 0, -g * ux / d1);
            v.add_p(p2, 1, -g * uy / d1);
            if (t.kind == LossKind::EqualLength) {
                v.add_p(p3, 0, -g * wx / d2);
                v.add_p(p3, 1, -g * wy / d2);
                v.add_p(p4, 0, g * wx / d2);
                v.add_p(p4, 1, g * wy / d2);
            }
            return e * e;
        }
        case LossKind::Perpendicular: {
            int l1 = t.refs[0], l2 = t.refs[1];
            double u = v.l(l1, 0) * v.l(l2, 0) + v.l(l1, 1) * v.l(l2, 1);
            double g = w * 2.0 * u;
            v.add_l(l1, 0, g * v.l(l2, 0));
            v.add_l(l1, 1, g * v.l(l2, 1));
            v.add_l(l2, 0, g * v.l(l1, 0));
            v.add_l(l2, 1, g * v.l(l1, 1));
            return u * u;
        }
        case LossKind::Parallel: {
            int l1 = t.refs[0], l2 = t.refs[1];
            double u = v.l(l1, 0) * v.l(l2, 1) - v.l(l2, 0) * v.l(l1, 1);
            double g = w * 2.0 * u;
            v.add_l(l1, 0, g * v.l(l2, 1));
            v.add_l(l2, 1, g * v.l(l1, 0));
            v.add_l(l2, 0, -g * v.l(l1, 1));
            v.add_l(l1, 1, -g * v.l(l2, 0));
            return u * u;
        }
        case LossKind::LineCircleTangent: {
            int lj = t.refs[0], ck = t.refs[1];
            double a = v.l(lj, 0), b = v.l(lj, 1), c = v.l(lj, 2);
            double cx = v.k(ck, 0), cy = v.k(ck, 1), rho = v.k(ck, 2);
            double u = a * cx + b * cy + c;
            double s = std::sqrt(u * u + kTangentDelta * kTangentDelta);
            double n = std::sqrt(std::max(a * a + b * b, kTiny));
            double e = s / n - softplus(rho);
            double g = w * 2.0 * e;
            double du = u / s;  // d s / d u
            v.add_l(lj, 0, g * (du * cx / n - s * a / (n * n * n)));
            v.add_l(lj, 1, g * (du * cy / n - s * b / (n * n * n)));
            v.add_l(lj, 2, g * du / n);
            v.add_k(ck, 0, g * du * a / n);
            v.add_k(ck, 1, g * du * b / n);
            v.add_k(ck, 2, -g * sigmoid(rho));
            return e * e;
        }
        case LossKind::CircleCircleTangent: {
            // external tangency: centre gap equals the radius sum
            int c1 = t.refs[0], c2 = t.refs[1];
            double dx = v.k(c1, 0) - v.k(c2, 0);
            double dy = v.k(c1, 1) - v.k(c2, 1);
            double d = std::sqrt(std::max(dx * dx + dy * dy, kTiny));
            double rho1 = v.k(c1, 2), rho2 = v.k(c2, 2);
            double e = d - softplus(rho1) - softplus(rho2);
            double g = w * 2.0 * e;
            v.add_k(c1, 0, g * dx / d);
            v.add_k(c1, 1, g * dy / d);
            v.add_k(c2, 0, -g * dx / d);
            v.add_k(c2, 1, -g * dy / d);
            v.add_k(c1, 2, -g * sigmoid(rho1));
            v.add_k(c2, 2, -g * sigmoid(rho2));
            return e * e;
        }
        case LossKind::PrescribedAngle: {
            int vi = t.refs[0], p1 = t.refs[1], p2 = t.refs[2];
            double ux = v.p(p1, 0) - v.p(vi, 0), uy = v.p(p1, 1) - v.p(vi, 1);
            double wx = v.p(p2, 0) - v.p(vi, 0), wy = v.p(p2, 1) - v.p(vi, 1);
            double cu = std::sqrt(std::max(ux * ux + uy * uy, kTiny));
            double cw = std::sqrt(std::max(wx * wx + wy * wy, kTiny));
            double dot = ux * wx + uy * wy;
            double c0 = dot / (cu * cw);
            bool clamped = c0 <= -1.0 + kCosClamp || c0 >= 1.0 - kCosClamp;
            double ct = std::clamp(c0, -1.0 + kCosClamp, 1.0 - kCosClamp);
            double e = std::acos(ct) - t.target;
            if (!clamped && v.grad) {
                double dacos = -1.0 / std::sqrt(1.0 - ct * ct);
                double g = t.weight * 2.0 * e * dacos;
                double inv = 1.0 / (cu * cw);
                double dux = wx * inv - dot * ux / (cu * cu * cu * cw);
                double duy = wy * inv - dot * uy / (cu * cu * cu * cw);
                double dwx = ux * inv - dot * wx / (cu * cw * cw * cw);
                double dwy = uy * inv - dot * wy / (cu * cw * cw * cw);
                v.add_p(p1, 0, g * dux);
                v.add_p(p1, 1, g * duy);
                v.add_p(p2, 0, g * dwx);
                v.add_p(p2, 1, g * dwy);
                v.add_p(vi, 0, -g * (dux + dwx));
                v.add_p(vi, 1, -g * (duy + dwy));
            }
            return e * e;
        }
        case LossKind::DensityPenalty: {
            int p1 = t.refs[0], p2 = t.refs[1];
            double dx = v.p(p1, 0) - v.p(p2, 0);
            double dy = v.p(p1, 1) - v.p(p2, 1);
            double d2 = std::max(dx * dx + dy * dy, kTiny);
            double tau2 = t.target * t.target;
            if (d2 >= tau2) return 0.0;
            double g = -w * 2.0 / (d2 * d2);
            v.add_p(p1, 0, g * dx);
            v.add_p(p1, 1, g * dy);
            v.add_p(p2, 0, -g * dx);
            v.add_p(p2, 1, -g * dy);
            return 1.0 / d2 - 1.0 / tau2;
        }
        case LossKind::SpreadPenalty: {
            const int n = v.layout.n_points;
            double mx = 0, my = 0;
            for (int i = 0; i < n; ++i) {
                mx += v.p(i, 0);
                my += v.p(i, 1);
            }
            mx /= n;
            my /= n;
            double total = 0, sx = 0, sy = 0;
            for (int i = 0; i < n; ++i) {
                double dx = v.p(i, 0) - mx, dy = v.p(i, 1) - my;
                double r = std::sqrt(std::max(dx * dx + dy * dy, kTiny));
                double m = r - t.target;
                if (m <= 0) continue;
                total += m * m;
                double gx = w * 2.0 * m * dx / r;
                double gy = w * 2.0 * m * dy / r;
                v.add_p(i, 0, gx);
                v.add_p(i, 1, gy);
                sx += gx;
                sy += gy;
            }
            if (v.grad && (sx != 0 || sy != 0)) {
                for (int i = 0; i < n; ++i) {
                    v.add_p(i, 0, -sx / n);
                    v.add_p(i, 1, -sy / n);
                }
            }
            return total;
        }
        case LossKind::ScalePenalty: {
            const int n = v.layout.n_points;
            double best = -1;
            int bi = -1, bj = -1;
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    double dx = v.p(i, 0) - v.p(j, 0);
                    double dy = v.p(i, 1) - v.p(j, 1);
                    double d2 = dx * dx + dy * dy;
                    if (best < 0 || d2 < best) {
                        best = d2;
                        bi = i;
                        bj = j;
                    }
                }
            }
            if (bi < 0) return 0.0;
            double d = std::sqrt(std::max(best, kTiny));
            double m = t.target - d;
            if (m <= 0) return 0.0;
            double dx = v.p(bi, 0) - v.p(bj, 0);
            double dy = v.p(bi, 1) - v.p(bj, 1);
            double g = -w * 2.0 * m / d;
            v.add_p(bi, 0, g * dx);
            v.add_p(bi, 1, g * dy);
            v.add_p(bj, 0, -g * dx);
            v.add_p(bj, 1, -g * dy);
            return m * m;
        }
        case LossKind::BoundaryPenalty: {
            double total = 0;
            auto edge = [&](double u) {
                double m = std::abs(u) - t.target;
                return m > 0 ? m : 0.0;
            };
            for (int i = 0; i < v.layout.n_points; ++i) {
                for (int c = 0; c < 2; ++c) {
                    double u = v.p(i, c);
                    double m = edge(u);
                    if (m > 0) {
                        total += m * m;
                        v.add_p(i, c, w * 2.0 * m * (u >= 0 ? 1.0 : -1.0));
                    }
                }
            }
            for (int k = 0; k < v.layout.n_circles; ++k) {
                double rho = v.k(k, 2);
                double r = softplus(rho);
                double sig = sigmoid(rho);
                for (int c = 0; c < 2; ++c) {
                    double centre = v.k(k, c);
                    for (double side : {-1.0, 1.0}) {
                        double u = centre + side * r;
                        double m = edge(u);
                        if (m > 0) {
                            total += m * m;
                            double s = (u >= 0 ? 1.0 : -1.0);
                            v.add_k(k, c, w * 2.0 * m * s);
                            v.add_k(k, 2, w * 2.0 * m * s * side * sig);
                        }
                    }
                }
            }
            return total;
        }
    }
    return 0.0;
}

void eval_all(const LossSystem& sys, const std::vector<double>& params,
              std::vector<double>& values, std::vector<double>* grad) {
    if (grad) std::fill(grad->begin(), grad->end(), 0.0);
    values.resize(sys.terms.size());
    View view{sys.layout, params, grad};
    for (size_t i = 0; i < sys.terms.size(); ++i)
        values[i] = eval_term(sys.terms[i], view);
}

}  // namespace

Objective eval_objective(const LossSystem& sys, const std::vector<double>& params) {
    Objective obj;
    eval_all(sys, params, obj.per_term, nullptr);
    for (size_t i = 0; i < sys.terms.size(); ++i)
        obj.total += sys.terms[i].weight * obj.per_term[i];
    return obj;
}

std::vector<double> gradient(const LossSystem& sys, const std::vector<double>& params) {
    std::vector<double> grad(params.size(), 0.0);
    std::vector<double> values;
    eval_all(sys, params, values, &grad);
    return grad;
}

// ---------------------------------------------------------------------------
// Optimization

namespace {

std::vector<double> init_params(const SceneLayout& layout, const SolveConfig& cfg,
                                Rng& rng) {
    std::vector<double> x(layout.size());
    for (int i = 0; i < layout.n_points; ++i) {
        x[layout.point_offset(i) + 0] =
            rng.uniform(-cfg.init_point_range, cfg.init_point_range);
        x[layout.point_offset(i) + 1] =
            rng.uniform(-cfg.init_point_range, cfg.init_point_range);
    }
    for (int j = 0; j < layout.n_lines; ++j) {
        double phi = rng.uniform(0.0, 2.0 * M_PI);
        x[layout.line_offset(j) + 0] = std::cos(phi);
        x[layout.line_offset(j) + 1] = std::sin(phi);
        x[layout.line_offset(j) + 2] =
            rng.uniform(-cfg.init_offset_range, cfg.init_offset_range);
    }
    for (int k = 0; k < layout.n_circles; ++k) {
        x[layout.circle_offset(k) + 0] =
            rng.uniform(-cfg.init_center_range, cfg.init_center_range);
        x[layout.circle_offset(k) + 1] =
            rng.uniform(-cfg.init_center_range, cfg.init_center_range);
        x[layout.circle_offset(k) + 2] = softplus_inverse(
            rng.uniform(cfg.init_radius_min, cfg.init_radius_max));
    }
    return x;
}

double max_hard_value(const LossSystem& sys, const std::vector<double>& values) {
    double worst = 0.0;
    for (size_t i = 0; i < sys.terms.size(); ++i)
        if (sys.terms[i].hard) worst = std::max(worst, values[i]);
    return worst;
}

}  // namespace

SolveResult solve_traced(const GeoProgram& p, const SolveConfig& cfg,
                         std::vector<double>* trace) {
    LossSystem sys = build_losses(p, cfg);
    Rng rng(cfg.seed);
    const int n = sys.layout.size();
    const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;

    SolveResult result;
    result.layout = sys.layout;
    result.terms = sys.terms;

    const int attempts = std::max(1, cfg.attempts);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::vector<double> params = init_params(sys.layout, cfg, rng);
        std::vector<double> m(n, 0.0), vv(n, 0.0);
        std::vector<double> values, grad(n, 0.0);
        if (trace) trace->clear();

        int iter = 0;
        bool converged = false;
        for (; iter < cfg.max_iters; ++iter) {
            eval_all(sys, params, values, &grad);
            if (trace) {
                double total = 0.0;
                for (size_t i = 0; i < sys.terms.size(); ++i)
                    total += sys.terms[i].weight * values[i];
                trace->push_back(total);
            }
            if (max_hard_value(sys, values) <= cfg.epsilon) {
                converged = true;
                break;
            }
            double lr = cfg.lr_initial *
                        std::pow(cfg.lr_decay_factor,
                                 static_cast<double>(iter / cfg.lr_decay_every));
            double t = static_cast<double>(iter + 1);
            double bc1 = 1.0 - std::pow(beta1, t);
            double bc2 = 1.0 - std::pow(beta2, t);
            for (int d = 0; d < n; ++d) {
                m[d] = beta1 * m[d] + (1.0 - beta1) * grad[d];
                vv[d] = beta2 * vv[d] + (1.0 - beta2) * grad[d] * grad[d];
                params[d] -= lr * (m[d] / bc1) / (std::sqrt(vv[d] / bc2) + adam_eps);
            }
        }
        if (!converged) {
            eval_all(sys, params, values, nullptr);
            converged = max_hard_value(sys, values) <= cfg.epsilon;
        }

        result.params = std::move(params);
        result.term_values = values;
        result.iterations = iter;
        result.attempts = attempt + 1;
        result.max_hard = max_hard_value(sys, values);
        if (converged) {
            result.status = SolveStatus::Solved;
            return result;
        }
    }
    result.status = SolveStatus::Unsolvable;
    return result;
}

SolveResult solve(const GeoProgram& p, const SolveConfig& cfg) {
    return solve_traced(p, cfg, nullptr);
}

// ---------------------------------------------------------------------------
// Standalone losses

double prescribed_length_loss(Vec2 p1, Vec2 p2, double length) {
    double d = std::hypot(p1.x - p2.x, p1.y - p2.y);
    double e = d - length;
    return e * e;
}

double prescribed_angle_loss(Vec2 vertex, Vec2 p1, Vec2 p2, double theta) {
    double ux = p1.x - vertex.x, uy = p1.y - vertex.y;
    double wx = p2.x - vertex.x, wy = p2.y - vertex.y;
    double cu = std::hypot(ux, uy), cw = std::hypot(wx, wy);
    if (cu == 0.0 || cw == 0.0)
        throw DegenerateArm("angle arm has zero length");
    double c0 = std::clamp((ux * wx + uy * wy) / (cu * cw), -1.0 + kCosClamp,
                           1.0 - kCosClamp);
    double e = std::acos(c0) - theta;
    return e * e;
}

// ---------------------------------------------------------------------------
// Decoding and JSON

SceneGeometry decode_scene(const SceneLayout& layout,
                           const std::vector<double>& params) {
    SceneGeometry g;
    g.points.resize(layout.n_points);
    for (int i = 0; i < layout.n_points; ++i)
        g.points[i] = {params[layout.point_offset(i)],
                       params[layout.point_offset(i) + 1]};
    g.lines.resize(layout.n_lines);
    for (int j = 0; j < layout.n_lines; ++j)
        g.lines[j] = {params[layout.line_offset(j)],
                      params[layout.line_offset(j) + 1],
                      params[layout.line_offset(j) + 2]};
    g.circles.resize(layout.n_circles);
    for (int k = 0; k < layout.n_circles; ++k)
        g.circles[k] = {params[layout.circle_offset(k)],
                        params[layout.circle_offset(k) + 1],
                        softplus(params[layout.circle_offset(k) + 2])};
    return g;
}

std::string solve_result_to_json(const SolveResult& r, const GeoProgram& p) {
    nlohmann::ordered_json j;
    j["status"] = r.solved() ? "Solved" : "Unsolvable";
    SceneGeometry g = decode_scene(r.layout, r.params);
    nlohmann::ordered_json points(nlohmann::json::value_t::object);
    for (int i = 0; i < r.layout.n_points; ++i)
        points[p.point_name(i)] = {g.points[i].x, g.points[i].y};
    j["points"] = points;
    nlohmann::ordered_json lines(nlohmann::json::value_t::object);
    for (int i = 0; i < r.layout.n_lines; ++i)
        lines[p.line_name(i)] = {g.lines[i][0], g.lines[i][1], g.lines[i][2]};
    j["lines"] = lines;
    nlohmann::ordered_json circles(nlohmann::json::value_t::object);
    for (int i = 0; i < r.layout.n_circles; ++i)
        circles[p.circle_name(i)] = {g.circles[i][0], g.circles[i][1],
                                     g.circles[i][2]};
    j["circles"] = circles;
    nlohmann::ordered_json losses(nlohmann::json::value_t::object);
    for (size_t i = 0; i < r.terms.size(); ++i)
        losses[r.terms[i].id] = r.term_values.empty() ? 0.0 : r.term_values[i];
    j["losses"] = losses;
    j["iterations"] = r.iterations;
    return j.dump();
}

SolveConfig solve_config_from_json(const std::string& json_text) {
    SolveConfig cfg;
    if (json_text.empty()) return cfg;
    nlohmann::json j = nlohmann::json::parse(json_text);
    cfg.max_iters = j.value("max_iters", cfg.max_iters);
    cfg.lr_initial = j.value("lr_initial", cfg.lr_initial);
    cfg.lr_decay_factor = j.value("lr_decay_factor", cfg.lr_decay_factor);
    cfg.lr_decay_every = j.value("lr_decay_every", cfg.lr_decay_every);
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.lambda = j.value("lambda", cfg.lambda);
    cfg.density_tau = j.value("density_tau", cfg.density_tau);
    cfg.spread_rho = j.value("spread_rho", cfg.spread_rho);
    cfg.scale_min_dist = j.value("scale_min_dist", cfg.scale_min_dist);
    cfg.attempts = j.value("attempts", cfg.attempts);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.init_point_range = j.value("init_point_range", cfg.init_point_range);
    cfg.init_center_range = j.value("init_center_range", cfg.init_center_range);
    cfg.init_radius_min = j.value("init_radius_min", cfg.init_radius_min);
    cfg.init_radius_max = j.value("init_radius_max", cfg.init_radius_max);
    cfg.init_offset_range = j.value("init_offset_range", cfg.init_offset_range);
    if (cfg.max_iters < 1 || cfg.epsilon <= 0 || cfg.density_tau <= 0 ||
        cfg.spread_rho <= 0 || cfg.lr_decay_every < 1 || cfg.lr_initial <= 0 ||
        cfg.attempts < 1)
        throw std::invalid_argument("invalid solve configuration");
    return cfg;
}

}  // namespace geoforge
