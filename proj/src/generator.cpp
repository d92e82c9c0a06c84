// SPDX-License-Identifier: Apache-2.0
#include "generator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <json.hpp>

namespace geoforge {

const char* op_kind_name(OpKind kind) {
    switch (kind) {
        case OpKind::Orthocentre: return "orthocentre";
        case OpKind::Circumcentre: return "circumcentre";
        case OpKind::Incentre: return "incentre";
        case OpKind::Segment: return "segment";
        case OpKind::TwoPointsConnect: return "two_points_connect";
        case OpKind::PointConnectExisting: return "point_connect_existing";
    }
    return "?";
}

namespace {

std::optional<char> fresh_label(const GeoProgram& p) {
    bool used[26] = {};
    for (const auto& pt : p.points)
        if (pt.label) used[*pt.label - 'A'] = true;
    for (int i = 0; i < 26; ++i)
        if (!used[i]) return static_cast<char>('A' + i);
    return std::nullopt;
}

int free_label_count(const GeoProgram& p) {
    int labeled = 0;
    bool used[26] = {};
    for (const auto& pt : p.points)
        if (pt.label && !used[*pt.label - 'A']) {
            used[*pt.label - 'A'] = true;
            ++labeled;
        }
    return 26 - labeled;
}

int add_point(GeoProgram& p, std::optional<char> label) {
    PointDecl decl;
    if (label) {
        decl.label = *label;
    } else {
        int max_anon = 0;
        for (const auto& pt : p.points)
            max_anon = std::max(max_anon, pt.anon_index);
        decl.anon_index = max_anon + 1;
    }
    p.points.push_back(decl);
    return static_cast<int>(p.points.size()) - 1;
}

// Labeled with the given probability while letters remain, else anonymous.
int add_random_point(GeoProgram& p, double label_prob, Rng& rng) {
    bool want_label = rng.chance(label_prob);
    auto label = fresh_label(p);
    return add_point(p, want_label && label ? label : std::nullopt);
}

std::vector<int> lines_through_both(const GeoProgram& p, int a, int b) {
    std::vector<int> result;
    for (size_t j = 0; j < p.lines.size(); ++j) {
        const auto& t = p.lines[j].through;
        if (std::find(t.begin(), t.end(), a) != t.end() &&
            std::find(t.begin(), t.end(), b) != t.end())
            result.push_back(static_cast<int>(j));
    }
    return result;
}

struct Triangle {
    int a, b, c;        // vertex point indices
    int bc, ac, ab;     // side line indices; bc is opposite a, etc.
};

// Point triples whose three connecting sides can be realized by three
// distinct declared lines. A triple covered only by one common line (all
// three collinear by declaration) is not a triangle.
std::vector<Triangle> find_triangles(const GeoProgram& p) {
    std::vector<Triangle> out;
    const int n = static_cast<int>(p.points.size());
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            auto ab_lines = lines_through_both(p, a, b);
            if (ab_lines.empty()) continue;
            for (int c = b + 1; c < n; ++c) {
                auto bc_lines = lines_through_both(p, b, c);
                if (bc_lines.empty()) continue;
                auto ac_lines = lines_through_both(p, a, c);
                if (ac_lines.empty()) continue;
                bool found = false;
                for (int lab : ab_lines) {
                    for (int lbc : bc_lines) {
                        if (lbc == lab) continue;
                        for (int lac : ac_lines) {
                            if (lac == lab || lac == lbc) continue;
                            out.push_back({a, b, c, lbc, lac, lab});
                            found = true;
                            break;
                        }
                        if (found) break;
                    }
                    if (found) break;
                }
            }
        }
    }
    return out;
}

struct Curve {
    CurveKind kind;
    int index;
};

std::vector<Curve> all_curves(const GeoProgram& p) {
    std::vector<Curve> out;
    for (size_t j = 0; j < p.lines.size(); ++j)
        out.push_back({CurveKind::Line, static_cast<int>(j)});
    for (size_t k = 0; k < p.circles.size(); ++k)
        out.push_back({CurveKind::Circle, static_cast<int>(k)});
    return out;
}

bool point_on_curve(const GeoProgram& p, int point, Curve c) {
    const auto& through = c.kind == CurveKind::Line ? p.lines[c.index].through
                                                    : p.circles[c.index].through;
    return std::find(through.begin(), through.end(), point) != through.end();
}

void append_to_curve(GeoProgram& p, Curve c, int point) {
    if (c.kind == CurveKind::Line)
        p.lines[c.index].through.push_back(point);
    else
        p.circles[c.index].through.push_back(point);
}

std::string curve_name(const GeoProgram& p, Curve c) {
    return c.kind == CurveKind::Line ? p.line_name(c.index) : p.circle_name(c.index);
}

std::vector<std::pair<int, int>> unjoined_pairs(const GeoProgram& p) {
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(p.points.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (lines_through_both(p, i, j).empty()) out.emplace_back(i, j);
    return out;
}

std::vector<std::pair<int, Curve>> off_curve_pairs(const GeoProgram& p) {
    std::vector<std::pair<int, Curve>> out;
    auto curves = all_curves(p);
    for (int i = 0; i < static_cast<int>(p.points.size()); ++i)
        for (Curve c : curves)
            if (!point_on_curve(p, i, c)) out.emplace_back(i, c);
    return out;
}

int add_line(GeoProgram& p, std::vector<int> through) {
    p.lines.push_back({std::move(through)});
    return static_cast<int>(p.lines.size()) - 1;
}

void add_constraint_lines(GeoProgram& p, ConstraintKind kind, int a, int b) {
    ConstraintDecl r;
    r.kind = kind;
    r.curves = {a, b};
    p.constraints.push_back(r);
}

std::string triangle_name(const GeoProgram& p, const Triangle& t) {
    return p.point_name(t.a) + p.point_name(t.b) + p.point_name(t.c);
}

}  // namespace

GeoProgram init_scene(const GenConfig& cfg, Rng& rng) {
    GeoProgram p;
    double r = rng.uniform();
    if (r < cfg.triangle_prob) {
        int a = add_point(p, fresh_label(p));
        int b = add_point(p, fresh_label(p));
        int c = add_point(p, fresh_label(p));
        add_line(p, {a, b});
        add_line(p, {b, c});
        add_line(p, {c, a});
    } else if (r < cfg.triangle_prob + cfg.quadrilateral_prob) {
        int a = add_point(p, fresh_label(p));
        int b = add_point(p, fresh_label(p));
        int c = add_point(p, fresh_label(p));
        int d = add_point(p, fresh_label(p));
        add_line(p, {a, b});
        add_line(p, {b, c});
        add_line(p, {c, d});
        add_line(p, {d, a});
    } else {
        CircleDecl circle;
        if (rng.chance(cfg.center_prob))
            circle.center = add_point(p, fresh_label(p));
        p.circles.push_back(circle);
    }
    return p;
}

bool prepare(OpKind kind, const GeoProgram& scene) {
    switch (kind) {
        case OpKind::Orthocentre:
        case OpKind::Circumcentre:
        case OpKind::Incentre:
            return !find_triangles(scene).empty();
        case OpKind::Segment:
            return !unjoined_pairs(scene).empty();
        case OpKind::TwoPointsConnect:
            return !all_curves(scene).empty() && free_label_count(scene) >= 2;
        case OpKind::PointConnectExisting:
            return free_label_count(scene) >= 1 && !off_curve_pairs(scene).empty();
    }
    return false;
}

ConstructionDescription apply(OpKind kind, GeoProgram& scene, const GenConfig& cfg,
                              Rng& rng) {
    if (!prepare(kind, scene))
        throw Inadmissible(std::string(op_kind_name(kind)) +
                           " applied to an inadmissible scene");
    ConstructionDescription desc;
    desc.kind = kind;
    switch (kind) {
        case OpKind::Orthocentre: {
            auto triangles = find_triangles(scene);
            Triangle t = triangles[rng.index(triangles.size())];
            int h = add_random_point(scene, cfg.orthocentre_label_prob, rng);
            int ah = add_line(scene, {t.a, h});
            int bh = add_line(scene, {t.b, h});
            int ch = add_line(scene, {t.c, h});
            add_constraint_lines(scene, ConstraintKind::Perpendicular, ah, t.bc);
            add_constraint_lines(scene, ConstraintKind::Perpendicular, bh, t.ac);
            add_constraint_lines(scene, ConstraintKind::Perpendicular, ch, t.ab);
            desc.text = "orthocentre " + scene.point_name(h) + " of triangle " +
                        triangle_name(scene, t) + " with its three altitudes";
            break;
        }
        case OpKind::Circumcentre: {
            auto triangles = find_triangles(scene);
            Triangle t = triangles[rng.index(triangles.size())];
            CircleDecl circle;
            std::string centre_note = " without a marked centre";
            if (rng.chance(cfg.circumcentre_center_prob)) {
                if (auto label = fresh_label(scene)) {
                    circle.center = add_point(scene, label);
                    centre_note = " centred at " + scene.point_name(*circle.center);
                }
            }
            circle.through = {t.a, t.b, t.c};
            scene.circles.push_back(circle);
            desc.text = "circumcircle of triangle " + triangle_name(scene, t) +
                        centre_note;
            break;
        }
        case OpKind::Incentre: {
            auto triangles = find_triangles(scene);
            Triangle t = triangles[rng.index(triangles.size())];
            CircleDecl circle;
            std::string centre_note = " without a marked centre";
            if (rng.chance(cfg.incentre_center_prob)) {
                if (auto label = fresh_label(scene)) {
                    circle.center = add_point(scene, label);
                    centre_note = " centred at " + scene.point_name(*circle.center);
                }
            }
            scene.circles.push_back(circle);
            int inc = static_cast<int>(scene.circles.size()) - 1;
            ConstraintDecl tangent;
            tangent.kind = ConstraintKind::LineCircleTangent;
            for (int side : {t.ab, t.bc, t.ac}) {
                tangent.curves = {side, inc};
                scene.constraints.push_back(tangent);
            }
            int touches = 0;
            // The incircle's through list collects only the touch points; the
            // tangency constraints already carry the side geometry.
            for (int side : {t.ab, t.bc, t.ac}) {
                if (!rng.chance(cfg.touch_point_prob)) continue;
                int p = add_random_point(scene, 1.0, rng);
                scene.circles[inc].through.push_back(p);
                scene.lines[side].through.push_back(p);
                ++touches;
            }
            desc.text = "incircle of triangle " + triangle_name(scene, t) +
                        centre_note + ", tangent to all three sides" +
                        (touches ? " with " + std::to_string(touches) +
                                       " marked touch points"
                                 : "");
            break;
        }
        case OpKind::Segment: {
            auto pairs = unjoined_pairs(scene);
            auto [a, b] = pairs[rng.index(pairs.size())];
            add_line(scene, {a, b});
            desc.text = "segment " + scene.point_name(a) + scene.point_name(b);
            break;
        }
        case OpKind::TwoPointsConnect: {
            auto curves = all_curves(scene);
            Curve c1 = curves[rng.index(curves.size())];
            Curve c2 = curves[rng.index(curves.size())];
            int a = add_point(scene, fresh_label(scene));
            append_to_curve(scene, c1, a);
            int b = add_point(scene, fresh_label(scene));
            append_to_curve(scene, c2, b);
            add_line(scene, {a, b});
            desc.text = "new points " + scene.point_name(a) + " on " +
                        curve_name(scene, c1) + " and " + scene.point_name(b) +
                        " on " + curve_name(scene, c2) + ", connected";
            break;
        }
        case OpKind::PointConnectExisting: {
            auto pairs = off_curve_pairs(scene);
            auto [p, curve] = pairs[rng.index(pairs.size())];
            int a = add_point(scene, fresh_label(scene));
            append_to_curve(scene, curve, a);
            add_line(scene, {a, p});
            desc.text = "new point " + scene.point_name(a) + " on " +
                        curve_name(scene, curve) + " connected to " +
                        scene.point_name(p);
            break;
        }
    }
    return desc;
}

GeoProgram generate(const GenConfig& cfg, std::vector<ConstructionDescription>* log) {
    Rng rng(cfg.seed);
    GeoProgram scene = init_scene(cfg, rng);
    for (int step = 0; step < cfg.extra_steps; ++step) {
        std::vector<OpKind> admissible;
        for (OpKind kind : kAllOps)
            if (prepare(kind, scene)) admissible.push_back(kind);
        if (admissible.empty()) break;
        OpKind kind = admissible[rng.index(admissible.size())];
        ConstructionDescription desc = apply(kind, scene, cfg, rng);
        if (log) log->push_back(std::move(desc));
    }
    return scene;
}

GenConfig gen_config_from_json(const std::string& json_text) {
    GenConfig cfg;
    if (json_text.empty()) return cfg;
    nlohmann::json j = nlohmann::json::parse(json_text);
    cfg.extra_steps = j.value("extra_steps", cfg.extra_steps);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("init_probs")) {
        const auto& ip = j["init_probs"];
        cfg.triangle_prob = ip.value("triangle", cfg.triangle_prob);
        cfg.quadrilateral_prob = ip.value("quadrilateral", cfg.quadrilateral_prob);
        cfg.circle_prob = ip.value("circle", cfg.circle_prob);
    }
    cfg.center_prob = j.value("center_prob", cfg.center_prob);
    cfg.orthocentre_label_prob =
        j.value("orthocentre_label_prob", cfg.orthocentre_label_prob);
    cfg.circumcentre_center_prob =
        j.value("circumcentre_center_prob", cfg.circumcentre_center_prob);
    cfg.incentre_center_prob =
        j.value("incentre_center_prob", cfg.incentre_center_prob);
    cfg.touch_point_prob = j.value("touch_point_prob", cfg.touch_point_prob);

    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (cfg.extra_steps < 0 || !in_unit(cfg.triangle_prob) ||
        !in_unit(cfg.quadrilateral_prob) || !in_unit(cfg.circle_prob) ||
        !in_unit(cfg.center_prob) || !in_unit(cfg.orthocentre_label_prob) ||
        !in_unit(cfg.circumcentre_center_prob) ||
        !in_unit(cfg.incentre_center_prob) || !in_unit(cfg.touch_point_prob))
        throw std::invalid_argument("generator probabilities must be in [0,1]");
    if (std::abs(cfg.triangle_prob + cfg.quadrilateral_prob + cfg.circle_prob -
                 1.0) > 1e-9)
        throw std::invalid_argument("init probabilities must sum to 1");
    return cfg;
}

}  // namespace geoforge
