// SPDX-License-Identifier: Apache-2.0
#include "svg_render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace geoforge {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    // avoid the two spellings of zero
    if (std::string(buf) == "-0.00") return "0.00";
    return buf;
}

// Liang-Barsky clip of a segment to [0,w] x [0,h]. False when fully outside.
bool clip_segment(double& x1, double& y1, double& x2, double& y2, double w,
                  double h) {
    double t0 = 0.0, t1 = 1.0;
    double dx = x2 - x1, dy = y2 - y1;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {x1 - 0.0, w - x1, y1 - 0.0, h - y1};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;
            continue;
        }
        double r = q[i] / p[i];
        if (p[i] < 0.0) {
            if (r > t1) return false;
            t0 = std::max(t0, r);
        } else {
            if (r < t0) return false;
            t1 = std::min(t1, r);
        }
    }
    double nx1 = x1 + t0 * dx, ny1 = y1 + t0 * dy;
    double nx2 = x1 + t1 * dx, ny2 = y1 + t1 * dy;
    x1 = nx1;
    y1 = ny1;
    x2 = nx2;
    y2 = ny2;
    return true;
}

}  // namespace

RenderConfig render_config_from_json(const std::string& json_text) {
    RenderConfig cfg;
    if (json_text.empty()) return cfg;
    nlohmann::json j = nlohmann::json::parse(json_text);
    cfg.width = j.value("width", cfg.width);
    cfg.height = j.value("height", cfg.height);
    cfg.margin = j.value("margin", cfg.margin);
    cfg.stroke_width = j.value("stroke_width", cfg.stroke_width);
    cfg.marker_radius = j.value("marker_radius", cfg.marker_radius);
    cfg.font_size = j.value("font_size", cfg.font_size);
    cfg.line_color = j.value("line_color", cfg.line_color);
    cfg.point_color = j.value("point_color", cfg.point_color);
    cfg.label_color = j.value("label_color", cfg.label_color);
    cfg.background = j.value("background", cfg.background);
    if (cfg.width < 64 || cfg.height < 64 || cfg.margin < 0.0 || cfg.margin >= 0.4)
        throw std::invalid_argument("invalid render configuration");
    return cfg;
}

std::string render_svg(const SolveResult& scene, const GeoProgram& program,
                       const RenderConfig& cfg) {
    if (!scene.solved()) throw NotSolved("cannot render an unsolved scene");
    SceneGeometry g = decode_scene(scene.layout, scene.params);
    CanvasTransform tr{cfg.width, cfg.height, cfg.margin};

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(cfg.width) + "\" height=\"" + std::to_string(cfg.height) +
           "\" viewBox=\"0 0 " + std::to_string(cfg.width) + " " +
           std::to_string(cfg.height) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(cfg.width) +
           "\" height=\"" + std::to_string(cfg.height) + "\" fill=\"" +
           cfg.background + "\"/>\n";

    for (size_t j = 0; j < program.lines.size(); ++j) {
        const auto& [a, b, c] = g.lines[j];
        double n2 = a * a + b * b;
        if (n2 < 1e-12) continue;
        // parameterize along the direction, anchored at the closest point
        // to the origin; incident point projections give the visible span
        double bx = -c * a / n2, by = -c * b / n2;
        double dx = -b / std::sqrt(n2), dy = a / std::sqrt(n2);
        double tmin = 0, tmax = 0;
        bool first = true;
        for (int pt : program.lines[j].through) {
            double t = (g.points[pt].x - bx) * dx + (g.points[pt].y - by) * dy;
            tmin = first ? t : std::min(tmin, t);
            tmax = first ? t : std::max(tmax, t);
            first = false;
        }
        double ext = 0.05 * (tmax - tmin);
        if (tmax - tmin < 1e-9) ext = 0.1;  // degenerate span
        double x1 = tr.px(bx + (tmin - ext) * dx);
        double y1 = tr.py(by + (tmin - ext) * dy);
        double x2 = tr.px(bx + (tmax + ext) * dx);
        double y2 = tr.py(by + (tmax + ext) * dy);
        if (!clip_segment(x1, y1, x2, y2, cfg.width, cfg.height)) continue;
        out += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" +
               fmt(x2) + "\" y2=\"" + fmt(y2) + "\" stroke=\"" + cfg.line_color +
               "\" stroke-width=\"" + fmt(cfg.stroke_width) + "\"/>\n";
    }

    const double scale_x = 0.5 * (1.0 - 2.0 * cfg.margin) * cfg.width;
    for (size_t k = 0; k < program.circles.size(); ++k) {
        const auto& [cx, cy, r] = g.circles[k];
        out += "<circle cx=\"" + fmt(tr.px(cx)) + "\" cy=\"" + fmt(tr.py(cy)) +
               "\" r=\"" + fmt(r * scale_x) + "\" fill=\"none\" stroke=\"" +
               cfg.line_color + "\" stroke-width=\"" + fmt(cfg.stroke_width) +
               "\"/>\n";
    }

    // markers for every point, labels only for the named ones
    double mx = 0, my = 0;
    for (const Vec2& p : g.points) {
        mx += p.x;
        my += p.y;
    }
    if (!g.points.empty()) {
        mx /= static_cast<double>(g.points.size());
        my /= static_cast<double>(g.points.size());
    }
    // labels flee the crowded side: centroid of nearby points when there
    // are any, global centroid otherwise
    auto local_centroid = [&g, mx, my](size_t self) {
        double sx = 0, sy = 0;
        int n = 0;
        for (size_t j = 0; j < g.points.size(); ++j) {
            if (j == self) continue;
            if (std::hypot(g.points[j].x - g.points[self].x,
                           g.points[j].y - g.points[self].y) > 0.35)
                continue;
            sx += g.points[j].x;
            sy += g.points[j].y;
            ++n;
        }
        if (n == 0) return Vec2{mx, my};
        return Vec2{sx / n, sy / n};
    };
    for (size_t i = 0; i < program.points.size(); ++i) {
        const Vec2& p = g.points[i];
        out += "<circle cx=\"" + fmt(tr.px(p.x)) + "\" cy=\"" + fmt(tr.py(p.y)) +
               "\" r=\"" + fmt(cfg.marker_radius) + "\" fill=\"" +
               cfg.point_color + "\"/>\n";
        if (program.points[i].anonymous()) continue;
        Vec2 centroid = local_centroid(i);
        double ox = p.x - centroid.x, oy = p.y - centroid.y;
        double len = std::hypot(ox, oy);
        if (len < 1e-9) {
            ox = 1.0;
            oy = 1.0;
            len = std::sqrt(2.0);
        }
        double push = cfg.marker_radius + 0.6 * cfg.font_size;
        double lx = tr.px(p.x) + push * ox / len;
        double ly = tr.py(p.y) - push * oy / len;
        out += "<text x=\"" + fmt(lx) + "\" y=\"" + fmt(ly) +
               "\" font-family=\"sans-serif\" font-size=\"" + fmt(cfg.font_size) +
               "\" fill=\"" + cfg.label_color +
               "\" text-anchor=\"middle\" dominant-baseline=\"middle\">" +
               program.points[i].name() + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace geoforge
