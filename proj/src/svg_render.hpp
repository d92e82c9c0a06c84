// SPDX-License-Identifier: Apache-2.0
//
// Vector rendering of solved scenes. Lines are drawn as finite segments
// spanning their incident points (extended 5% past each end), circles in
// full, labeled points as markers with text labels pushed away from the
// point cloud's centroid.
#pragma once

#include <stdexcept>
#include <string>

#include "dsl.hpp"
#include "solver.hpp"

namespace geoforge {

struct RenderConfig {
    int width = 512;
    int height = 512;
    double margin = 0.08;  // fraction of each dimension kept clear
    double stroke_width = 2.0;
    double marker_radius = 3.0;
    double font_size = 14.0;
    std::string line_color = "#d62728";  // red strokes, as in the figures
    std::string point_color = "#111111";
    std::string label_color = "#111111";
    std::string background = "#ffffff";
};

RenderConfig render_config_from_json(const std::string& json_text);

class NotSolved : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Canvas [-1,1]^2 to pixel coordinates; y flips so +y points up.
struct CanvasTransform {
    int width, height;
    double margin;

    double px(double x) const {
        return margin * width + (x + 1.0) * 0.5 * (1.0 - 2.0 * margin) * width;
    }
    double py(double y) const {
        return height -
               (margin * height + (y + 1.0) * 0.5 * (1.0 - 2.0 * margin) * height);
    }
};

// Deterministic SVG 1.1 document. Throws NotSolved unless scene.solved().
std::string render_svg(const SolveResult& scene, const GeoProgram& program,
                       const RenderConfig& cfg);

}  // namespace geoforge
