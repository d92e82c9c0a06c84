// SPDX-License-Identifier: Apache-2.0
//
// Procedural program sampling: a seed primitive (triangle, quadrilateral or
// circle) followed by a fixed number of construction steps, each drawn
// uniformly from the operations whose preconditions hold on the scene.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsl.hpp"
#include "rng.hpp"

namespace geoforge {

struct GenConfig {
    int extra_steps = 1;
    std::uint64_t seed = 0;

    double triangle_prob = 0.5;
    double quadrilateral_prob = 0.3;  // remainder goes to the circle seed
    double circle_prob = 0.2;
    double center_prob = 0.7;  // seed circle gets a centre point

    double orthocentre_label_prob = 0.5;
    double circumcentre_center_prob = 0.5;
    double incentre_center_prob = 0.5;
    double touch_point_prob = 0.4;
};

GenConfig gen_config_from_json(const std::string& json_text);

enum class OpKind {
    Orthocentre,
    Circumcentre,
    Incentre,
    Segment,
    TwoPointsConnect,
    PointConnectExisting,
};
inline constexpr OpKind kAllOps[] = {
    OpKind::Orthocentre,   OpKind::Circumcentre,    OpKind::Incentre,
    OpKind::Segment,       OpKind::TwoPointsConnect, OpKind::PointConnectExisting,
};

const char* op_kind_name(OpKind kind);

struct ConstructionDescription {
    OpKind kind;
    std::string text;
};

class Inadmissible : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Seed primitive: triangle / quadrilateral / circle by configured odds.
GeoProgram init_scene(const GenConfig& cfg, Rng& rng);

// True when the operation's preconditions hold on the scene.
bool prepare(OpKind kind, const GeoProgram& scene);

// Extends the scene in place. Throws Inadmissible if prepare() is false.
ConstructionDescription apply(OpKind kind, GeoProgram& scene, const GenConfig& cfg,
                              Rng& rng);

GeoProgram generate(const GenConfig& cfg,
                    std::vector<ConstructionDescription>* log = nullptr);

}  // namespace geoforge
