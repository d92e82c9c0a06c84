// SPDX-License-Identifier: Apache-2.0
#include "scoring.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <json.hpp>

#include "assignment.hpp"

namespace geoforge {

const char* category_name(Category c) {
    switch (c) {
        case Category::Points: return "points";
        case Category::Lines: return "lines";
        case Category::Circles: return "circles";
        case Category::Constraints: return "constraints";
    }
    return "?";
}

const CategoryScore& ScoreReport::category(Category c) const {
    switch (c) {
        case Category::Points: return points;
        case Category::Lines: return lines;
        case Category::Circles: return circles;
        default: return constraints;
    }
}

namespace {

Frac point_similarity(const GeoProgram& ga, int ia, const GeoProgram& gb, int ib) {
    const PointDecl& a = ga.points.at(ia);
    const PointDecl& b = gb.points.at(ib);
    if (a.anonymous() && b.anonymous()) return Frac(1);
    if (a.anonymous() || b.anonymous()) return Frac(0);
    return Frac(*a.label == *b.label ? 1 : 0);
}

// Best one-to-one match count between two point multisets. Labels only ever
// match the same label and anonymous points only each other, so the optimal
// assignment reduces to counting.
int matched_point_count(const GeoProgram& ga, const std::vector<int>& a,
                        const GeoProgram& gb, const std::vector<int>& b) {
    std::map<char, int> labels_a, labels_b;
    int anon_a = 0, anon_b = 0;
    for (int idx : a) {
        const PointDecl& p = ga.points.at(idx);
        if (p.anonymous())
            ++anon_a;
        else
            ++labels_a[*p.label];
    }
    for (int idx : b) {
        const PointDecl& p = gb.points.at(idx);
        if (p.anonymous())
            ++anon_b;
        else
            ++labels_b[*p.label];
    }
    int matched = std::min(anon_a, anon_b);
    for (const auto& [label, count] : labels_a) {
        auto it = labels_b.find(label);
        if (it != labels_b.end()) matched += std::min(count, it->second);
    }
    return matched;
}

// F1 between two point sets. Identical empty sets count as a perfect match;
// the zero branch of the category-level formula applies only to categories.
Frac point_set_f1(const GeoProgram& ga, const std::vector<int>& a,
                  const GeoProgram& gb, const std::vector<int>& b) {
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(b.size());
    if (m == 0 && n == 0) return Frac(1);
    if (m == 0 || n == 0) return Frac(0);
    int s = matched_point_count(ga, a, gb, b);
    if (s == 0) return Frac(0);
    return Frac(2 * s, m + n);
}

Frac line_similarity(const GeoProgram& ga, int ia, const GeoProgram& gb, int ib) {
    return point_set_f1(ga, incident_points(ga, {CurveKind::Line, ia}), gb,
                        incident_points(gb, {CurveKind::Line, ib}));
}

Frac circle_similarity(const GeoProgram& ga, int ia, const GeoProgram& gb, int ib) {
    const CircleDecl& a = ga.circles.at(ia);
    const CircleDecl& b = gb.circles.at(ib);
    Frac center_sim(0);
    if (!a.center && !b.center)
        center_sim = Frac(1);
    else if (a.center && b.center)
        center_sim = point_similarity(ga, *a.center, gb, *b.center);
    Frac incident = point_set_f1(ga, incident_points(ga, {CurveKind::Circle, ia}),
                                 gb, incident_points(gb, {CurveKind::Circle, ib}));
    return (center_sim + incident) / Frac(2);
}

// F1 over an unordered pair of elements; with m = n = 2 this reduces to
// S/2 with S the better of the two pairings.
Frac pair_f1(Frac s00, Frac s01, Frac s10, Frac s11) {
    Frac straight = s00 + s11;
    Frac crossed = s01 + s10;
    Frac best = std::max(straight, crossed);
    if (best == Frac(0)) return Frac(0);
    return best / Frac(2);
}

std::vector<int> distance_points(const ConstraintDecl& r, int which) {
    return {r.points[2 * which], r.points[2 * which + 1]};
}

}  // namespace

Frac constraint_score(const GeoProgram& ga, const ConstraintDecl& a,
                      const GeoProgram& gb, const ConstraintDecl& b) {
    if (a.kind != b.kind) return Frac(0);
    switch (a.kind) {
        case ConstraintKind::Parallel:
        case ConstraintKind::Perpendicular:
            return pair_f1(line_similarity(ga, a.curves[0], gb, b.curves[0]),
                           line_similarity(ga, a.curves[0], gb, b.curves[1]),
                           line_similarity(ga, a.curves[1], gb, b.curves[0]),
                           line_similarity(ga, a.curves[1], gb, b.curves[1]));
        case ConstraintKind::CircleCircleTangent:
            return pair_f1(circle_similarity(ga, a.curves[0], gb, b.curves[0]),
                           circle_similarity(ga, a.curves[0], gb, b.curves[1]),
                           circle_similarity(ga, a.curves[1], gb, b.curves[0]),
                           circle_similarity(ga, a.curves[1], gb, b.curves[1]));
        case ConstraintKind::LineCircleTangent:
            return (line_similarity(ga, a.curves[0], gb, b.curves[0]) +
                    circle_similarity(ga, a.curves[1], gb, b.curves[1])) /
                   Frac(2);
        case ConstraintKind::EqualDistance: {
            auto f1 = [&](int ia, int ib) {
                return point_set_f1(ga, distance_points(a, ia), gb,
                                    distance_points(b, ib));
            };
            Frac straight = f1(0, 0) + f1(1, 1);
            Frac crossed = f1(0, 1) + f1(1, 0);
            return std::max(straight, crossed) / Frac(2);
        }
    }
    return Frac(0);
}

Frac element_similarity(const GeoProgram& ga, Category ca, int ia,
                        const GeoProgram& gb, Category cb, int ib) {
    if (ca != cb)
        throw CategoryMismatch("cannot compare elements across categories");
    switch (ca) {
        case Category::Points: return point_similarity(ga, ia, gb, ib);
        case Category::Lines: return line_similarity(ga, ia, gb, ib);
        case Category::Circles: return circle_similarity(ga, ia, gb, ib);
        case Category::Constraints:
            return constraint_score(ga, ga.constraints.at(ia), gb,
                                    gb.constraints.at(ib));
    }
    return Frac(0);
}

namespace {

// Maximum total of a Frac similarity matrix, computed exactly: scale all
// entries to a common denominator and run the integer assignment.
Frac exact_matched_mass(const std::vector<std::vector<Frac>>& sim) {
    const int m = static_cast<int>(sim.size());
    const int n = m ? static_cast<int>(sim[0].size()) : 0;
    if (m == 0 || n == 0) return Frac(0);

    // scaled totals and solver potentials stay within ~max(m,n) * scale
    const long long scale_limit =
        0x7fffffffffffffffLL / (8 * static_cast<long long>(m + n + 2));
    long long scale = 1;
    for (const auto& row : sim)
        for (const Frac& f : row) {
            long long g = std::gcd(scale, f.den);
            __int128 next = static_cast<__int128>(scale) / g * f.den;
            if (next > scale_limit)
                throw std::overflow_error("similarity denominators overflow");
            scale = static_cast<long long>(next);
        }
    std::vector<std::vector<long long>> scaled(m, std::vector<long long>(n));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            scaled[i][j] = sim[i][j].num * (scale / sim[i][j].den);
    return Frac(assignment_max_total(scaled), scale);
}

CategoryScore fill_category(Frac matched, int m, int n) {
    CategoryScore cs;
    cs.m = m;
    cs.n = n;
    cs.both_empty = (m == 0 && n == 0);
    cs.matched_mass = matched.to_double();
    Frac precision = n > 0 ? matched / Frac(n) : Frac(0);
    Frac recall = m > 0 ? matched / Frac(m) : Frac(0);
    Frac f1(0);
    if (precision != Frac(0) && recall != Frac(0))
        f1 = Frac(2) * matched / Frac(m + n);
    cs.precision = precision.to_double();
    cs.recall = recall.to_double();
    cs.exact_f1 = f1;
    cs.f1 = f1.to_double();
    return cs;
}

struct Scorer {
    const GeoProgram& ga;
    const GeoProgram& gb;
    std::vector<std::vector<Frac>> line_sims;
    std::vector<std::vector<Frac>> circle_sims;

    Scorer(const GeoProgram& truth, const GeoProgram& predicted)
        : ga(truth), gb(predicted) {
        line_sims.assign(ga.lines.size(), std::vector<Frac>(gb.lines.size()));
        for (size_t i = 0; i < ga.lines.size(); ++i)
            for (size_t j = 0; j < gb.lines.size(); ++j)
                line_sims[i][j] = line_similarity(ga, static_cast<int>(i), gb,
                                                  static_cast<int>(j));
        circle_sims.assign(ga.circles.size(), std::vector<Frac>(gb.circles.size()));
        for (size_t i = 0; i < ga.circles.size(); ++i)
            for (size_t j = 0; j < gb.circles.size(); ++j)
                circle_sims[i][j] = circle_similarity(ga, static_cast<int>(i), gb,
                                                      static_cast<int>(j));
    }

    // Constraint similarity reusing the cached line/circle matrices.
    Frac constraint_cell(const ConstraintDecl& a, const ConstraintDecl& b) const {
        if (a.kind != b.kind) return Frac(0);
        switch (a.kind) {
            case ConstraintKind::Parallel:
            case ConstraintKind::Perpendicular:
                return pair_f1(line_sims[a.curves[0]][b.curves[0]],
                               line_sims[a.curves[0]][b.curves[1]],
                               line_sims[a.curves[1]][b.curves[0]],
                               line_sims[a.curves[1]][b.curves[1]]);
            case ConstraintKind::CircleCircleTangent:
                return pair_f1(circle_sims[a.curves[0]][b.curves[0]],
                               circle_sims[a.curves[0]][b.curves[1]],
                               circle_sims[a.curves[1]][b.curves[0]],
                               circle_sims[a.curves[1]][b.curves[1]]);
            case ConstraintKind::LineCircleTangent:
                return (line_sims[a.curves[0]][b.curves[0]] +
                        circle_sims[a.curves[1]][b.curves[1]]) /
                       Frac(2);
            case ConstraintKind::EqualDistance:
                return constraint_score(ga, a, gb, b);
        }
        return Frac(0);
    }

    CategoryScore points_score() const {
        int m = static_cast<int>(ga.points.size());
        int n = static_cast<int>(gb.points.size());
        std::vector<int> all_a(m), all_b(n);
        std::iota(all_a.begin(), all_a.end(), 0);
        std::iota(all_b.begin(), all_b.end(), 0);
        int s = (m && n) ? matched_point_count(ga, all_a, gb, all_b) : 0;
        return fill_category(Frac(s), m, n);
    }

    CategoryScore lines_score() const {
        return fill_category(exact_matched_mass(line_sims),
                             static_cast<int>(ga.lines.size()),
                             static_cast<int>(gb.lines.size()));
    }

    CategoryScore circles_score() const {
        return fill_category(exact_matched_mass(circle_sims),
                             static_cast<int>(ga.circles.size()),
                             static_cast<int>(gb.circles.size()));
    }

    CategoryScore constraints_score() const {
        const auto& ra = ga.constraints;
        const auto& rb = gb.constraints;
        std::vector<std::vector<Frac>> sims(ra.size(), std::vector<Frac>(rb.size()));
        for (size_t i = 0; i < ra.size(); ++i)
            for (size_t j = 0; j < rb.size(); ++j)
                sims[i][j] = constraint_cell(ra[i], rb[j]);
        return fill_category(exact_matched_mass(sims), static_cast<int>(ra.size()),
                             static_cast<int>(rb.size()));
    }
};

}  // namespace

CategoryScore category_f1(const GeoProgram& ga, const GeoProgram& gb, Category c) {
    Scorer scorer(ga, gb);
    switch (c) {
        case Category::Points: return scorer.points_score();
        case Category::Lines: return scorer.lines_score();
        case Category::Circles: return scorer.circles_score();
        default: return scorer.constraints_score();
    }
}

ScoreReport score(const GeoProgram& truth, const GeoProgram& predicted,
                  const ScoreWeights& weights) {
    Scorer scorer(truth, predicted);
    ScoreReport r;
    r.weights = weights;
    r.points = scorer.points_score();
    r.lines = scorer.lines_score();
    r.circles = scorer.circles_score();
    r.constraints = scorer.constraints_score();
    r.overall = weights.points * r.points.f1 + weights.lines * r.lines.f1 +
                weights.circles * r.circles.f1 +
                weights.constraints * r.constraints.f1;
    return r;
}

Assignment optimal_assignment(const SimilarityMatrix& s) {
    std::vector<std::vector<double>> rows(s.m, std::vector<double>(s.n));
    for (int i = 0; i < s.m; ++i)
        for (int j = 0; j < s.n; ++j) rows[i][j] = s.at(i, j);
    auto [matching, total] = assignment_solve(rows);
    Assignment out;
    out.matching = std::move(matching);
    // Re-total from the matching itself, smallest values first, so equal
    // matchings always produce bit-equal sums.
    std::vector<double> parts;
    parts.reserve(out.matching.size());
    for (auto [i, j] : out.matching) parts.push_back(s.at(i, j));
    std::sort(parts.begin(), parts.end());
    out.total = 0.0;
    for (double v : parts) out.total += v;
    (void)total;
    return out;
}

std::string score_report_to_json(const ScoreReport& r) {
    nlohmann::ordered_json j;
    j["overall"] = r.overall;
    auto cat = [](const CategoryScore& c) {
        nlohmann::ordered_json o;
        o["p"] = c.precision;
        o["r"] = c.recall;
        o["f1"] = c.f1;
        return o;
    };
    j["points"] = cat(r.points);
    j["lines"] = cat(r.lines);
    j["circles"] = cat(r.circles);
    j["constraints"] = cat(r.constraints);
    j["weights"] = {r.weights.points, r.weights.lines, r.weights.circles,
                    r.weights.constraints};
    return j.dump();
}

}  // namespace geoforge
