// SPDX-License-Identifier: Apache-2.0
//
// Similarity scoring between a ground-truth and a predicted program:
// per-element recursive similarity, optimal one-to-one matching per category,
// and a weighted per-category F1 rollup.
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dsl.hpp"
#include "frac.hpp"

namespace geoforge {

enum class Category { Points, Lines, Circles, Constraints };

const char* category_name(Category c);

class CategoryMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Element-level similarity in [0,1], exact. Elements are addressed as
// (program, index) within their category; categories must agree.
//   points      -> label equality (anonymous matches anonymous)
//   lines       -> F1 of incident point sets
//   circles     -> (center similarity + F1 of incident point sets) / 2
//   constraints -> kind-specific constraint score
Frac element_similarity(const GeoProgram& ga, Category ca, int ia,
                        const GeoProgram& gb, Category cb, int ib);

Frac constraint_score(const GeoProgram& ga, const ConstraintDecl& a,
                      const GeoProgram& gb, const ConstraintDecl& b);

// ---------------------------------------------------------------------------
// Assignment over a double-valued similarity matrix (the public face; the
// scorer itself runs the same algorithm over exact integers).

struct SimilarityMatrix {
    int m = 0;  // ground-truth count
    int n = 0;  // predicted count
    std::vector<double> values;  // row-major m x n, entries in [0,1]

    double at(int i, int j) const { return values[static_cast<size_t>(i) * n + j]; }
};

struct Assignment {
    std::vector<std::pair<int, int>> matching;  // lexicographically smallest
    double total = 0.0;                         // matched mass
};

Assignment optimal_assignment(const SimilarityMatrix& s);

// ---------------------------------------------------------------------------
// Category and program scores

struct CategoryScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double matched_mass = 0.0;  // S
    int m = 0;
    int n = 0;
    bool both_empty = false;  // m == n == 0; F1 reads 0 by the formula

    Frac exact_f1;  // exact value backing `f1`
};

struct ScoreWeights {
    double points = 0.25;
    double lines = 0.25;
    double circles = 0.25;
    double constraints = 0.25;
};

struct ScoreReport {
    CategoryScore points, lines, circles, constraints;
    ScoreWeights weights;
    double overall = 0.0;

    const CategoryScore& category(Category c) const;
};

// Per-category precision/recall/F1 for one pair of element multisets.
CategoryScore category_f1(const GeoProgram& ga, const GeoProgram& gb, Category c);

ScoreReport score(const GeoProgram& truth, const GeoProgram& predicted,
                  const ScoreWeights& weights = {});

// Fixed key order: {overall, points:{p,r,f1}, lines, circles, constraints,
// weights}. Byte-stable for equal reports.
std::string score_report_to_json(const ScoreReport& r);

}  // namespace geoforge
