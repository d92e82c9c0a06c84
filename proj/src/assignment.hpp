// SPDX-License-Identifier: Apache-2.0
//
// Maximum-weight bipartite assignment on rectangular matrices, with a
// deterministic lexicographic tie-break for the returned matching.
#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace geoforge {

// Kuhn-Munkres with potentials (Jonker-Volgenant flavour), maximizing.
// Works for T = double and T = long long. Matrix is row-major m x n; the
// returned value is the best total over one-to-one matchings of size
// min(m, n). O(min(m,n)^2 * max(m,n)).
template <typename T>
T assignment_max_total(const std::vector<std::vector<T>>& sim) {
    const int rows = static_cast<int>(sim.size());
    const int cols = rows ? static_cast<int>(sim[0].size()) : 0;
    if (rows == 0 || cols == 0) return T(0);

    const bool transposed = rows > cols;
    const int m = transposed ? cols : rows;
    const int n = transposed ? rows : cols;
    auto cost = [&](int i, int j) -> T {
        // minimization on negated similarities
        return transposed ? -sim[j][i] : -sim[i][j];
    };

    const T INF = std::numeric_limits<T>::max() / 4;
    std::vector<T> u(m + 1, T(0)), v(n + 1, T(0)), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= m; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), INF);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            T delta = INF;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                T cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    T total = T(0);
    for (int j = 1; j <= n; ++j)
        if (p[j] != 0) total += -cost(p[j] - 1, j - 1);
    return total;
}

namespace detail {

template <typename T>
struct AssignTol {
    static constexpr T value() { return T(0); }
};
template <>
struct AssignTol<double> {
    static constexpr double value() { return 1e-9; }
};

}  // namespace detail

// Full assignment: the lexicographically smallest (i,j) pair sequence among
// the matchings of size min(m,n) that attain the maximum total. Row indices
// are committed in ascending order against re-solved subproblems, so the
// result is independent of how the underlying solver breaks ties.
template <typename T>
std::pair<std::vector<std::pair<int, int>>, T> assignment_solve(
    const std::vector<std::vector<T>>& sim) {
    const int m = static_cast<int>(sim.size());
    const int n = m ? static_cast<int>(sim[0].size()) : 0;
    std::vector<std::pair<int, int>> matching;
    if (m == 0 || n == 0) return {matching, T(0)};

    const T tol = detail::AssignTol<T>::value();
    const T total = assignment_max_total(sim);

    std::vector<char> col_used(n, 0);
    T remaining = total;
    int pairs_left = std::min(m, n);
    for (int i = 0; i < m && pairs_left > 0; ++i) {
        // Best completion using rows > i and unused columns.
        auto sub_best = [&](int extra_col) -> T {
            std::vector<std::vector<T>> sub;
            sub.reserve(m - i - 1);
            for (int r = i + 1; r < m; ++r) {
                std::vector<T> row;
                row.reserve(n);
                for (int c = 0; c < n; ++c)
                    if (!col_used[c] && c != extra_col) row.push_back(sim[r][c]);
                sub.push_back(std::move(row));
            }
            if (sub.empty() || sub[0].empty()) return T(0);
            return assignment_max_total(sub);
        };
        int chosen = -1;
        for (int j = 0; j < n; ++j) {
            if (col_used[j]) continue;
            // Feasible iff fixing (i,j) still reaches the target total with
            // the right number of pairs.
            int sub_rows = m - i - 1;
            int sub_cols = 0;
            for (int c = 0; c < n; ++c)
                if (!col_used[c] && c != j) ++sub_cols;
            if (std::min(sub_rows, sub_cols) < pairs_left - 1) continue;
            T achievable = sim[i][j] + sub_best(j);
            if (achievable + tol >= remaining) {
                chosen = j;
                break;
            }
        }
        if (chosen >= 0) {
            matching.emplace_back(i, chosen);
            col_used[chosen] = 1;
            remaining -= sim[i][chosen];
            --pairs_left;
        }
        // otherwise row i stays unmatched (only possible when m > n)
    }
    return {matching, total};
}

}  // namespace geoforge
