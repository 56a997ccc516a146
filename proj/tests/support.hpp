#pragma once

// Shared fixtures and independent oracles for the test suites. Nothing here
// calls into the code under test except to produce inputs.

#include "d8/io.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <vector>

namespace d8::testing {

/// Random instance used throughout the suites: uniform in the unit square.
inline PointSet random_points(std::size_t n, std::uint64_t seed,
                              Distribution dist = Distribution::UniformSquare) {
    RunConfig config;
    config.n = n;
    config.seed = seed;
    config.distribution = dist;
    return generate(config).points;
}

/// Size sweep shared by the randomized tests: n in [lo, hi].
inline std::size_t sweep_size(std::uint64_t seed, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>((seed * 37) % (hi - lo + 1));
}

// Exact rational predicates, written directly from the determinant definitions.

inline int sign(const mpq_class& v) { return sgn(v); }

inline int exact_orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    const mpq_class ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
    return sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
}

inline int exact_in_circle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto row = [&](const Vec2& p) {
        const mpq_class x = mpq_class(p.x) - mpq_class(d.x);
        const mpq_class y = mpq_class(p.y) - mpq_class(d.y);
        return std::array<mpq_class, 3>{x, y, x * x + y * y};
    };
    const auto r0 = row(a), r1 = row(b), r2 = row(c);
    const mpq_class det = r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0]) +
                          r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
    return sign(det);
}

/// Cone by polar angle; valid away from the boundary rays.
inline int angle_cone(const Vec2& p, const Vec2& q) {
    double deg = std::atan2(q.y - p.y, q.x - p.x) * 180.0 / std::numbers::pi;
    // Clockwise angle from the top cone's counter-clockwise boundary at 120 degrees.
    double cw = 120.0 - deg;
    while (cw < 0) cw += 360.0;
    while (cw >= 360.0) cw -= 360.0;
    return static_cast<int>(cw / 60.0);
}

/// All-pairs shortest paths by Floyd-Warshall.
inline std::vector<std::vector<double>> floyd_warshall(const PointSet& pts, std::span<const Edge> edges) {
    const std::size_t n = pts.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (const Edge& e : edges) {
        const double w = std::hypot(pts[e.u].x - pts[e.v].x, pts[e.u].y - pts[e.v].y);
        d[e.u][e.v] = std::min(d[e.u][e.v], w);
        d[e.v][e.u] = std::min(d[e.v][e.u], w);
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
        }
    }
    return d;
}

/// Number of convex hull vertices (monotone chain, exact turns).
inline std::size_t hull_size(const PointSet& pts) {
    std::vector<Vec2> v;
    for (const Point& p : pts) v.push_back(p);
    std::sort(v.begin(), v.end(), [](const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    if (v.size() < 3) return v.size();
    std::vector<Vec2> h(2 * v.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        while (k >= 2 && exact_orient(h[k - 2], h[k - 1], v[i]) <= 0) --k;
        h[k++] = v[i];
    }
    for (std::size_t i = v.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && exact_orient(h[k - 2], h[k - 1], v[i - 1]) <= 0) --k;
        h[k++] = v[i - 1];
    }
    return k - 1;
}

inline std::set<Edge> edge_set(std::span<const Edge> edges) { return {edges.begin(), edges.end()}; }

}  // namespace d8::testing
