#include "d8/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace d8 {

double distance(const Vec2& a, const Vec2& b) { return std::hypot(b.x - a.x, b.y - a.y); }

PointSet::PointSet(std::span<const Vec2> coords) {
    points_.reserve(coords.size());
    for (const Vec2& c : coords) {
        if (!std::isfinite(c.x) || !std::isfinite(c.y)) {
            throw GeometryError("non-finite coordinate for point " + std::to_string(points_.size()));
        }
        Point p;
        p.x = c.x;
        p.y = c.y;
        p.id = static_cast<VertexId>(points_.size());
        points_.push_back(p);
    }
}

PointSet::PointSet(std::initializer_list<Vec2> coords)
    : PointSet(std::span<const Vec2>(coords.begin(), coords.size())) {}

bool operator==(const PointSet& a, const PointSet& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const Point& p, const Point& q) {
        return p.id == q.id && p.x == q.x && p.y == q.y;
    });
}

namespace {

constexpr double kHalfSqrt3 = 0.86602540378443865;
constexpr double kTan30 = 0.57735026918962576;

constexpr std::array<Vec2, 6> kBisectors = {{
    {0.0, 1.0},
    {kHalfSqrt3, 0.5},
    {kHalfSqrt3, -0.5},
    {0.0, -1.0},
    {-kHalfSqrt3, -0.5},
    {-kHalfSqrt3, 0.5},
}};

}  // namespace

Vec2 Cone::bisector() const { return kBisectors[index_]; }

Cone cone_index(const Vec2& p, const Vec2& q) {
    if (p.x == q.x && p.y == q.y) throw GeometryError("degenerate pair");

    // Sector k covers directions (60k, 60(k+1)] degrees, measured
    // counter-clockwise from the positive x axis. s60 and s120 are the signs of
    // sin(phi - 60) and sin(phi - 120).
    const bool upper = q.y > p.y || (q.y == p.y && q.x < p.x);
    const int s60 = side_of_sqrt3_line(p, q);
    const int s120 = side_of_neg_sqrt3_line(p, q);
    int sector = 0;
    if (upper) {
        sector = s60 <= 0 ? 0 : (s120 <= 0 ? 1 : 2);
    } else {
        sector = s60 >= 0 ? 3 : (s120 >= 0 ? 4 : 5);
    }
    return Cone(1 - sector);
}

double bisector_distance(const Vec2& p, const Vec2& q) {
    const Vec2 u = cone_index(p, q).bisector();
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    return dx * u.x + dy * u.y;
}

CanonicalTriangle canonical_triangle(const Vec2& p, const Vec2& q) {
    CanonicalTriangle t;
    t.apex = p;
    t.cone = cone_index(p, q);
    t.height = bisector_distance(p, q);
    const Vec2 u = t.cone.bisector();
    const Vec2 foot{p.x + t.height * u.x, p.y + t.height * u.y};
    const double half_width = t.height * kTan30;
    const Vec2 left_normal{-u.y, u.x};
    t.left = {foot.x + half_width * left_normal.x, foot.y + half_width * left_normal.y};
    t.right = {foot.x - half_width * left_normal.x, foot.y - half_width * left_normal.y};
    return t;
}

double canonical_bound(const Vec2& p, const Vec2& q) {
    const CanonicalTriangle t = canonical_triangle(p, q);
    const double via_left = distance(p, t.left) + kArcFactor * distance(t.left, q);
    const double via_right = distance(p, t.right) + kArcFactor * distance(t.right, q);
    return std::max(via_left, via_right);
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Coincident: return "coincident";
        case ViolationKind::Collinear: return "collinear";
        case ViolationKind::Cocircular: return "cocircular";
        case ViolationKind::ConeBoundarySlope: return "cone-boundary-slope";
    }
    return "unknown";
}

namespace {

void find_coincident(const PointSet& pts, std::vector<Violation>& out) {
    std::vector<VertexId> order(pts.size());
    std::iota(order.begin(), order.end(), VertexId{0});
    std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
        if (pts[a].x != pts[b].x) return pts[a].x < pts[b].x;
        if (pts[a].y != pts[b].y) return pts[a].y < pts[b].y;
        return a < b;
    });
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size() && pts[order[j]] == static_cast<const Vec2&>(pts[order[i]]); ++j) {
            out.push_back({ViolationKind::Coincident, {std::min(order[i], order[j]), std::max(order[i], order[j])}});
        }
    }
}

void find_boundary_slopes(const PointSet& pts, std::vector<Violation>& out) {
    for (VertexId a = 0; a < pts.size(); ++a) {
        for (VertexId b = a + 1; b < pts.size(); ++b) {
            if (pts[a] == static_cast<const Vec2&>(pts[b])) continue;
            if (pts[a].y == pts[b].y || side_of_sqrt3_line(pts[a], pts[b]) == 0 ||
                side_of_neg_sqrt3_line(pts[a], pts[b]) == 0) {
                out.push_back({ViolationKind::ConeBoundarySlope, {a, b}});
            }
        }
    }
}

// Sorts the directions from each pivot modulo pi; parallel directions end up
// adjacent, which exposes every collinear triple in O(n^2 log n).
void find_collinear(const PointSet& pts, std::vector<Violation>& out) {
    std::vector<VertexId> others;
    for (VertexId a = 0; a < pts.size(); ++a) {
        const Point& pa = pts[a];
        others.clear();
        for (VertexId b = 0; b < pts.size(); ++b) {
            if (b != a && !(pts[b] == static_cast<const Vec2&>(pa))) others.push_back(b);
        }
        auto flip = [&](VertexId b) {
            const Point& pb = pts[b];
            return (pb.y > pa.y || (pb.y == pa.y && pb.x > pa.x)) ? 1 : -1;
        };
        auto less = [&](VertexId b, VertexId c) { return flip(b) * flip(c) * orient(pa, pts[b], pts[c]) > 0; };
        std::sort(others.begin(), others.end(), less);
        for (std::size_t i = 0; i < others.size();) {
            std::size_t j = i + 1;
            while (j < others.size() && orient(pa, pts[others[i]], pts[others[j]]) == 0) ++j;
            for (std::size_t s = i; s < j; ++s) {
                for (std::size_t t = s + 1; t < j; ++t) {
                    const VertexId b = std::min(others[s], others[t]);
                    const VertexId c = std::max(others[s], others[t]);
                    if (a < b) out.push_back({ViolationKind::Collinear, {a, b, c}});
                }
            }
            i = j;
        }
    }
}

void find_cocircular(const PointSet& pts, std::vector<Violation>& out) {
    const auto n = static_cast<VertexId>(pts.size());
    for (VertexId a = 0; a < n; ++a) {
        for (VertexId b = a + 1; b < n; ++b) {
            for (VertexId c = b + 1; c < n; ++c) {
                const int o = orient(pts[a], pts[b], pts[c]);
                if (o == 0) continue;
                const Point& first = pts[a];
                const Point& second = o > 0 ? pts[b] : pts[c];
                const Point& third = o > 0 ? pts[c] : pts[b];
                for (VertexId d = c + 1; d < n; ++d) {
                    if (in_circle(first, second, third, pts[d]) == 0) {
                        out.push_back({ViolationKind::Cocircular, {a, b, c, d}});
                    }
                }
            }
        }
    }
}

}  // namespace

std::vector<Violation> check_general_position(const PointSet& points, const GeneralPositionOptions& options) {
    std::vector<Violation> out;
    find_coincident(points, out);
    find_boundary_slopes(points, out);
    find_collinear(points, out);
    if (points.size() <= options.cocircular_limit) find_cocircular(points, out);
    std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.ids < b.ids;
    });
    return out;
}

GeneralPositionError::GeneralPositionError(std::vector<Violation> violations)
    : GeometryError("point set is not in general position (" + std::to_string(violations.size()) + " violation" +
                    (violations.size() == 1 ? "" : "s") + ")"),
      violations_(std::move(violations)) {}

}  // namespace d8
