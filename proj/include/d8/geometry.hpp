#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace d8 {

using VertexId = std::uint32_t;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Point : Vec2 {
    VertexId id = 0;
};

double distance(const Vec2& a, const Vec2& b);

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Immutable point universe. Ids are contiguous from 0 in insertion order.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::span<const Vec2> coords);
    PointSet(std::initializer_list<Vec2> coords);

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const Point& operator[](VertexId id) const { return points_[id]; }
    auto begin() const { return points_.begin(); }
    auto end() const { return points_.end(); }

    friend bool operator==(const PointSet&, const PointSet&);

private:
    std::vector<Point> points_;
};

/// One of the six 60-degree cones around a point. C0 is the topmost cone and
/// numbering proceeds clockwise; arithmetic is modulo 6.
class Cone {
public:
    constexpr Cone() = default;
    constexpr explicit Cone(int index) : index_(((index % 6) + 6) % 6) {}

    constexpr int index() const { return index_; }
    constexpr Cone opposite() const { return Cone(index_ + 3); }

    constexpr friend Cone operator+(Cone c, int k) { return Cone(c.index_ + k); }
    constexpr friend Cone operator-(Cone c, int k) { return Cone(c.index_ - k); }
    /// Clockwise offset of `a` from `b`, in [0, 6).
    constexpr friend int operator-(Cone a, Cone b) { return Cone(a.index_ - b.index_).index_; }
    constexpr friend bool operator==(Cone, Cone) = default;

    /// Unit vector along the cone bisector; bisector(i+3) == -bisector(i) exactly.
    Vec2 bisector() const;

private:
    int index_ = 0;
};

// ---------------------------------------------------------------------------
// Exact predicates. A floating-point filter decides the easy cases; anything
// inside the error bound is re-evaluated with rational arithmetic.

/// +1 if c is strictly left of a->b, -1 if strictly right, 0 if collinear.
int orient(const Vec2& a, const Vec2& b, const Vec2& c);

/// For a, b, c counter-clockwise: +1 if d is strictly inside their circle,
/// -1 strictly outside, 0 cocircular.
int in_circle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

/// Sign of (q-p).y - sqrt(3) * (q-p).x, i.e. which side of the line of slope
/// sqrt(3) through p the point q lies on.
int side_of_sqrt3_line(const Vec2& p, const Vec2& q);
/// Sign of -(q-p).y - sqrt(3) * (q-p).x (line of slope -sqrt(3) through p).
int side_of_neg_sqrt3_line(const Vec2& p, const Vec2& q);

// ---------------------------------------------------------------------------

/// Cone of p containing q. Each cone owns its counter-clockwise boundary ray.
Cone cone_index(const Vec2& p, const Vec2& q);

/// Length of the orthogonal projection of q - p onto the bisector of the cone
/// of p containing q. Symmetric: bisector_distance(p, q) == bisector_distance(q, p)
/// bit for bit.
double bisector_distance(const Vec2& p, const Vec2& q);

/// Equilateral triangle with a corner at `apex`, lying in the apex cone that
/// contains the target, whose height equals the bisector distance.
struct CanonicalTriangle {
    Vec2 apex;
    Vec2 left;   // corner on the counter-clockwise boundary ray
    Vec2 right;  // corner on the clockwise boundary ray
    Cone cone;
    double height = 0.0;
};

CanonicalTriangle canonical_triangle(const Vec2& p, const Vec2& q);

/// theta / sin(theta) with theta = pi / 3.
inline constexpr double kArcFactor = 1.2091995761561452;
/// 1 + theta / sin(theta): the per-edge stretch guaranteed relative to DT.
inline constexpr double kStretchBound = 1.0 + kArcFactor;

/// max{|pa| + k|aq|, |pb| + k|bq|} over the corners a, b of T_pq.
double canonical_bound(const Vec2& p, const Vec2& q);

// ---------------------------------------------------------------------------

enum class ViolationKind { Coincident, Collinear, Cocircular, ConeBoundarySlope };

std::string to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::vector<VertexId> ids;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct GeneralPositionOptions {
    /// Cocircular quadruples are searched exhaustively (quartic time) only for
    /// point sets up to this size. Larger sets rely on the local check the
    /// triangulation performs on every interior edge.
    std::size_t cocircular_limit = 200;
};

std::vector<Violation> check_general_position(const PointSet& points,
                                              const GeneralPositionOptions& options = {});

class GeneralPositionError : public GeometryError {
public:
    explicit GeneralPositionError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

}  // namespace d8
