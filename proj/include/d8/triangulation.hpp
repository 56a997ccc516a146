#pragma once

#include "d8/geometry.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace d8 {

/// Undirected edge, stored with u < v.
struct Edge {
    VertexId u = 0;
    VertexId v = 0;

    Edge() = default;
    Edge(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}

    VertexId other(VertexId w) const { return w == u ? v : u; }
    std::uint64_t key() const { return (std::uint64_t{u} << 32) | v; }

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Counter-clockwise vertex triple.
using Triangle = std::array<VertexId, 3>;

/// A plane triangulation (or any plane straight-line graph) with per-vertex
/// neighbour rings. Immutable after construction.
class Triangulation {
public:
    Triangulation() = default;

    /// Builds rings and faces from an explicit edge list. The caller is
    /// responsible for the edges forming a plane graph.
    static Triangulation from_edges(PointSet points, std::vector<Edge> edges);

    const PointSet& points() const { return points_; }
    std::size_t vertex_count() const { return points_.size(); }
    std::span<const Edge> edges() const { return edges_; }
    std::span<const Triangle> triangles() const { return triangles_; }

    /// Neighbours of p in clockwise order, starting at the neighbour with the
    /// smallest clockwise angle from the upward vertical.
    std::span<const VertexId> ring(VertexId p) const;

    bool has_edge(VertexId a, VertexId b) const;

private:
    PointSet points_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> ring_offsets_;
    std::vector<VertexId> rings_;
    std::vector<Triangle> triangles_;
};

struct BuildOptions {
    /// Accept inputs that violate general position. Exact duplicates are
    /// always rejected.
    bool allow_degenerate = false;
    GeneralPositionOptions general_position;
};

/// Delaunay triangulation by randomized incremental insertion with exact
/// predicates. Throws GeneralPositionError unless options allow degeneracy.
Triangulation build_dt(const PointSet& points, const BuildOptions& options = {});

/// Independent Delaunay oracle: (p, q) is an edge iff some open disk with p
/// and q on its boundary contains no point. Cubic time.
Triangulation dt_oracle(const PointSet& points);

inline constexpr std::size_t kOracleLimit = 1000;

// ---------------------------------------------------------------------------
// Neighbourhood queries

/// The DT neighbours of an apex that lie in one of its cones, ordered
/// clockwise from the cone's counter-clockwise boundary, together with the
/// canonical edges joining consecutive ones.
struct ConeNeighbourhood {
    VertexId apex = 0;
    Cone cone;
    std::vector<VertexId> vertices;
    std::vector<Edge> canonical_edges;

    std::optional<std::size_t> position(VertexId v) const;
};

ConeNeighbourhood cone_neighbourhood(const Triangulation& dt, VertexId p, Cone cone);

/// Canonical edges of N_i^p whose endpoints are at bisector distance at least
/// that of the anchor, in clockwise order around the apex.
struct CanonicalSubgraph {
    VertexId apex = 0;
    VertexId anchor = 0;
    Cone cone;
    /// Path vertices in clockwise order. When the qualifying edges do not form
    /// a single path, this lists all their endpoints in clockwise order and
    /// `is_path` is false.
    std::vector<VertexId> vertices;
    std::vector<Edge> edges;
    bool is_path = true;

    bool contains(VertexId v) const;
    bool is_end(VertexId v) const;
    bool is_inner(VertexId v) const;
    VertexId first() const { return vertices.front(); }
    VertexId last() const { return vertices.back(); }
};

/// Throws GeometryError if r is not a DT neighbour of p.
CanonicalSubgraph canonical_subgraph(const Triangulation& dt, VertexId p, VertexId r);

}  // namespace d8
