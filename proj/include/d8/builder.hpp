#pragma once

#include "d8/triangulation.hpp"

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace d8 {

/// One Delaunay edge keyed by its bisector length. `cone` is the cone of
/// edge.u that contains edge.v.
struct SortedEdge {
    Edge edge;
    double bisector = 0.0;
    Cone cone;
};

/// Total order used for L: bisector length, then (min id, max id).
bool sorted_before(const SortedEdge& a, const SortedEdge& b);

/// All DT edges in non-decreasing bisector length.
std::vector<SortedEdge> sort_edges(const Triangulation& dt);

/// For each vertex and cone, the E_A neighbour occupying that cone (if any).
class ConeOccupancy {
public:
    ConeOccupancy() = default;
    explicit ConeOccupancy(std::size_t vertex_count) : slots_(vertex_count) {}

    std::optional<VertexId> at(VertexId v, Cone c) const { return slots_[v][c.index()]; }
    bool occupied(VertexId v, Cone c) const { return slots_[v][c.index()].has_value(); }
    void set(VertexId v, Cone c, VertexId neighbour) { slots_[v][c.index()] = neighbour; }

private:
    std::vector<std::array<std::optional<VertexId>, 6>> slots_;
};

/// The greedy selection: an edge is accepted when neither endpoint already has
/// an accepted edge in the cone that contains the other endpoint.
struct IncidentSelection {
    std::vector<Edge> edges;  // in acceptance order
    ConeOccupancy occupancy;

    bool contains(VertexId a, VertexId b) const;
};

IncidentSelection add_incident(std::span<const SortedEdge> sorted, const PointSet& points);

// For the last extremal edge (y, z) of a subgraph in cone i; the first edge
// uses the mirrored cones (i+1 for i+5, i+2 for i+4).
enum class CanonicalStep {
    Step2,   // non-extremal edges when the subgraph has >= 3 edges
    Step3,   // the edge at the anchor when the anchor is an end vertex
    Step4a,  // (y, z) with y in C_{i+5}^z
    Step4b,  // (y, z) with y in C_{i+4}^z and no E_A edge of z there
    Step4c,  // the canonical edge (w, y) of z in C_{i+4}^z
};

std::string to_string(CanonicalStep step);

enum class Side { First, Last };

struct CanonicalAddition {
    Edge edge;
    CanonicalStep step;
    VertexId apex = 0;
    VertexId anchor = 0;
    /// Which extremal edge produced it (meaningful for the three extremal steps).
    Side side = Side::Last;

    friend bool operator==(const CanonicalAddition&, const CanonicalAddition&) = default;
};

/// Raised when a structural fact the construction relies on does not hold.
class StructuralError : public std::runtime_error {
public:
    StructuralError(const std::string& what, std::vector<VertexId> vertices)
        : std::runtime_error(what), vertices_(std::move(vertices)) {}
    const std::vector<VertexId>& vertices() const { return vertices_; }

private:
    std::vector<VertexId> vertices_;
};

struct CanonicalOptions {
    /// Also run the extremal-edge step when the end vertex is the anchor
    /// itself. Off by default: such edges are never needed by a witness path
    /// and fall outside the degree charging.
    bool extremal_at_anchor = false;
};

/// Edges AddCanonical contributes for the E_A edge (p, r) seen from apex p.
/// Throws std::invalid_argument when (p, r) is not in E_A.
std::vector<CanonicalAddition> add_canonical(const Triangulation& dt, const IncidentSelection& incident, VertexId p,
                                             VertexId r, const CanonicalOptions& options = {});

/// E_A, E_CAN (with every generating context) and their union.
class EdgeSelection {
public:
    EdgeSelection() = default;
    EdgeSelection(IncidentSelection incident, std::map<Edge, std::vector<CanonicalAddition>> canonical);

    const IncidentSelection& incident() const { return incident_; }
    std::span<const Edge> e_a() const { return incident_.edges; }
    const std::map<Edge, std::vector<CanonicalAddition>>& e_can() const { return canonical_; }

    /// Sorted union of E_A and E_CAN.
    std::span<const Edge> edges() const { return union_; }
    bool contains(VertexId a, VertexId b) const;
    bool in_e_a(VertexId a, VertexId b) const { return incident_.contains(a, b); }

private:
    IncidentSelection incident_;
    std::map<Edge, std::vector<CanonicalAddition>> canonical_;
    std::vector<Edge> union_;
};

struct D8Graph {
    Triangulation dt;
    std::vector<SortedEdge> sorted;
    EdgeSelection selection;
};

/// Delaunay triangulation, sort, AddIncident, then AddCanonical from both
/// endpoints of every E_A edge in sorted order.
D8Graph construct_d8(const PointSet& points, const BuildOptions& options = {},
                     const CanonicalOptions& canonical = {});

/// Same as construct_d8 but reusing an existing triangulation.
D8Graph construct_d8(Triangulation dt, const CanonicalOptions& canonical = {});

}  // namespace d8
