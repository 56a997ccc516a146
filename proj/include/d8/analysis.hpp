#pragma once

#include "d8/builder.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace d8 {

/// Relative slack used by every numeric bound assertion.
inline constexpr double kRelativeTolerance = 1e-9;

inline bool within_bound(double value, double bound) { return value <= bound * (1.0 + kRelativeTolerance); }

// ---------------------------------------------------------------------------
// Degrees and planarity

struct DegreeReport {
    /// histogram[d] is the number of vertices of degree d.
    std::vector<std::size_t> histogram;
    std::size_t max_degree = 0;
    std::optional<VertexId> max_vertex;
    std::size_t e_a_max_degree = 0;
    /// (vertex, cone) pairs holding more than one E_A edge.
    std::vector<std::pair<VertexId, Cone>> cone_overflows;
};

DegreeReport degree_audit(const PointSet& points, std::span<const Edge> edges, std::span<const Edge> e_a);
DegreeReport degree_audit(const D8Graph& g);

struct Crossing {
    Edge first;
    Edge second;
};

/// Pairs of edges whose relative interiors intersect. Quadratic; exact.
std::vector<Crossing> find_crossings(const PointSet& points, std::span<const Edge> edges);

struct SubgraphReport {
    std::vector<Edge> not_in_dt;
    bool crossings_checked = false;
    std::vector<Crossing> crossings;

    bool passed() const { return not_in_dt.empty() && crossings.empty(); }
};

SubgraphReport subgraph_audit(const Triangulation& dt, std::span<const Edge> edges, bool check_crossings = false);

// ---------------------------------------------------------------------------
// Shortest paths and stretch

/// Euclidean-weighted adjacency lists.
class WeightedGraph {
public:
    WeightedGraph(const PointSet& points, std::span<const Edge> edges);

    std::size_t vertex_count() const { return adjacency_.size(); }
    /// Dijkstra distances from `source`; unreachable vertices are +infinity.
    std::vector<double> distances_from(VertexId source) const;

private:
    std::vector<std::vector<std::pair<VertexId, double>>> adjacency_;
};

struct EdgeStretch {
    Edge edge;
    double path_length = 0.0;
    double euclidean = 0.0;
    double canonical_bound = 0.0;
    double euclidean_bound = 0.0;

    double ratio() const { return path_length / euclidean; }
};

struct PairRatio {
    VertexId p = 0;
    VertexId q = 0;
    double ratio = 1.0;
};

struct StretchReport {
    std::vector<EdgeStretch> per_dt_edge;
    bool connected = true;
    std::optional<EdgeStretch> worst_edge;
    /// max over pairs of delta_D8 / delta_DT.
    PairRatio max_ratio_vs_dt;
    /// max over pairs of delta_D8 / |pq| (measured, not asserted against a constant).
    PairRatio max_ratio_vs_euclid;
    /// max over pairs of delta_DT / |pq| for the same instance.
    PairRatio dt_ratio_vs_euclid;

    /// DT edges whose D8 distance exceeds kStretchBound * |pq|.
    std::vector<Edge> edge_bound_violations;
    /// DT edges whose D8 distance exceeds the canonical-triangle bound.
    std::vector<Edge> canonical_bound_violations;
    /// DT edges whose canonical-triangle bound exceeds kStretchBound * |pq|.
    std::vector<Edge> chain_violations;

    bool pairs_within_bound() const { return within_bound(max_ratio_vs_dt.ratio, kStretchBound); }
    bool euclid_within_product() const {
        return within_bound(max_ratio_vs_euclid.ratio, kStretchBound * dt_ratio_vs_euclid.ratio);
    }
    bool passed() const {
        return connected && edge_bound_violations.empty() && canonical_bound_violations.empty() &&
               chain_violations.empty() && pairs_within_bound() && euclid_within_product();
    }
};

/// All-pairs Dijkstra on D8 and on DT (one source at a time).
StretchReport stretch_vs_dt(const Triangulation& dt, std::span<const Edge> edges);

struct EdgeBound {
    double path_length = 0.0;
    double canonical_bound = 0.0;
    double euclidean_bound = 0.0;

    bool holds() const {
        return within_bound(path_length, canonical_bound) && within_bound(canonical_bound, euclidean_bound);
    }
};

/// Throws std::invalid_argument when (p, q) is not a DT edge.
EdgeBound edge_bound_check(const Triangulation& dt, std::span<const Edge> edges, VertexId p, VertexId q);

// ---------------------------------------------------------------------------
// Witness paths

enum class WitnessRule {
    Direct,   // (p, q) is itself a D8 edge
    Ideal,    // q is an inner vertex of the canonical subgraph
    Case1,    // extremal edge in the outer cone of q
    Case2a,   // extremal edge in the adjacent cone of q, and in E_A
    Case2b,   // extremal edge in the adjacent cone of q, no E_A edge there
    Case2c,   // two ideal paths meeting at the neighbour of q
    Case3,    // extremal edge in the opposite cone of q: recurse on a smaller triangle
};

std::string to_string(WitnessRule rule);

struct WitnessStep {
    WitnessRule rule;
    VertexId source;  // apex of the canonical subgraph used
    VertexId target;
    VertexId anchor;  // E_A neighbour of the source used (source itself for Direct)
};

struct WitnessPath {
    VertexId source = 0;
    VertexId target = 0;
    std::vector<VertexId> vertices;
    double length = 0.0;
    /// Canonical-triangle bound of (source, target).
    double canonical_bound = 0.0;
    std::vector<WitnessStep> trace;
    std::size_t depth = 0;
};

/// Builds a D8 path for the DT edge (p, q) following the constructive case
/// analysis. Every path edge is checked against the selection; a missing
/// edge or an inapplicable case raises StructuralError.
WitnessPath witness_path(const Triangulation& dt, const EdgeSelection& sel, VertexId p, VertexId q);

// ---------------------------------------------------------------------------
// Structural audits

struct Counterexample {
    std::string detail;
    std::vector<VertexId> vertices;
};

struct AuditVerdict {
    std::string name;
    std::size_t checked = 0;
    std::vector<Counterexample> failures;

    bool passed() const { return failures.empty(); }
};

/// The canonical subgraph of every E_A edge, from both apexes, is one path.
AuditVerdict audit_canonical_paths(const Triangulation& dt, const IncidentSelection& incident);

/// For r, x, q in the same cone neighbourhood with x strictly between them,
/// x lies inside the circle through apex, r, q and the angle at x exceeds 2pi/3.
AuditVerdict audit_wedge_angles(const Triangulation& dt);

/// No triangle lies in cone neighbourhoods of all three corners, and no edge
/// is the base of two shared triangles.
AuditVerdict audit_shared_triangles(const Triangulation& dt);

/// For (p, r) in E_A: an inner anchor has no edge in cones i+2 and i+4; an end
/// anchor that is not the only vertex has at least one of them free.
AuditVerdict audit_anchor_cones(const Triangulation& dt, const IncidentSelection& incident,
                                std::span<const Edge> edges);

/// For (p, r) in E_A and an end vertex z != r with neighbour y in the
/// subgraph, y does not lie in cone i of z.
AuditVerdict audit_end_edges(const Triangulation& dt, const IncidentSelection& incident);

/// Each E_CAN edge is charged to a cone at each endpoint that holds no E_A
/// edge of that endpoint.
AuditVerdict audit_charging(const Triangulation& dt, const EdgeSelection& sel);

std::vector<AuditVerdict> lemma_audits(const Triangulation& dt, const EdgeSelection& sel);

// ---------------------------------------------------------------------------
// Per-instance report

struct AuditReport {
    std::size_t point_count = 0;
    std::size_t dt_edge_count = 0;
    std::size_t e_a_count = 0;
    std::size_t e_can_count = 0;
    DegreeReport degree;
    SubgraphReport subgraph;
    std::vector<AuditVerdict> audits;
    std::optional<StretchReport> stretch;

    bool degree_passed() const {
        return degree.max_degree <= 8 && degree.e_a_max_degree <= 6 && degree.cone_overflows.empty();
    }
    bool passed() const;
};

struct AuditOptions {
    bool lemma_audits = true;
    bool stretch = false;
    /// The quadratic crossing search runs only up to this many points.
    std::size_t crossing_limit = 2000;
};

AuditReport audit_instance(const D8Graph& g, const AuditOptions& options = {});

/// Audits an externally supplied edge set against the triangulation. Only
/// the checks that need no construction provenance apply: degrees, the
/// subgraph and crossing checks, and (optionally) stretch.
AuditReport audit_edges(const Triangulation& dt, std::span<const Edge> e_a, std::span<const Edge> e_can,
                        const AuditOptions& options = {});

}  // namespace d8
