#pragma once

// One injected corruption per structural audit. Each control runs the audit
// on a clean input and on a corrupted copy; the audit must pass the first
// and flag the second.

#include "support.hpp"

#include <functional>
#include <string>

namespace d8::testing {

struct Control {
    std::string audit;
    std::string corruption;
    AuditVerdict clean;
    AuditVerdict corrupted;

    bool behaves() const { return clean.passed() && !corrupted.passed() && corrupted.checked > 0; }
};

/// Apex 0 sees 4, 1, 3 in its top cone with 1 nearest. E_CAN is {(1, 3)}.
inline const PointSet& fan_points() {
    static const PointSet pts{{0, 0}, {0.02, 1.0}, {0.45, 1.35}, {0.7, 1.3}, {-0.4, 1.25}};
    return pts;
}

/// Incident selection holding the single edge (p, r).
inline IncidentSelection single_anchor(const PointSet& pts, VertexId p, VertexId r) {
    IncidentSelection sel;
    sel.edges = {Edge(p, r)};
    sel.occupancy = ConeOccupancy(pts.size());
    sel.occupancy.set(p, cone_index(pts[p], pts[r]), r);
    sel.occupancy.set(r, cone_index(pts[r], pts[p]), p);
    return sel;
}

/// Apex 0 sees 4, 1, 2, 3 in cone 0; the link between 1 and 2 is dropped,
/// which leaves the subgraph anchored at 1 in two pieces.
inline Control canonical_path_control() {
    const PointSet pts{{0, 0}, {-0.1, 1.0}, {0.15, 1.3}, {0.45, 1.25}, {-0.4, 1.2}};
    const D8Graph g = construct_d8(pts);
    const Triangulation broken = Triangulation::from_edges(pts, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {4, 1}, {2, 3}});
    return {"canonical-path", "fan with a missing canonical edge", audit_canonical_paths(g.dt, g.selection.incident()),
            audit_canonical_paths(broken, single_anchor(pts, 0, 1))};
}

/// Fan vertex 2 sits far above the circle through 0, 1 and 3.
inline Control wedge_control() {
    const PointSet pts{{0, 0}, {-0.3, 1}, {0.01, 1.5}, {0.3, 1.02}};
    const Triangulation broken = Triangulation::from_edges(pts, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}});
    return {"wedge-angle", "non-Delaunay fan", audit_wedge_angles(build_dt(pts)), audit_wedge_angles(broken)};
}

/// Thin quadrilateral split along its long diagonal, which becomes the base
/// of two shared triangles.
inline Control shared_triangle_control() {
    const PointSet pts{{0, 0}, {0.02, 1}, {-0.1, 0.5}, {0.12, 0.52}};
    const Triangulation broken = Triangulation::from_edges(pts, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}});
    return {"shared-triangle", "long diagonal of a thin quadrilateral", audit_shared_triangles(build_dt(pts)),
            audit_shared_triangles(broken)};
}

/// A spanner edge injected at an inner anchor, into the cone that must stay empty.
inline Control anchor_cones_control() {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const D8Graph g = construct_d8(random_points(150, seed));
        const PointSet& pts = g.dt.points();
        for (const Edge& e : g.selection.e_a()) {
            const CanonicalSubgraph can = canonical_subgraph(g.dt, e.u, e.v);
            if (!can.is_inner(e.v)) continue;
            for (VertexId w = 0; w < pts.size(); ++w) {
                if (w == e.v || cone_index(pts[e.v], pts[w]) != can.cone + 2) continue;
                std::vector<Edge> edges(g.selection.edges().begin(), g.selection.edges().end());
                const AuditVerdict clean = audit_anchor_cones(g.dt, g.selection.incident(), edges);
                edges.emplace_back(e.v, w);
                return {"anchor-cones", "edge added in cone i+2 of an inner anchor", clean,
                        audit_anchor_cones(g.dt, g.selection.incident(), edges)};
            }
        }
    }
    return {"anchor-cones", "no inner anchor found", {}, {}};
}

/// Subgraph 1, 2, 3 of apex 0 where the end 3 sees its neighbour 2 in cone 0.
inline Control end_edge_control() {
    const PointSet pts{{0, 0}, {-0.3, 1.0}, {0.2, 1.6}, {0.3, 1.05}};
    const D8Graph g = construct_d8(pts);
    const Triangulation broken = Triangulation::from_edges(pts, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}});
    return {"end-edge-cone", "end edge bent back into the apex cone", audit_end_edges(g.dt, g.selection.incident()),
            audit_end_edges(broken, single_anchor(pts, 0, 1))};
}

/// (1, 3) of the fan comes from step 4b at end 3, which charges cone 4 of 3;
/// an incident edge is planted there.
inline Control charging_control() {
    const D8Graph g = construct_d8(fan_points());
    IncidentSelection corrupted = g.selection.incident();
    corrupted.occupancy.set(3, Cone(4), 1);
    return {"charging-cones", "incident edge planted in a charged cone", audit_charging(g.dt, g.selection),
            audit_charging(g.dt, EdgeSelection(corrupted, g.selection.e_can()))};
}

inline std::vector<Control> negative_controls() {
    return {canonical_path_control(), wedge_control(),      shared_triangle_control(),
            anchor_cones_control(),   end_edge_control(), charging_control()};
}

}  // namespace d8::testing
