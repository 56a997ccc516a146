#include "d8/builder.hpp"

#include <algorithm>
#include <stdexcept>

namespace d8 {

bool sorted_before(const SortedEdge& a, const SortedEdge& b) {
    if (a.bisector != b.bisector) return a.bisector < b.bisector;
    return a.edge < b.edge;
}

std::vector<SortedEdge> sort_edges(const Triangulation& dt) {
    const PointSet& pts = dt.points();
    std::vector<SortedEdge> out;
    out.reserve(dt.edges().size());
    for (const Edge& e : dt.edges()) {
        out.push_back({e, bisector_distance(pts[e.u], pts[e.v]), cone_index(pts[e.u], pts[e.v])});
    }
    std::sort(out.begin(), out.end(), sorted_before);
    return out;
}

bool IncidentSelection::contains(VertexId a, VertexId b) const {
    // Linear in the number of cones only: an E_A edge occupies a cone slot at both ends.
    for (int c = 0; c < 6; ++c) {
        if (occupancy.at(a, Cone(c)) == b) return true;
    }
    return false;
}

IncidentSelection add_incident(std::span<const SortedEdge> sorted, const PointSet& points) {
    IncidentSelection sel;
    sel.occupancy = ConeOccupancy(points.size());
    for (const SortedEdge& s : sorted) {
        const VertexId p = s.edge.u;
        const VertexId q = s.edge.v;
        if (sel.occupancy.occupied(p, s.cone) || sel.occupancy.occupied(q, s.cone.opposite())) continue;
        sel.edges.push_back(s.edge);
        sel.occupancy.set(p, s.cone, q);
        sel.occupancy.set(q, s.cone.opposite(), p);
    }
    return sel;
}

std::string to_string(CanonicalStep step) {
    switch (step) {
        case CanonicalStep::Step2: return "step2";
        case CanonicalStep::Step3: return "step3";
        case CanonicalStep::Step4a: return "step4a";
        case CanonicalStep::Step4b: return "step4b";
        case CanonicalStep::Step4c: return "step4c";
    }
    return "unknown";
}

namespace {

// Step 4 for one extremal edge. `end` is the end vertex, `next` its neighbour
// in the subgraph. For the last edge the relevant cones of `end` are i+5 and
// i+4; the first edge mirrors them to i+1 and i+2.
void handle_extremal(const Triangulation& dt, const IncidentSelection& incident, const CanonicalSubgraph& can,
                     Side side, std::vector<CanonicalAddition>& out) {
    const PointSet& pts = dt.points();
    const VertexId end = side == Side::Last ? can.vertices.back() : can.vertices.front();
    const VertexId next = side == Side::Last ? can.vertices[can.vertices.size() - 2] : can.vertices[1];
    const Cone outer = side == Side::Last ? can.cone + 5 : can.cone + 1;
    const Cone adjacent = side == Side::Last ? can.cone + 4 : can.cone + 2;
    const Cone seen = cone_index(pts[end], pts[next]);

    auto add = [&](Edge e, CanonicalStep step) { out.push_back({e, step, can.apex, can.anchor, side}); };

    if (seen == outer) {
        add(Edge(next, end), CanonicalStep::Step4a);
        return;
    }
    if (seen != adjacent) return;

    const std::optional<VertexId> held = incident.occupancy.at(end, adjacent);
    if (!held) {
        add(Edge(next, end), CanonicalStep::Step4b);
        return;
    }
    if (*held == next) return;  // the extremal edge is itself in E_A

    // The ring neighbour of `next` on the apex side is the apex itself, which
    // lies in the opposite cone of `end`; the other side must be the unique
    // canonical edge of `end` at `next` within the adjacent cone.
    const ConeNeighbourhood hood = cone_neighbourhood(dt, end, adjacent);
    std::vector<VertexId> candidates;
    for (const Edge& e : hood.canonical_edges) {
        if (e.u == next || e.v == next) candidates.push_back(e.other(next));
    }
    if (candidates.size() != 1) {
        throw StructuralError("step 4c: expected exactly one canonical edge of " + std::to_string(end) +
                                  " at " + std::to_string(next) + ", found " + std::to_string(candidates.size()),
                              {can.apex, can.anchor, next, end});
    }
    add(Edge(candidates.front(), next), CanonicalStep::Step4c);
}

}  // namespace

std::vector<CanonicalAddition> add_canonical(const Triangulation& dt, const IncidentSelection& incident, VertexId p,
                                             VertexId r, const CanonicalOptions& options) {
    if (!incident.contains(p, r)) throw std::invalid_argument("add_canonical: (p, r) is not an E_A edge");
    const CanonicalSubgraph can = canonical_subgraph(dt, p, r);
    if (!can.is_path) {
        throw StructuralError("canonical subgraph of " + std::to_string(p) + " anchored at " + std::to_string(r) +
                                  " is not a single path",
                              {p, r});
    }
    std::vector<CanonicalAddition> out;
    const std::size_t m = can.edges.size();
    if (m == 0) return out;

    if (m >= 3) {
        for (std::size_t k = 1; k + 1 < m; ++k) out.push_back({can.edges[k], CanonicalStep::Step2, p, r, Side::Last});
    }
    if (m > 1) {
        if (r == can.first()) out.push_back({can.edges.front(), CanonicalStep::Step3, p, r, Side::First});
        if (r == can.last()) out.push_back({can.edges.back(), CanonicalStep::Step3, p, r, Side::Last});
    }
    if (options.extremal_at_anchor || can.first() != r) handle_extremal(dt, incident, can, Side::First, out);
    if (options.extremal_at_anchor || can.last() != r) handle_extremal(dt, incident, can, Side::Last, out);
    return out;
}

EdgeSelection::EdgeSelection(IncidentSelection incident, std::map<Edge, std::vector<CanonicalAddition>> canonical)
    : incident_(std::move(incident)), canonical_(std::move(canonical)) {
    union_ = incident_.edges;
    for (const auto& [e, _] : canonical_) union_.push_back(e);
    std::sort(union_.begin(), union_.end());
    union_.erase(std::unique(union_.begin(), union_.end()), union_.end());
}

bool EdgeSelection::contains(VertexId a, VertexId b) const {
    if (a == b) return false;
    return std::binary_search(union_.begin(), union_.end(), Edge(a, b));
}

D8Graph construct_d8(Triangulation dt, const CanonicalOptions& options) {
    D8Graph g;
    g.dt = std::move(dt);
    g.sorted = sort_edges(g.dt);
    IncidentSelection incident = add_incident(g.sorted, g.dt.points());
    std::map<Edge, std::vector<CanonicalAddition>> canonical;
    for (const Edge& e : incident.edges) {
        for (const VertexId apex : {e.u, e.v}) {
            for (CanonicalAddition& add : add_canonical(g.dt, incident, apex, e.other(apex), options)) {
                canonical[add.edge].push_back(add);
            }
        }
    }
    g.selection = EdgeSelection(std::move(incident), std::move(canonical));
    return g;
}

D8Graph construct_d8(const PointSet& points, const BuildOptions& options, const CanonicalOptions& canonical) {
    return construct_d8(build_dt(points, options), canonical);
}

}  // namespace d8
