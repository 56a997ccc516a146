#include "d8/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace d8 {

namespace {

std::vector<std::vector<VertexId>> adjacency_of(std::size_t n, std::span<const Edge> edges) {
    std::vector<std::vector<VertexId>> adj(n);
    for (const Edge& e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    return adj;
}

std::string edge_text(VertexId a, VertexId b) { return "(" + std::to_string(a) + ", " + std::to_string(b) + ")"; }

// Angle at v between the rays towards a and b, in [0, pi].
double angle_at(const Vec2& v, const Vec2& a, const Vec2& b) {
    const double ux = a.x - v.x, uy = a.y - v.y, wx = b.x - v.x, wy = b.y - v.y;
    return std::atan2(std::abs(ux * wy - uy * wx), ux * wx + uy * wy);
}

}  // namespace

// ---------------------------------------------------------------------------
// Degrees and planarity

DegreeReport degree_audit(const PointSet& points, std::span<const Edge> edges, std::span<const Edge> e_a) {
    DegreeReport report;
    std::vector<std::size_t> degree(points.size(), 0);
    for (const Edge& e : edges) {
        ++degree[e.u];
        ++degree[e.v];
    }
    for (VertexId v = 0; v < degree.size(); ++v) {
        if (report.histogram.size() <= degree[v]) report.histogram.resize(degree[v] + 1, 0);
        ++report.histogram[degree[v]];
        if (!report.max_vertex || degree[v] > report.max_degree) {
            report.max_degree = degree[v];
            report.max_vertex = v;
        }
    }

    std::vector<std::array<std::size_t, 6>> per_cone(points.size(), std::array<std::size_t, 6>{});
    std::vector<std::size_t> e_a_degree(points.size(), 0);
    for (const Edge& e : e_a) {
        ++e_a_degree[e.u];
        ++e_a_degree[e.v];
        ++per_cone[e.u][cone_index(points[e.u], points[e.v]).index()];
        ++per_cone[e.v][cone_index(points[e.v], points[e.u]).index()];
    }
    for (VertexId v = 0; v < points.size(); ++v) {
        report.e_a_max_degree = std::max(report.e_a_max_degree, e_a_degree[v]);
        for (int c = 0; c < 6; ++c) {
            if (per_cone[v][c] > 1) report.cone_overflows.emplace_back(v, Cone(c));
        }
    }
    return report;
}

DegreeReport degree_audit(const D8Graph& g) {
    return degree_audit(g.dt.points(), g.selection.edges(), g.selection.e_a());
}

namespace {

bool strictly_between(const Vec2& a, const Vec2& b, const Vec2& c) {
    // c collinear with a, b; true when c is inside the open segment.
    const double lo_x = std::min(a.x, b.x), hi_x = std::max(a.x, b.x);
    const double lo_y = std::min(a.y, b.y), hi_y = std::max(a.y, b.y);
    const bool in_box = c.x >= lo_x && c.x <= hi_x && c.y >= lo_y && c.y <= hi_y;
    return in_box && !(c == a) && !(c == b);
}

bool segments_cross(const PointSet& pts, const Edge& e, const Edge& f) {
    const Vec2& a = pts[e.u];
    const Vec2& b = pts[e.v];
    const Vec2& c = pts[f.u];
    const Vec2& d = pts[f.v];
    const int o1 = orient(a, b, c);
    const int o2 = orient(a, b, d);
    const int o3 = orient(c, d, a);
    const int o4 = orient(c, d, b);
    const bool shared = e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v;
    if (shared) {
        // Only overlapping collinear edges meet away from the common endpoint.
        if (o1 != 0 || o2 != 0) return false;
        return strictly_between(a, b, c) || strictly_between(a, b, d) || strictly_between(c, d, a) ||
               strictly_between(c, d, b);
    }
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    return (o1 == 0 && strictly_between(a, b, c)) || (o2 == 0 && strictly_between(a, b, d)) ||
           (o3 == 0 && strictly_between(c, d, a)) || (o4 == 0 && strictly_between(c, d, b));
}

}  // namespace

std::vector<Crossing> find_crossings(const PointSet& points, std::span<const Edge> edges) {
    std::vector<Crossing> out;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            if (segments_cross(points, edges[i], edges[j])) out.push_back({edges[i], edges[j]});
        }
    }
    return out;
}

SubgraphReport subgraph_audit(const Triangulation& dt, std::span<const Edge> edges, bool check_crossings) {
    SubgraphReport report;
    for (const Edge& e : edges) {
        if (!dt.has_edge(e.u, e.v)) report.not_in_dt.push_back(e);
    }
    if (check_crossings) {
        report.crossings_checked = true;
        report.crossings = find_crossings(dt.points(), edges);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Shortest paths and stretch

WeightedGraph::WeightedGraph(const PointSet& points, std::span<const Edge> edges) : adjacency_(points.size()) {
    for (const Edge& e : edges) {
        const double w = distance(points[e.u], points[e.v]);
        adjacency_[e.u].emplace_back(e.v, w);
        adjacency_[e.v].emplace_back(e.u, w);
    }
}

std::vector<double> WeightedGraph::distances_from(VertexId source) const {
    std::vector<double> dist(adjacency_.size(), std::numeric_limits<double>::infinity());
    using Entry = std::pair<double, VertexId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        if (d > dist[v]) continue;
        for (const auto& [w, len] : adjacency_[v]) {
            if (d + len < dist[w]) {
                dist[w] = d + len;
                queue.emplace(dist[w], w);
            }
        }
    }
    return dist;
}

StretchReport stretch_vs_dt(const Triangulation& dt, std::span<const Edge> edges) {
    const PointSet& pts = dt.points();
    const WeightedGraph d8(pts, edges);
    const WeightedGraph full(pts, dt.edges());
    const auto dt_adj = adjacency_of(pts.size(), dt.edges());

    StretchReport report;
    for (VertexId s = 0; s < pts.size(); ++s) {
        const std::vector<double> via_d8 = d8.distances_from(s);
        const std::vector<double> via_dt = full.distances_from(s);
        for (VertexId t = s + 1; t < pts.size(); ++t) {
            if (!std::isfinite(via_d8[t])) {
                report.connected = false;
                continue;
            }
            const double euclid = distance(pts[s], pts[t]);
            const double vs_dt = via_d8[t] / via_dt[t];
            const double vs_euclid = via_d8[t] / euclid;
            const double dt_euclid = via_dt[t] / euclid;
            if (vs_dt > report.max_ratio_vs_dt.ratio) report.max_ratio_vs_dt = {s, t, vs_dt};
            if (vs_euclid > report.max_ratio_vs_euclid.ratio) report.max_ratio_vs_euclid = {s, t, vs_euclid};
            if (dt_euclid > report.dt_ratio_vs_euclid.ratio) report.dt_ratio_vs_euclid = {s, t, dt_euclid};
        }
        for (VertexId t : dt_adj[s]) {
            if (t < s) continue;
            EdgeStretch es;
            es.edge = Edge(s, t);
            es.path_length = via_d8[t];
            es.euclidean = distance(pts[s], pts[t]);
            es.canonical_bound = canonical_bound(pts[s], pts[t]);
            es.euclidean_bound = kStretchBound * es.euclidean;
            if (!within_bound(es.path_length, es.euclidean_bound)) report.edge_bound_violations.push_back(es.edge);
            if (!within_bound(es.path_length, es.canonical_bound)) {
                report.canonical_bound_violations.push_back(es.edge);
            }
            if (!within_bound(es.canonical_bound, es.euclidean_bound)) report.chain_violations.push_back(es.edge);
            if (!report.worst_edge || es.ratio() > report.worst_edge->ratio()) report.worst_edge = es;
            report.per_dt_edge.push_back(es);
        }
    }
    std::sort(report.per_dt_edge.begin(), report.per_dt_edge.end(),
              [](const EdgeStretch& a, const EdgeStretch& b) { return a.edge < b.edge; });
    return report;
}

EdgeBound edge_bound_check(const Triangulation& dt, std::span<const Edge> edges, VertexId p, VertexId q) {
    if (p == q || !dt.has_edge(p, q)) throw std::invalid_argument("edge_bound_check: " + edge_text(p, q) + " is not a DT edge");
    const PointSet& pts = dt.points();
    EdgeBound bound;
    bound.path_length = WeightedGraph(pts, edges).distances_from(p)[q];
    bound.canonical_bound = canonical_bound(pts[p], pts[q]);
    bound.euclidean_bound = kStretchBound * distance(pts[p], pts[q]);
    return bound;
}

// ---------------------------------------------------------------------------
// Witness paths

std::string to_string(WitnessRule rule) {
    switch (rule) {
        case WitnessRule::Direct: return "direct";
        case WitnessRule::Ideal: return "ideal";
        case WitnessRule::Case1: return "case1";
        case WitnessRule::Case2a: return "case2a";
        case WitnessRule::Case2b: return "case2b";
        case WitnessRule::Case2c: return "case2c";
        case WitnessRule::Case3: return "case3";
    }
    return "unknown";
}

namespace {

class WitnessBuilder {
public:
    WitnessBuilder(const Triangulation& dt, const EdgeSelection& sel, WitnessPath& out)
        : dt_(dt), sel_(sel), pts_(dt.points()), out_(out) {}

    std::vector<VertexId> build(VertexId p, VertexId q, std::size_t depth) {
        out_.depth = std::max(out_.depth, depth);
        if (depth > pts_.size()) throw StructuralError("witness recursion exceeded depth cap", {p, q});
        if (sel_.contains(p, q)) {
            out_.trace.push_back({WitnessRule::Direct, p, q, p});
            return {p, q};
        }
        if (!dt_.has_edge(p, q)) throw StructuralError("witness requested for a non-DT pair " + edge_text(p, q), {p, q});

        if (auto path = from_side(p, q, depth)) return *path;
        if (auto path = from_side(q, p, depth)) {
            std::reverse(path->begin(), path->end());
            return *path;
        }
        throw StructuralError("no E_A edge covers " + edge_text(p, q) + " from either endpoint", {p, q});
    }

private:
    SortedEdge keyed(VertexId a, VertexId b) const {
        return {Edge(a, b), bisector_distance(pts_[a], pts_[b]), cone_index(pts_[a], pts_[b])};
    }

    void require(VertexId a, VertexId b, VertexId apex, VertexId target) const {
        if (!sel_.contains(a, b)) {
            throw StructuralError("witness for " + edge_text(apex, target) + " needs " + edge_text(a, b) +
                                      ", which is not in D8",
                                  {apex, target, a, b});
        }
    }

    // Vertices of `can` from `from` to `to` inclusive, in path order.
    static std::vector<VertexId> walk(const CanonicalSubgraph& can, VertexId from, VertexId to) {
        const auto i = std::find(can.vertices.begin(), can.vertices.end(), from) - can.vertices.begin();
        const auto j = std::find(can.vertices.begin(), can.vertices.end(), to) - can.vertices.begin();
        std::vector<VertexId> out;
        if (i <= j) {
            out.assign(can.vertices.begin() + i, can.vertices.begin() + j + 1);
        } else {
            out.assign(can.vertices.rbegin() + (can.vertices.size() - 1 - i), can.vertices.rend() - j);
        }
        return out;
    }

    // p -> r -> ... -> v along the canonical subgraph, every edge checked.
    std::vector<VertexId> ideal(const CanonicalSubgraph& can, VertexId v, VertexId target) const {
        std::vector<VertexId> path{can.apex};
        for (VertexId x : walk(can, can.anchor, v)) path.push_back(x);
        for (std::size_t k = 0; k + 1 < path.size(); ++k) require(path[k], path[k + 1], can.apex, target);
        return path;
    }

    std::optional<std::vector<VertexId>> from_side(VertexId p, VertexId q, std::size_t depth) {
        const Cone i = cone_index(pts_[p], pts_[q]);
        const std::optional<VertexId> r = sel_.incident().occupancy.at(p, i);
        if (!r || !sorted_before(keyed(p, *r), keyed(p, q))) return std::nullopt;
        const CanonicalSubgraph can = canonical_subgraph(dt_, p, *r);
        if (!can.is_path || !can.contains(q)) return std::nullopt;
        return from_apex(can, q, depth);
    }

    std::vector<VertexId> from_apex(const CanonicalSubgraph& can, VertexId q, std::size_t depth) {
        const VertexId p = can.apex;
        const VertexId r = can.anchor;
        const Cone i = can.cone;
        if (!can.is_end(q)) {
            out_.trace.push_back({WitnessRule::Ideal, p, q, r});
            return ideal(can, q, q);
        }

        const bool last = q == can.last();
        const VertexId y = last ? can.vertices[can.vertices.size() - 2] : can.vertices[1];
        int offset = cone_index(pts_[q], pts_[y]) - i;
        if (!last) offset = (6 - offset) % 6;

        auto finish = [&](WitnessRule rule) {
            out_.trace.push_back({rule, p, q, r});
            std::vector<VertexId> path = ideal(can, y, q);
            require(y, q, p, q);
            path.push_back(q);
            return path;
        };

        if (offset == 5) return finish(WitnessRule::Case1);
        if (offset == 4) {
            const Cone adjacent = last ? i + 4 : i + 2;
            const std::optional<VertexId> held = sel_.incident().occupancy.at(q, adjacent);
            if (held == y) return finish(WitnessRule::Case2a);
            if (!held) return finish(WitnessRule::Case2b);

            out_.trace.push_back({WitnessRule::Case2c, p, q, r});
            const CanonicalSubgraph other = canonical_subgraph(dt_, q, *held);
            if (!other.is_path || !other.contains(y)) {
                throw StructuralError("second ideal path from " + std::to_string(q) + " does not reach " +
                                          std::to_string(y),
                                      {p, r, y, q, *held});
            }
            std::vector<VertexId> path = ideal(can, y, q);
            std::vector<VertexId> back = ideal(other, y, q);
            path.insert(path.end(), back.rbegin() + 1, back.rend());
            return path;
        }
        if (offset == 3) {
            out_.trace.push_back({WitnessRule::Case3, p, q, r});
            const VertexId s = y;
            if (!sorted_before(keyed(s, q), keyed(p, q))) {
                throw StructuralError("recursion on " + edge_text(s, q) + " does not shrink the triangle of " +
                                          edge_text(p, q),
                                      {p, q, s});
            }
            std::vector<VertexId> path = ideal(can, s, q);
            const std::vector<VertexId> rest = build(s, q, depth + 1);
            path.insert(path.end(), rest.begin() + 1, rest.end());
            return path;
        }
        throw StructuralError("extremal edge " + edge_text(y, q) + " lies in cone " +
                                  std::to_string(cone_index(pts_[q], pts_[y]).index()) + " of " + std::to_string(q) +
                                  ", which no case covers",
                              {p, r, y, q});
    }

    const Triangulation& dt_;
    const EdgeSelection& sel_;
    const PointSet& pts_;
    WitnessPath& out_;
};

}  // namespace

WitnessPath witness_path(const Triangulation& dt, const EdgeSelection& sel, VertexId p, VertexId q) {
    if (p == q || !dt.has_edge(p, q)) throw std::invalid_argument("witness_path: " + edge_text(p, q) + " is not a DT edge");
    const PointSet& pts = dt.points();
    WitnessPath out;
    out.source = p;
    out.target = q;
    out.vertices = WitnessBuilder(dt, sel, out).build(p, q, 0);
    for (std::size_t k = 0; k + 1 < out.vertices.size(); ++k) {
        out.length += distance(pts[out.vertices[k]], pts[out.vertices[k + 1]]);
    }
    out.canonical_bound = canonical_bound(pts[p], pts[q]);
    return out;
}

// ---------------------------------------------------------------------------
// Structural audits

namespace {

template <typename Fn>
void for_each_anchor(const IncidentSelection& incident, Fn&& fn) {
    for (const Edge& e : incident.edges) {
        fn(e.u, e.v);
        fn(e.v, e.u);
    }
}

Counterexample example(std::string detail, std::vector<VertexId> vertices) {
    return {std::move(detail), std::move(vertices)};
}

}  // namespace

AuditVerdict audit_canonical_paths(const Triangulation& dt, const IncidentSelection& incident) {
    AuditVerdict v{"canonical-path", 0, {}};
    for_each_anchor(incident, [&](VertexId p, VertexId r) {
        ++v.checked;
        const CanonicalSubgraph can = canonical_subgraph(dt, p, r);
        if (!can.is_path) {
            std::vector<VertexId> ids{p, r};
            ids.insert(ids.end(), can.vertices.begin(), can.vertices.end());
            v.failures.push_back(example("subgraph of apex " + std::to_string(p) + " anchored at " +
                                             std::to_string(r) + " is not a single path",
                                         std::move(ids)));
        }
    });
    return v;
}

AuditVerdict audit_wedge_angles(const Triangulation& dt) {
    AuditVerdict v{"wedge-angle", 0, {}};
    const PointSet& pts = dt.points();
    constexpr double kLimit = 2.0 * std::numbers::pi / 3.0;
    for (VertexId p = 0; p < pts.size(); ++p) {
        for (int c = 0; c < 6; ++c) {
            const ConeNeighbourhood hood = cone_neighbourhood(dt, p, Cone(c));
            const auto& qs = hood.vertices;
            for (std::size_t a = 0; a < qs.size(); ++a) {
                // Restricted neighbourhoods are fans: stop at the first gap
                // (the outer face of a hull vertex).
                for (std::size_t b = a + 2; b < qs.size() && dt.has_edge(qs[b - 2], qs[b - 1]) && dt.has_edge(qs[b - 1], qs[b]); ++b) {
                    const Point& r = pts[qs[a]];
                    const Point& q = pts[qs[b]];
                    for (std::size_t k = a + 1; k < b; ++k) {
                        ++v.checked;
                        const Point& x = pts[qs[k]];
                        const bool ccw = orient(pts[p], r, q) > 0;
                        const int inside = ccw ? in_circle(pts[p], r, q, x) : in_circle(pts[p], q, r, x);
                        // The angle of the quadrilateral (p, r, x, q) at x, which faces the apex.
                        const double angle = angle_at(x, r, pts[p]) + angle_at(x, pts[p], q);
                        if (inside <= 0 || !(angle > kLimit)) {
                            v.failures.push_back(example("angle at " + std::to_string(qs[k]) + " between " +
                                                             std::to_string(qs[a]) + " and " + std::to_string(qs[b]) +
                                                             " around apex " + std::to_string(p) + " is " +
                                                             std::to_string(angle) + " rad",
                                                         {p, qs[a], qs[k], qs[b]}));
                        }
                    }
                }
            }
        }
    }
    return v;
}

AuditVerdict audit_shared_triangles(const Triangulation& dt) {
    AuditVerdict v{"shared-triangle", 0, {}};
    const PointSet& pts = dt.points();
    std::map<Edge, std::vector<VertexId>> bases;
    for (const Triangle& t : dt.triangles()) {
        ++v.checked;
        std::vector<VertexId> corners;
        for (int k = 0; k < 3; ++k) {
            const VertexId a = t[k], b = t[(k + 1) % 3], c = t[(k + 2) % 3];
            if (cone_index(pts[a], pts[b]) == cone_index(pts[a], pts[c])) corners.push_back(a);
        }
        if (corners.size() == 3) {
            v.failures.push_back(example("triangle lies in cone neighbourhoods of all three corners", {t[0], t[1], t[2]}));
        } else if (corners.size() == 2) {
            const VertexId apex = t[0] + t[1] + t[2] - corners[0] - corners[1];
            bases[Edge(corners[0], corners[1])].push_back(apex);
        }
    }
    for (const auto& [base, apexes] : bases) {
        if (apexes.size() > 1) {
            v.failures.push_back(example("edge " + edge_text(base.u, base.v) + " is the base of " +
                                             std::to_string(apexes.size()) + " shared triangles",
                                         {base.u, base.v, apexes[0], apexes[1]}));
        }
    }
    return v;
}

AuditVerdict audit_anchor_cones(const Triangulation& dt, const IncidentSelection& incident,
                                std::span<const Edge> edges) {
    AuditVerdict v{"anchor-cones", 0, {}};
    const PointSet& pts = dt.points();
    const auto adj = adjacency_of(pts.size(), edges);
    auto occupant = [&](VertexId r, Cone c) -> std::optional<VertexId> {
        for (VertexId w : adj[r]) {
            if (cone_index(pts[r], pts[w]) == c) return w;
        }
        return std::nullopt;
    };
    for_each_anchor(incident, [&](VertexId p, VertexId r) {
        const CanonicalSubgraph can = canonical_subgraph(dt, p, r);
        const auto right = occupant(r, can.cone + 2);
        const auto left = occupant(r, can.cone + 4);
        if (can.is_inner(r)) {
            ++v.checked;
            for (const auto& hit : {right, left}) {
                if (hit) {
                    v.failures.push_back(example("inner anchor " + std::to_string(r) + " of apex " +
                                                     std::to_string(p) + " has edge to " + std::to_string(*hit) +
                                                     " in a cone that should be empty",
                                                 {p, r, *hit}));
                }
            }
        } else if (can.vertices.size() > 1) {
            ++v.checked;
            if (right && left) {
                v.failures.push_back(example("end anchor " + std::to_string(r) + " of apex " + std::to_string(p) +
                                                 " has edges in both lower side cones",
                                             {p, r, *right, *left}));
            }
        }
    });
    return v;
}

AuditVerdict audit_end_edges(const Triangulation& dt, const IncidentSelection& incident) {
    AuditVerdict v{"end-edge-cone", 0, {}};
    const PointSet& pts = dt.points();
    for_each_anchor(incident, [&](VertexId p, VertexId r) {
        const CanonicalSubgraph can = canonical_subgraph(dt, p, r);
        if (!can.is_path || can.vertices.size() < 2) return;
        const std::size_t m = can.vertices.size();
        const std::pair<VertexId, VertexId> ends[] = {{can.vertices[0], can.vertices[1]},
                                                      {can.vertices[m - 1], can.vertices[m - 2]}};
        for (const auto& [z, y] : ends) {
            if (z == r) continue;
            ++v.checked;
            if (cone_index(pts[z], pts[y]) == can.cone) {
                v.failures.push_back(example("end edge " + edge_text(y, z) + " of apex " + std::to_string(p) +
                                                 " lies in cone " + std::to_string(can.cone.index()) + " of " +
                                                 std::to_string(z),
                                             {p, r, y, z}));
            }
        }
    });
    return v;
}

namespace {

// Cones of v lying entirely inside the triangles the canonical subgraph forms
// at v. Those triangles span the clockwise interval from `from` through the
// apex to `to`, where `from` and `to` are the subgraph neighbours of v (or
// the apex itself on the side without one).
std::vector<Cone> internal_cones(const PointSet& pts, const CanonicalSubgraph& can, VertexId v) {
    const auto at = std::find(can.vertices.begin(), can.vertices.end(), v);
    std::vector<VertexId> around;
    if (at != can.vertices.begin()) around.push_back(*(at - 1));
    if (at + 1 != can.vertices.end()) around.push_back(*(at + 1));
    if (around.empty()) return {};
    const VertexId p = can.apex;
    VertexId from = around.front();
    VertexId to = around.size() == 2 ? around.back() : p;
    if (around.size() == 1 && orient(pts[v], pts[from], pts[p]) > 0) std::swap(from, to);
    if (around.size() == 2 && orient(pts[v], pts[from], pts[p]) > 0) std::swap(from, to);

    const Cone first = cone_index(pts[v], pts[from]);
    const Cone second = cone_index(pts[v], pts[to]);
    int span = second - first;
    if (span == 0) {
        double total = angle_at(pts[v], pts[from], pts[p]) + angle_at(pts[v], pts[p], pts[to]);
        if (to == p || from == p) total = angle_at(pts[v], pts[from], pts[to]);
        span = total > std::numbers::pi ? 6 : 0;
    }
    std::vector<Cone> out;
    for (int k = 1; k < span; ++k) out.push_back(first + k);
    return out;
}

}  // namespace

AuditVerdict audit_charging(const Triangulation& dt, const EdgeSelection& sel) {
    AuditVerdict v{"charging-cones", 0, {}};
    const PointSet& pts = dt.points();
    const ConeOccupancy& occupancy = sel.incident().occupancy;
    const auto adj = adjacency_of(pts.size(), sel.edges());
    // An internal cone may take an E_CAN charge when no D8 edge of the vertex lies in it.
    auto free_cone = [&](VertexId at, Cone c) {
        return std::none_of(adj[at].begin(), adj[at].end(),
                            [&](VertexId w) { return cone_index(pts[at], pts[w]) == c; });
    };
    std::map<std::pair<VertexId, VertexId>, CanonicalSubgraph> cache;
    auto subgraph = [&](VertexId p, VertexId r) -> const CanonicalSubgraph& {
        auto it = cache.find({p, r});
        if (it == cache.end()) it = cache.emplace(std::pair{p, r}, canonical_subgraph(dt, p, r)).first;
        return it->second;
    };

    // Returns an empty string when `add` charges both endpoints of `edge` to
    // cones free of E_A edges, else the reason it does not.
    auto charge = [&](const Edge& edge, const CanonicalAddition& add) -> std::string {
        const CanonicalSubgraph& can = subgraph(add.apex, add.anchor);
        const VertexId p = add.apex;
        const VertexId r = add.anchor;
        const Cone i = can.cone;
        const bool last = add.side == Side::Last;
        const VertexId z = last ? can.last() : can.first();
        const Cone near_cone = last ? i + 2 : i + 4;
        const Cone far_cone = last ? i + 4 : i + 2;
        std::string problem;

        auto named = [&](VertexId at, Cone c) {
            if (const auto held = occupancy.at(at, c)) {
                problem = "cone " + std::to_string(c.index()) + " of " + std::to_string(at) + " holds E_A edge " +
                          edge_text(at, *held);
            }
        };
        auto internal = [&](VertexId at, const CanonicalSubgraph& region) {
            const std::vector<Cone> inside = internal_cones(pts, region, at);
            if (std::none_of(inside.begin(), inside.end(), [&](Cone c) { return free_cone(at, c); })) {
                problem = "no free cone of " + std::to_string(at) + " inside the subgraph region of apex " +
                          std::to_string(region.apex);
            }
        };
        // Steps 2 and 3 charge the anchor on the side of (p, r) the other
        // endpoint lies; the extremal steps charge the cone facing their end.
        const bool extremal = add.step != CanonicalStep::Step2 && add.step != CanonicalStep::Step3;
        auto at_vertex = [&](VertexId at, VertexId other) {
            if (at == r && extremal) {
                named(r, near_cone);
            } else if (at == r) {
                named(r, orient(pts[p], pts[r], pts[other]) > 0 ? i + 4 : i + 2);
            } else if (can.is_inner(at)) {
                internal(at, can);
            } else {
                problem = std::to_string(at) + " is an end vertex other than the anchor";
            }
        };

        switch (add.step) {
            case CanonicalStep::Step2:
            case CanonicalStep::Step3:
                at_vertex(edge.u, edge.v);
                if (problem.empty()) at_vertex(edge.v, edge.u);
                break;
            case CanonicalStep::Step4a:
            case CanonicalStep::Step4b: {
                if (z == r) return "end vertex is the anchor";
                const VertexId y = edge.other(z);
                named(z, far_cone);
                if (problem.empty()) at_vertex(y, z);
                break;
            }
            case CanonicalStep::Step4c: {
                if (z == r) return "end vertex is the anchor";
                const std::size_t m = can.vertices.size();
                const VertexId y = last ? can.vertices[m - 2] : can.vertices[1];
                const VertexId w = edge.other(y);
                at_vertex(y, w);
                if (!problem.empty()) break;
                const std::optional<VertexId> u = occupancy.at(z, far_cone);
                if (!u) return "no E_A edge at " + std::to_string(z) + " for the detour";
                if (w == *u) {
                    named(w, near_cone);
                } else {
                    const CanonicalSubgraph& other = subgraph(z, *u);
                    if (other.is_inner(w)) {
                        internal(w, other);
                    } else {
                        problem = std::to_string(w) + " is an end vertex of the detour subgraph";
                    }
                }
                break;
            }
        }
        return problem;
    };

    for (const auto& [edge, additions] : sel.e_can()) {
        // Edges also in E_A are charged as E_A edges.
        if (sel.in_e_a(edge.u, edge.v)) continue;
        ++v.checked;
        std::string first_problem;
        bool covered = false;
        for (const CanonicalAddition& add : additions) {
            const std::string problem = charge(edge, add);
            if (problem.empty()) {
                covered = true;
                break;
            }
            if (first_problem.empty()) first_problem = to_string(add.step) + " from apex " + std::to_string(add.apex) + ": " + problem;
        }
        if (!covered) {
            const CanonicalAddition& add = additions.front();
            v.failures.push_back(example("edge " + edge_text(edge.u, edge.v) + " has no valid charge (" + first_problem + ")",
                                         {add.apex, add.anchor, edge.u, edge.v}));
        }
    }
    return v;
}

std::vector<AuditVerdict> lemma_audits(const Triangulation& dt, const EdgeSelection& sel) {
    return {
        audit_canonical_paths(dt, sel.incident()),
        audit_wedge_angles(dt),
        audit_shared_triangles(dt),
        audit_anchor_cones(dt, sel.incident(), sel.edges()),
        audit_end_edges(dt, sel.incident()),
        audit_charging(dt, sel),
    };
}

bool AuditReport::passed() const {
    if (!degree_passed() || !subgraph.passed()) return false;
    for (const AuditVerdict& v : audits) {
        if (!v.passed()) return false;
    }
    return !stretch || stretch->passed();
}

AuditReport audit_instance(const D8Graph& g, const AuditOptions& options) {
    AuditReport report;
    report.point_count = g.dt.vertex_count();
    report.dt_edge_count = g.dt.edges().size();
    report.e_a_count = g.selection.e_a().size();
    report.e_can_count = g.selection.e_can().size();
    report.degree = degree_audit(g);
    report.subgraph =
        subgraph_audit(g.dt, g.selection.edges(), g.dt.vertex_count() <= options.crossing_limit);
    if (options.lemma_audits) report.audits = lemma_audits(g.dt, g.selection);
    if (options.stretch) report.stretch = stretch_vs_dt(g.dt, g.selection.edges());
    return report;
}

AuditReport audit_edges(const Triangulation& dt, std::span<const Edge> e_a, std::span<const Edge> e_can,
                        const AuditOptions& options) {
    std::vector<Edge> all(e_a.begin(), e_a.end());
    all.insert(all.end(), e_can.begin(), e_can.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());

    AuditReport report;
    report.point_count = dt.vertex_count();
    report.dt_edge_count = dt.edges().size();
    report.e_a_count = e_a.size();
    report.e_can_count = e_can.size();
    report.degree = degree_audit(dt.points(), all, e_a);
    report.subgraph = subgraph_audit(dt, all, dt.vertex_count() <= options.crossing_limit);
    // Stretch is only meaningful on a subgraph of DT.
    if (options.stretch && report.subgraph.not_in_dt.empty()) report.stretch = stretch_vs_dt(dt, all);
    return report;
}

}  // namespace d8
