#include "d8/triangulation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace d8 {

// ---------------------------------------------------------------------------
// Triangulation

namespace {

// Clockwise order around p starting from the upward vertical.
bool clockwise_before(const Vec2& p, const Vec2& a, const Vec2& b) {
    auto half = [&](const Vec2& q) { return (q.x > p.x || (q.x == p.x && q.y > p.y)) ? 0 : 1; };
    const int ha = half(a);
    const int hb = half(b);
    if (ha != hb) return ha < hb;
    return orient(p, a, b) < 0;
}

}  // namespace

Triangulation Triangulation::from_edges(PointSet points, std::vector<Edge> edges) {
    Triangulation t;
    t.points_ = std::move(points);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    t.edges_ = std::move(edges);

    const std::size_t n = t.points_.size();
    std::vector<std::vector<VertexId>> adjacency(n);
    for (const Edge& e : t.edges_) {
        if (e.u == e.v || e.v >= n) throw GeometryError("invalid edge in triangulation");
        adjacency[e.u].push_back(e.v);
        adjacency[e.v].push_back(e.u);
    }
    t.ring_offsets_.assign(n + 1, 0);
    for (VertexId p = 0; p < n; ++p) {
        auto& ring = adjacency[p];
        const Point& apex = t.points_[p];
        std::sort(ring.begin(), ring.end(), [&](VertexId a, VertexId b) {
            return clockwise_before(apex, t.points_[a], t.points_[b]);
        });
        t.ring_offsets_[p + 1] = t.ring_offsets_[p] + ring.size();
        t.rings_.insert(t.rings_.end(), ring.begin(), ring.end());
    }

    for (VertexId p = 0; p < n; ++p) {
        const auto ring = t.ring(p);
        if (ring.size() < 2) continue;
        for (std::size_t j = 0; j < ring.size(); ++j) {
            const VertexId a = ring[j];
            const VertexId b = ring[(j + 1) % ring.size()];
            if (a == b || p > a || p > b) continue;
            // b follows a clockwise, so (p, b, a) is counter-clockwise when the
            // wedge between them is a proper face angle.
            if (t.has_edge(a, b) && orient(t.points_[p], t.points_[b], t.points_[a]) > 0) {
                t.triangles_.push_back({p, b, a});
            }
        }
    }
    std::sort(t.triangles_.begin(), t.triangles_.end());
    return t;
}

std::span<const VertexId> Triangulation::ring(VertexId p) const {
    return std::span<const VertexId>(rings_).subspan(ring_offsets_[p], ring_offsets_[p + 1] - ring_offsets_[p]);
}

bool Triangulation::has_edge(VertexId a, VertexId b) const {
    if (a == b) return false;
    return std::binary_search(edges_.begin(), edges_.end(), Edge(a, b));
}

// ---------------------------------------------------------------------------
// Incremental Delaunay construction (Bowyer-Watson with ghost triangles)

namespace {

constexpr int kInfinite = -1;

class DelaunayMesh {
public:
    explicit DelaunayMesh(const PointSet& points) : pts_(points) {}

    // Returns false when every point is collinear.
    bool build(std::span<const VertexId> order);
    std::vector<Edge> edges() const;
    std::vector<Violation> cocircular_edges() const;

private:
    struct Tri {
        std::array<int, 3> v{};
        std::array<int, 3> nb{-1, -1, -1};
        bool alive = true;
    };

    bool is_ghost(int t) const { return tris_[t].v[2] == kInfinite; }
    const Point& pt(int v) const { return pts_[static_cast<VertexId>(v)]; }
    bool in_conflict(int t, int p) const;
    int locate(int p);
    void insert(int p);
    int new_triangle(std::array<int, 3> v);
    void set_neighbor_opposite(int t, int opposite_vertex, int nbr);
    void link_all(std::span<const int> created);

    const PointSet& pts_;
    std::vector<Tri> tris_;
    std::vector<int> free_;
    int hint_ = 0;
    std::minstd_rand walk_rng_{12345};
};

int DelaunayMesh::new_triangle(std::array<int, 3> v) {
    // Keep the infinite vertex in slot 2; rotation preserves orientation.
    while (v[0] == kInfinite || v[1] == kInfinite) std::rotate(v.begin(), v.begin() + 1, v.end());
    Tri tri;
    tri.v = v;
    if (!free_.empty()) {
        const int t = free_.back();
        free_.pop_back();
        tris_[t] = tri;
        return t;
    }
    tris_.push_back(tri);
    return static_cast<int>(tris_.size()) - 1;
}

void DelaunayMesh::set_neighbor_opposite(int t, int opposite_vertex, int nbr) {
    for (int j = 0; j < 3; ++j) {
        if (tris_[t].v[j] == opposite_vertex) {
            tris_[t].nb[j] = nbr;
            return;
        }
    }
}

void DelaunayMesh::link_all(std::span<const int> created) {
    std::map<std::pair<int, int>, std::pair<int, int>> directed;
    for (int t : created) {
        for (int j = 0; j < 3; ++j) directed[{tris_[t].v[(j + 1) % 3], tris_[t].v[(j + 2) % 3]}] = {t, j};
    }
    for (int t : created) {
        for (int j = 0; j < 3; ++j) {
            const auto it = directed.find({tris_[t].v[(j + 2) % 3], tris_[t].v[(j + 1) % 3]});
            if (it != directed.end()) tris_[t].nb[j] = it->second.first;
        }
    }
}

bool DelaunayMesh::in_conflict(int t, int p) const {
    const Tri& tri = tris_[t];
    const Point& q = pt(p);
    if (tri.v[2] != kInfinite) return in_circle(pt(tri.v[0]), pt(tri.v[1]), pt(tri.v[2]), q) > 0;
    const Point& a = pt(tri.v[0]);
    const Point& b = pt(tri.v[1]);
    const int o = orient(a, b, q);
    if (o != 0) return o > 0;
    // Collinear with a hull edge: conflict only when strictly inside the segment.
    if (a.x != b.x) return (q.x > std::min(a.x, b.x)) && (q.x < std::max(a.x, b.x));
    return (q.y > std::min(a.y, b.y)) && (q.y < std::max(a.y, b.y));
}

int DelaunayMesh::locate(int p) {
    int t = hint_;
    if (!tris_[t].alive) {
        t = 0;
        while (!tris_[t].alive) ++t;
    }
    if (is_ghost(t)) t = tris_[t].nb[2];
    const Point& q = pt(p);
    for (std::size_t steps = 0; steps <= 4 * tris_.size() + 16; ++steps) {
        if (is_ghost(t)) return t;
        const Tri& tri = tris_[t];
        const int start = static_cast<int>(walk_rng_() % 3);
        bool moved = false;
        for (int k = 0; k < 3; ++k) {
            const int j = (start + k) % 3;
            if (orient(pt(tri.v[(j + 1) % 3]), pt(tri.v[(j + 2) % 3]), q) < 0) {
                t = tri.nb[j];
                moved = true;
                break;
            }
        }
        if (!moved) return t;
    }
    throw GeometryError("point location did not terminate");
}

void DelaunayMesh::insert(int p) {
    const int seed = locate(p);
    std::vector<int> cavity{seed};
    std::vector<char> in_cavity(tris_.size(), 0);
    in_cavity[seed] = 1;
    for (std::size_t k = 0; k < cavity.size(); ++k) {
        for (int nbr : tris_[cavity[k]].nb) {
            if (in_cavity[nbr]) continue;
            if (in_conflict(nbr, p)) {
                in_cavity[nbr] = 1;
                cavity.push_back(nbr);
            }
        }
    }

    struct Boundary {
        int a, b, outside, created;
    };
    std::vector<Boundary> boundary;
    for (int t : cavity) {
        const Tri& tri = tris_[t];
        for (int j = 0; j < 3; ++j) {
            if (!in_cavity[tri.nb[j]]) {
                boundary.push_back({tri.v[(j + 1) % 3], tri.v[(j + 2) % 3], tri.nb[j], -1});
            }
        }
    }
    for (int t : cavity) {
        tris_[t].alive = false;
        free_.push_back(t);
    }
    for (Boundary& e : boundary) {
        e.created = new_triangle({e.a, e.b, p});
        // Edge (a, b) is opposite p in the new triangle.
        set_neighbor_opposite(e.created, p, e.outside);
        Tri& out = tris_[e.outside];
        for (int j = 0; j < 3; ++j) {
            const int u = out.v[(j + 1) % 3];
            const int w = out.v[(j + 2) % 3];
            if (u == e.b && w == e.a) out.nb[j] = e.created;
        }
    }
    for (const Boundary& e : boundary) {
        for (const Boundary& f : boundary) {
            if (f.a == e.b) set_neighbor_opposite(e.created, e.a, f.created);
            if (f.b == e.a) set_neighbor_opposite(e.created, e.b, f.created);
        }
    }
    hint_ = boundary.front().created;
}

bool DelaunayMesh::build(std::span<const VertexId> order) {
    if (order.size() < 3) return false;
    const int a = static_cast<int>(order[0]);
    const int b = static_cast<int>(order[1]);
    std::size_t third = 2;
    while (third < order.size() && orient(pt(a), pt(b), pt(static_cast<int>(order[third]))) == 0) ++third;
    if (third == order.size()) return false;
    int c = static_cast<int>(order[third]);

    std::array<int, 3> first{a, b, c};
    if (orient(pt(a), pt(b), pt(c)) < 0) std::swap(first[1], first[2]);
    std::vector<int> created{new_triangle(first)};
    for (int j = 0; j < 3; ++j) created.push_back(new_triangle({first[(j + 1) % 3], first[j], kInfinite}));
    link_all(created);
    hint_ = created.front();

    for (std::size_t k = 2; k < order.size(); ++k) {
        if (k != third) insert(static_cast<int>(order[k]));
    }
    return true;
}

std::vector<Edge> DelaunayMesh::edges() const {
    std::vector<Edge> out;
    for (const Tri& tri : tris_) {
        if (!tri.alive) continue;
        for (int j = 0; j < 3; ++j) {
            const int u = tri.v[j];
            const int w = tri.v[(j + 1) % 3];
            if (u != kInfinite && w != kInfinite) {
                out.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(w));
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// An interior edge whose quadrilateral is cocircular makes the triangulation
// non-unique; these are exactly the cocircularities that matter.
std::vector<Violation> DelaunayMesh::cocircular_edges() const {
    std::vector<Violation> out;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        const Tri& tri = tris_[t];
        if (!tri.alive || tri.v[2] == kInfinite) continue;
        for (int j = 0; j < 3; ++j) {
            const int o = tri.nb[j];
            if (o < static_cast<int>(t) || is_ghost(o)) continue;
            const Tri& other = tris_[o];
            int opposite = kInfinite;
            for (int v : other.v) {
                if (v != tri.v[(j + 1) % 3] && v != tri.v[(j + 2) % 3]) opposite = v;
            }
            if (in_circle(pt(tri.v[0]), pt(tri.v[1]), pt(tri.v[2]), pt(opposite)) == 0) {
                std::vector<VertexId> ids{static_cast<VertexId>(tri.v[0]), static_cast<VertexId>(tri.v[1]),
                                          static_cast<VertexId>(tri.v[2]), static_cast<VertexId>(opposite)};
                std::sort(ids.begin(), ids.end());
                out.push_back({ViolationKind::Cocircular, std::move(ids)});
            }
        }
    }
    return out;
}

std::vector<Edge> collinear_path(const PointSet& points) {
    std::vector<VertexId> order(points.size());
    std::iota(order.begin(), order.end(), VertexId{0});
    std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
        if (points[a].x != points[b].x) return points[a].x < points[b].x;
        return points[a].y < points[b].y;
    });
    std::vector<Edge> out;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) out.emplace_back(order[k], order[k + 1]);
    return out;
}

}  // namespace

Triangulation build_dt(const PointSet& points, const BuildOptions& options) {
    std::vector<Violation> violations;
    if (options.allow_degenerate) {
        for (const Violation& v : check_general_position(points, {.cocircular_limit = 0})) {
            if (v.kind == ViolationKind::Coincident) violations.push_back(v);
        }
    } else {
        violations = check_general_position(points, options.general_position);
    }
    if (!violations.empty()) throw GeneralPositionError(std::move(violations));

    const std::size_t n = points.size();
    if (n < 3) {
        std::vector<Edge> edges;
        if (n == 2) edges.emplace_back(0, 1);
        return Triangulation::from_edges(points, std::move(edges));
    }

    std::vector<VertexId> order(n);
    std::iota(order.begin(), order.end(), VertexId{0});
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ n);
    std::shuffle(order.begin(), order.end(), rng);

    DelaunayMesh mesh(points);
    if (!mesh.build(order)) return Triangulation::from_edges(points, collinear_path(points));
    if (!options.allow_degenerate) {
        auto cocircular = mesh.cocircular_edges();
        if (!cocircular.empty()) throw GeneralPositionError(std::move(cocircular));
    }
    return Triangulation::from_edges(points, mesh.edges());
}

Triangulation dt_oracle(const PointSet& points) {
    const auto n = static_cast<VertexId>(points.size());
    if (n > kOracleLimit) throw GeometryError("dt_oracle: point set exceeds the oracle size cap");
    std::vector<Edge> edges;
    for (VertexId p = 0; p < n; ++p) {
        for (VertexId q = p + 1; q < n; ++q) {
            const Point& a = points[p];
            const Point& b = points[q];
            // Disks through a and b form a pencil; on each side of the chord
            // the disks are nested, so only the innermost point per side matters.
            int left = -1;
            int right = -1;
            bool blocked = false;
            for (VertexId x = 0; x < n && !blocked; ++x) {
                if (x == p || x == q) continue;
                const Point& c = points[x];
                const int o = orient(a, b, c);
                if (o > 0) {
                    if (left < 0 || in_circle(a, b, points[static_cast<VertexId>(left)], c) > 0) left = static_cast<int>(x);
                } else if (o < 0) {
                    if (right < 0 || in_circle(b, a, points[static_cast<VertexId>(right)], c) > 0) right = static_cast<int>(x);
                } else {
                    const bool between = a.x != b.x ? (c.x > std::min(a.x, b.x) && c.x < std::max(a.x, b.x))
                                                    : (c.y > std::min(a.y, b.y) && c.y < std::max(a.y, b.y));
                    blocked = between;
                }
            }
            if (blocked) continue;
            if (left < 0 || right < 0 ||
                in_circle(a, b, points[static_cast<VertexId>(left)], points[static_cast<VertexId>(right)]) <= 0) {
                edges.emplace_back(p, q);
            }
        }
    }
    return Triangulation::from_edges(points, std::move(edges));
}

// ---------------------------------------------------------------------------
// Neighbourhoods

std::optional<std::size_t> ConeNeighbourhood::position(VertexId v) const {
    const auto it = std::find(vertices.begin(), vertices.end(), v);
    if (it == vertices.end()) return std::nullopt;
    return static_cast<std::size_t>(it - vertices.begin());
}

ConeNeighbourhood cone_neighbourhood(const Triangulation& dt, VertexId p, Cone cone) {
    ConeNeighbourhood out;
    out.apex = p;
    out.cone = cone;
    const PointSet& pts = dt.points();
    for (VertexId q : dt.ring(p)) {
        if (cone_index(pts[p], pts[q]) == cone) out.vertices.push_back(q);
    }
    // A cone spans less than pi, so orientation is a total clockwise order.
    std::sort(out.vertices.begin(), out.vertices.end(),
              [&](VertexId a, VertexId b) { return orient(pts[p], pts[a], pts[b]) < 0; });
    for (std::size_t j = 0; j + 1 < out.vertices.size(); ++j) {
        if (dt.has_edge(out.vertices[j], out.vertices[j + 1])) {
            out.canonical_edges.emplace_back(out.vertices[j], out.vertices[j + 1]);
        }
    }
    return out;
}

bool CanonicalSubgraph::contains(VertexId v) const {
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

bool CanonicalSubgraph::is_end(VertexId v) const { return !vertices.empty() && (v == first() || v == last()); }

bool CanonicalSubgraph::is_inner(VertexId v) const { return contains(v) && !is_end(v); }

CanonicalSubgraph canonical_subgraph(const Triangulation& dt, VertexId p, VertexId r) {
    const auto ring = dt.ring(p);
    if (std::find(ring.begin(), ring.end(), r) == ring.end()) {
        throw GeometryError("canonical_subgraph: anchor is not a Delaunay neighbour of the apex");
    }
    const PointSet& pts = dt.points();
    CanonicalSubgraph out;
    out.apex = p;
    out.anchor = r;
    out.cone = cone_index(pts[p], pts[r]);

    const ConeNeighbourhood hood = cone_neighbourhood(dt, p, out.cone);
    const double threshold = bisector_distance(pts[p], pts[r]);
    auto qualifies = [&](VertexId v) { return v == r || bisector_distance(pts[p], pts[v]) >= threshold; };

    std::vector<std::size_t> edge_positions;
    for (std::size_t j = 0; j + 1 < hood.vertices.size(); ++j) {
        const VertexId s = hood.vertices[j];
        const VertexId t = hood.vertices[j + 1];
        if (dt.has_edge(s, t) && qualifies(s) && qualifies(t)) {
            out.edges.emplace_back(s, t);
            edge_positions.push_back(j);
        }
    }
    if (out.edges.empty()) {
        out.vertices = {r};
        return out;
    }

    std::vector<std::size_t> vertex_positions;
    for (std::size_t j : edge_positions) {
        vertex_positions.push_back(j);
        vertex_positions.push_back(j + 1);
    }
    const std::size_t anchor_position = *hood.position(r);
    vertex_positions.push_back(anchor_position);
    std::sort(vertex_positions.begin(), vertex_positions.end());
    vertex_positions.erase(std::unique(vertex_positions.begin(), vertex_positions.end()), vertex_positions.end());
    for (std::size_t j : vertex_positions) out.vertices.push_back(hood.vertices[j]);

    out.is_path = vertex_positions.back() - vertex_positions.front() + 1 == vertex_positions.size() &&
                  vertex_positions.size() == out.edges.size() + 1;
    return out;
}

}  // namespace d8
