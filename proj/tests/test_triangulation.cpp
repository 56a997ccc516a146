#include "support.hpp"

#include <doctest.h>

using namespace d8;
using namespace d8::testing;

TEST_SUITE("delaunay") {
    TEST_CASE("tiny inputs") {
        CHECK(build_dt(PointSet{}).edges().empty());
        CHECK(build_dt(PointSet{{0.5, 0.5}}).edges().empty());
        const Triangulation two = build_dt(PointSet{{0, 0}, {1, 0.5}});
        REQUIRE(two.edges().size() == 1);
        CHECK(two.edges()[0] == Edge(0, 1));
        const Triangulation three = build_dt(PointSet{{0, 0}, {1, 0.2}, {0.3, 1}});
        CHECK(three.edges().size() == 3);
        CHECK(three.triangles().size() == 1);
    }

    TEST_CASE("perturbed square with its centre: four hull edges and four spokes") {
        const PointSet pts{{0, 0.01}, {1, 0.02}, {1.03, 1}, {0.04, 0.98}, {0.51, 0.49}};
        REQUIRE(check_general_position(pts).empty());
        const Triangulation dt = build_dt(pts);
        CHECK(dt.edges().size() == 8);
        for (VertexId v = 0; v < 4; ++v) CHECK(dt.has_edge(v, 4));
        CHECK(dt.has_edge(0, 1));
        CHECK(dt.has_edge(1, 2));
        CHECK(dt.has_edge(2, 3));
        CHECK(dt.has_edge(3, 0));
        CHECK(edge_set(dt.edges()) == edge_set(dt_oracle(pts).edges()));
    }

    TEST_CASE("degenerate inputs are rejected unless allowed") {
        const PointSet square{{0, 0.01}, {1, 0.0}, {1.01, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0.5}};
        CHECK_THROWS_AS(build_dt(square), GeneralPositionError);
        BuildOptions allow;
        allow.allow_degenerate = true;
        // Exact duplicates stay an error even when degeneracy is allowed.
        CHECK_THROWS_AS(build_dt(square, allow), GeometryError);

        const PointSet collinear{{0, 0}, {1, 1.1}, {2, 2.2}, {0.3, 1.7}};
        CHECK_THROWS_AS(build_dt(collinear), GeneralPositionError);
        CHECK_NOTHROW(build_dt(collinear, allow));
    }

    TEST_CASE("matches the pencil oracle and the empty-circle property on random sets") {
        for (std::uint64_t seed = 1; seed <= 25; ++seed) {
            CAPTURE(seed);
            const PointSet pts = random_points(sweep_size(seed, 5, 60), seed);
            const Triangulation dt = build_dt(pts);
            CHECK(edge_set(dt.edges()) == edge_set(dt_oracle(pts).edges()));

            // Euler: a triangulation of n points with h on the hull has 3n - 3 - h edges.
            CHECK(dt.edges().size() == 3 * pts.size() - 3 - hull_size(pts));

            for (const Triangle& t : dt.triangles()) {
                REQUIRE(exact_orient(pts[t[0]], pts[t[1]], pts[t[2]]) > 0);
                for (const Point& x : pts) {
                    if (x.id == t[0] || x.id == t[1] || x.id == t[2]) continue;
                    CHECK(exact_in_circle(pts[t[0]], pts[t[1]], pts[t[2]], x) < 0);
                }
            }
        }
    }

    TEST_CASE("other distributions") {
        for (const Distribution d : {Distribution::Gaussian, Distribution::Annulus}) {
            const PointSet pts = random_points(80, 5, d);
            CHECK(edge_set(build_dt(pts).edges()) == edge_set(dt_oracle(pts).edges()));
        }
    }

    TEST_CASE("same input, same triangulation") {
        const PointSet pts = random_points(150, 77);
        const Triangulation a = build_dt(pts), b = build_dt(pts);
        CHECK(std::equal(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end()));
    }
}

TEST_SUITE("neighbour rings") {
    TEST_CASE("ring order is clockwise from vertical") {
        // Centre with neighbours up, right, down, left (slightly rotated off the axes).
        const PointSet pts{{0, 0}, {0.01, 1}, {1, -0.01}, {-0.01, -1}, {-1, 0.01}};
        const Triangulation t =
            Triangulation::from_edges(pts, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {2, 3}, {3, 4}, {4, 1}});
        const auto ring = t.ring(0);
        CHECK(std::vector<VertexId>(ring.begin(), ring.end()) == std::vector<VertexId>{1, 2, 3, 4});
        CHECK(t.triangles().size() == 4);
    }

    TEST_CASE("rings list exactly the DT neighbours, clockwise") {
        const PointSet pts = random_points(120, 3);
        const Triangulation dt = build_dt(pts);
        for (VertexId v = 0; v < pts.size(); ++v) {
            const auto ring = dt.ring(v);
            for (const VertexId w : ring) CHECK(dt.has_edge(v, w));
            if (ring.size() < 3) continue;
            for (std::size_t k = 0; k < ring.size(); ++k) {
                // Consecutive neighbours joined by an edge bound a face and
                // turn clockwise around v.
                const Vec2& a = pts[ring[k]];
                const Vec2& b = pts[ring[(k + 1) % ring.size()]];
                const bool face = dt.has_edge(ring[k], ring[(k + 1) % ring.size()]);
                if (face) CHECK(exact_orient(pts[v], a, b) < 0);
            }
        }
    }
}

TEST_SUITE("cone neighbourhoods") {
    TEST_CASE("six cones partition the ring") {
        const PointSet pts = random_points(150, 4);
        const Triangulation dt = build_dt(pts);
        for (VertexId p = 0; p < pts.size(); ++p) {
            std::vector<VertexId> all;
            for (int c = 0; c < 6; ++c) {
                const ConeNeighbourhood hood = cone_neighbourhood(dt, p, Cone(c));
                for (const VertexId v : hood.vertices) {
                    CHECK(cone_index(pts[p], pts[v]).index() == c);
                    all.push_back(v);
                }
                // Canonical edges join consecutive members and are DT edges.
                for (const Edge& e : hood.canonical_edges) {
                    CHECK(dt.has_edge(e.u, e.v));
                    const auto a = hood.position(e.u), b = hood.position(e.v);
                    REQUIRE(a);
                    REQUIRE(b);
                    CHECK((*a > *b ? *a - *b : *b - *a) == 1);
                }
            }
            std::sort(all.begin(), all.end());
            std::vector<VertexId> ring(dt.ring(p).begin(), dt.ring(p).end());
            std::sort(ring.begin(), ring.end());
            CHECK(all == ring);
        }
    }

    TEST_CASE("canonical subgraph keeps only edges at least as far as the anchor") {
        const PointSet pts = random_points(200, 6);
        const Triangulation dt = build_dt(pts);
        for (const Edge& e : dt.edges()) {
            for (const VertexId p : {e.u, e.v}) {
                const VertexId r = e.other(p);
                const CanonicalSubgraph can = canonical_subgraph(dt, p, r);
                const double anchor = bisector_distance(pts[p], pts[r]);
                const ConeNeighbourhood hood = cone_neighbourhood(dt, p, can.cone);
                CHECK(can.cone == cone_index(pts[p], pts[r]));
                for (const Edge& c : can.edges) {
                    CHECK(std::find(hood.canonical_edges.begin(), hood.canonical_edges.end(), c) !=
                          hood.canonical_edges.end());
                    CHECK(bisector_distance(pts[p], pts[c.u]) >= anchor);
                    CHECK(bisector_distance(pts[p], pts[c.v]) >= anchor);
                }
                // Every qualifying canonical edge is included.
                std::size_t qualifying = 0;
                for (const Edge& c : hood.canonical_edges) {
                    if (bisector_distance(pts[p], pts[c.u]) >= anchor && bisector_distance(pts[p], pts[c.v]) >= anchor) {
                        ++qualifying;
                    }
                }
                CHECK(qualifying == can.edges.size());
            }
        }
    }

    TEST_CASE("a non-neighbour anchor is an error") {
        const PointSet pts = random_points(30, 8);
        const Triangulation dt = build_dt(pts);
        for (VertexId v = 1; v < pts.size(); ++v) {
            if (!dt.has_edge(0, v)) {
                CHECK_THROWS_AS(canonical_subgraph(dt, 0, v), GeometryError);
                break;
            }
        }
    }
}
