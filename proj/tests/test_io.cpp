#include "support.hpp"

#include <doctest.h>

#include <bit>
#include <sstream>

using namespace d8;
using namespace d8::testing;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
    return n;
}

// Body of the <g id="..."> group, empty when absent.
std::string group(const std::string& svg, const std::string& id) {
    const auto start = svg.find("<g id=\"" + id + "\"");
    if (start == std::string::npos) return {};
    return svg.substr(start, svg.find("</g>", start) - start);
}

}  // namespace

TEST_SUITE("point files") {
    TEST_CASE("17 significant digits round-trip bit for bit") {
        const PointSet pts{{0.1, -0.0},
                           {1e-310, 5e-324},
                           {1.7976931348623157e308, -2.2250738585072014e-308},
                           {1.0 / 3.0, std::nextafter(1.0, 2.0)}};
        std::stringstream buf;
        write_points(buf, pts);
        const PointSet back = read_points(buf);
        REQUIRE(back.size() == pts.size());
        for (VertexId k = 0; k < pts.size(); ++k) {
            CHECK(std::bit_cast<std::uint64_t>(back[k].x) == std::bit_cast<std::uint64_t>(pts[k].x));
            CHECK(std::bit_cast<std::uint64_t>(back[k].y) == std::bit_cast<std::uint64_t>(pts[k].y));
        }
    }

    TEST_CASE("random sets round-trip") {
        const PointSet pts = random_points(500, 51, Distribution::Gaussian);
        std::stringstream buf;
        write_points(buf, pts);
        CHECK(read_points(buf) == pts);
    }

    TEST_CASE("comments and blank lines are skipped; ids follow line order") {
        std::istringstream in("# header\n\n  0.5 0.25\n\t# indented comment\n-1e-3   2\n");
        const PointSet pts = read_points(in);
        REQUIRE(pts.size() == 2);
        CHECK(pts[0].x == 0.5);
        CHECK(pts[0].y == 0.25);
        CHECK(pts[1].id == 1);
        CHECK(pts[1].x == -0.001);
    }

    TEST_CASE("malformed lines are input errors") {
        for (const char* text : {"1\n", "1 2 3\n", "1 x\n", "nan 1\n", "inf 0\n", "1,2\n"}) {
            CAPTURE(text);
            std::istringstream in(text);
            CHECK_THROWS_AS(read_points(in), InputError);
        }
        CHECK_THROWS_AS(read_points_file("/nonexistent/points.txt"), InputError);
    }
}

TEST_SUITE("edge files") {
    TEST_CASE("labels split E_A from E_CAN") {
        const D8Graph g = construct_d8(random_points(100, 52));
        std::stringstream buf;
        write_edges(buf, g.selection);
        const LabelledEdges back = read_edges(buf, 100);
        CHECK(back.e_a == std::vector<Edge>(g.selection.e_a().begin(), g.selection.e_a().end()));
        std::set<Edge> all(back.e_a.begin(), back.e_a.end());
        all.insert(back.e_can.begin(), back.e_can.end());
        CHECK(all == edge_set(g.selection.edges()));
        for (const Edge& e : back.e_can) CHECK_FALSE(g.selection.in_e_a(e.u, e.v));
    }

    TEST_CASE("bad edge lines") {
        for (const char* text : {"0 1\n", "0 1 B\n", "0 9 A\n", "2 2 A\n", "-1 2 A\n"}) {
            CAPTURE(text);
            std::istringstream in(text);
            CHECK_THROWS_AS(read_edges(in, 5), InputError);
        }
    }
}

TEST_SUITE("generation") {
    TEST_CASE("single point") {
        RunConfig c;
        c.n = 1;
        const GeneratedPoints g = generate(c);
        CHECK(g.points.size() == 1);
        CHECK(g.attempts == 1);
    }

    TEST_CASE("same config, same coordinates; different seed, different coordinates") {
        RunConfig c;
        c.n = 50;
        c.seed = 99;
        CHECK(generate(c).points == generate(c).points);
        RunConfig d = c;
        d.seed = 100;
        CHECK_FALSE(generate(c).points == generate(d).points);
    }

    TEST_CASE("distributions land where they should") {
        RunConfig c;
        c.n = 400;
        c.distribution = Distribution::UniformSquare;
        for (const Point& p : generate(c).points) {
            CHECK(p.x >= 0);
            CHECK(p.x < 1);
            CHECK(p.y >= 0);
            CHECK(p.y < 1);
        }
        c.distribution = Distribution::Annulus;
        for (const Point& p : generate(c).points) {
            const double r = std::hypot(p.x, p.y);
            CHECK(r >= 0.5 - 1e-12);
            CHECK(r <= 1 + 1e-12);
        }
        c.distribution = Distribution::Gaussian;
        double sum = 0, sq = 0;
        for (const Point& p : generate(c).points) {
            sum += p.x;
            sq += p.x * p.x;
        }
        CHECK(std::abs(sum / 400) < 0.2);
        CHECK(sq / 400 == doctest::Approx(1.0).epsilon(0.2));
    }

    TEST_CASE("300 uniform points are in general position on 50 seeds") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            RunConfig c;
            c.n = 300;
            c.seed = seed;
            const GeneratedPoints g = generate(c);
            CHECK(check_general_position(g.points).empty());
        }
    }

    TEST_CASE("distribution names") {
        CHECK(parse_distribution("uniform-square") == Distribution::UniformSquare);
        CHECK(parse_distribution("gaussian") == Distribution::Gaussian);
        CHECK(parse_distribution("annulus") == Distribution::Annulus);
        CHECK(to_string(Distribution::Annulus) == "annulus");
        CHECK_THROWS_AS(parse_distribution("poisson"), InputError);
    }

    TEST_CASE("invalid configs") {
        RunConfig c;
        c.n = 0;
        CHECK_THROWS_AS(generate(c), InputError);
        c.n = 5;
        c.perturbation = -1.0;
        CHECK_THROWS_AS(generate(c), InputError);
        c.perturbation.reset();
        c.max_attempts = 0;
        CHECK_THROWS_AS(generate(c), GeometryError);
    }
}

TEST_SUITE("svg") {
    TEST_CASE("no selection draws points only") {
        const PointSet pts{{0, 0}, {1, 0.3}, {0.4, 1}};
        const std::string svg = render_points_svg(pts);
        CHECK(count(svg, "<circle") == 3);
        CHECK(count(svg, "<line") == 0);
        CHECK(svg.rfind("</svg>") != std::string::npos);
    }

    TEST_CASE("three points: every colored edge is a DT edge") {
        const D8Graph g = construct_d8(PointSet{{0, 0}, {-0.3, 2}, {0.35, 2.1}});
        const std::string svg = render_svg(g.dt, &g.selection);
        CHECK(count(svg, "<circle") == 3);
        CHECK(count(group(svg, "dt"), "<line") == 3);
        CHECK(count(group(svg, "e-a"), "<line") == 2);
        CHECK(count(group(svg, "e-can"), "<line") == 0);
        CHECK(group(svg, "e-a").find("stroke=\"black\"") != std::string::npos);
        CHECK(group(svg, "e-can").find("#d62728") != std::string::npos);
    }

    TEST_CASE("empty selection keeps the DT layer only") {
        const Triangulation dt = build_dt(random_points(30, 53));
        const EdgeSelection none;
        const std::string svg = render_svg(dt, &none);
        CHECK(count(group(svg, "dt"), "<line") == dt.edges().size());
        CHECK(count(group(svg, "e-a"), "<line") == 0);
        CHECK(count(render_svg(dt, nullptr), "<g id=\"e-a\"") == 0);
    }

    TEST_CASE("witness highlight and cone fan") {
        const D8Graph g = construct_d8(random_points(40, 54));
        SvgOptions options;
        options.highlight = std::vector<VertexId>{0, 1, 2, 3};
        options.cone_fan = 5;
        const std::string svg = render_svg(g.dt, &g.selection, options);
        CHECK(count(group(svg, "witness"), "<line") == 3);
        CHECK(count(group(svg, "cones"), "<line") == 6);
        // Every opened element is closed.
        CHECK(count(svg, "<g ") == count(svg, "</g>"));
        CHECK(count(svg, "<circle") == count(svg, "</circle>"));
    }
}

TEST_SUITE("json report") {
    TEST_CASE("fields, order and round trip") {
        RunConfig config;
        config.n = 150;
        config.seed = 7;
        const D8Graph g = construct_d8(generate(config).points);
        AuditOptions options;
        options.stretch = true;
        ReportContext ctx;
        ctx.config = config;
        const auto doc = report_json(audit_instance(g, options), ctx);

        std::vector<std::string> keys;
        for (const auto& [k, _] : doc.items()) keys.push_back(k);
        CHECK(keys == std::vector<std::string>{"tool", "config", "constants", "counts", "degree", "subgraph", "audits",
                                               "stretch", "passed"});
        CHECK(doc["passed"].get<bool>());
        CHECK(doc["degree"]["max_degree"].get<int>() <= 8);
        CHECK(doc["stretch"]["max_ratio_vs_dt"]["ratio"].get<double>() >= 1.0);
        CHECK(doc["stretch"]["max_edge_ratio"].get<double>() >= 1.0);
        CHECK(doc["stretch"]["max_edge_ratio"].get<double>() <= 2.2091996);
        CHECK(doc["constants"]["stretch_bound"].get<double>() == 2.20919957616);
        CHECK(doc["constants"]["theta"].get<double>() == 1.0471975512);
        CHECK(doc["config"]["distribution"] == "uniform-square");
        CHECK_FALSE(doc.contains("timestamp"));

        const auto parsed = nlohmann::ordered_json::parse(doc.dump(2));
        CHECK(parsed == doc);
        CHECK(parsed.dump() == doc.dump());
    }

    TEST_CASE("timestamp only when requested") {
        ReportContext ctx;
        ctx.timestamp = "2026-01-01T00:00:00Z";
        const auto doc = report_json(audit_instance(construct_d8(random_points(20, 55))), ctx);
        CHECK(doc["timestamp"] == "2026-01-01T00:00:00Z");
    }

    TEST_CASE("failures carry counterexamples, capped") {
        const D8Graph g = construct_d8(random_points(60, 56));
        std::vector<Edge> e_a(g.selection.e_a().begin(), g.selection.e_a().end());
        std::vector<Edge> extra;
        for (VertexId a = 0; a < 60; ++a) {
            for (VertexId b = a + 1; b < 60; ++b) {
                if (!g.dt.has_edge(a, b)) extra.emplace_back(a, b);
            }
        }
        ReportContext ctx;
        ctx.max_counterexamples = 5;
        const auto doc = report_json(audit_edges(g.dt, e_a, extra), ctx);
        CHECK_FALSE(doc["passed"].get<bool>());
        CHECK_FALSE(doc["subgraph"]["passed"].get<bool>());
        CHECK(doc["subgraph"]["not_in_dt"].size() == 5);
    }

    TEST_CASE("witness document") {
        const D8Graph g = construct_d8(random_points(50, 57));
        const Edge e = g.dt.edges()[0];
        const auto doc = witness_json(witness_path(g.dt, g.selection, e.u, e.v));
        CHECK(doc["source"] == e.u);
        CHECK(doc["target"] == e.v);
        CHECK(doc["within_bound"].get<bool>());
        CHECK(doc["trace"].size() >= 1);
    }
}

TEST_SUITE("determinism") {
    TEST_CASE("generate, build, audit twice gives byte-identical reports") {
        auto run = [] {
            RunConfig config;
            config.n = 120;
            config.seed = 2024;
            AuditOptions options;
            options.stretch = true;
            ReportContext ctx;
            ctx.config = config;
            const D8Graph g = construct_d8(generate(config).points);
            std::ostringstream edges;
            write_edges(edges, g.selection);
            return edges.str() + report_json(audit_instance(g, options), ctx).dump(2);
        };
        CHECK(run() == run());
    }
}
