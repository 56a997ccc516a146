// Command-line front end: generate, build, audit, stretch, witness.
// Exit codes: 0 all asserted bounds hold, 1 audit failure, 2 input error.

#include "d8/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>

namespace {

constexpr int kPass = 0;
constexpr int kAuditFailure = 1;
constexpr int kInputError = 2;

using json = nlohmann::ordered_json;

std::string now_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw d8::InputError("cannot write " + path);
    out << text;
}

void emit(const json& doc, const std::string& path) {
    if (path.empty()) {
        std::cout << doc.dump(2) << '\n';
    } else {
        write_text(path, doc.dump(2) + "\n");
    }
}

// The first failing item of a report, for the stderr summary.
json first_counterexample(const json& report) {
    if (!report["degree"]["passed"].get<bool>()) return {{"check", "degree"}, {"payload", report["degree"]}};
    if (!report["subgraph"]["passed"].get<bool>()) return {{"check", "subgraph"}, {"payload", report["subgraph"]}};
    for (const json& a : report["audits"]) {
        if (!a["passed"].get<bool>()) return {{"check", a["name"]}, {"payload", a["counterexamples"].front()}};
    }
    if (report.contains("stretch") && !report["stretch"]["passed"].get<bool>()) {
        return {{"check", "stretch"}, {"payload", report["stretch"]}};
    }
    return nullptr;
}

d8::Triangulation load_dt(const std::string& path, bool allow_degenerate) {
    d8::BuildOptions options;
    options.allow_degenerate = allow_degenerate;
    return d8::build_dt(d8::read_points_file(path), options);
}

struct ReportFlags {
    std::string in;
    std::string report;
    bool timestamp = false;
    bool allow_degenerate = false;
};

int finish_report(const d8::AuditReport& report, const ReportFlags& flags, bool per_edge) {
    d8::ReportContext ctx;
    ctx.input = flags.in;
    ctx.per_edge = per_edge;
    if (flags.timestamp) ctx.timestamp = now_utc();
    const json doc = d8::report_json(report, ctx);
    emit(doc, flags.report);
    if (report.passed()) return kPass;
    std::cerr << first_counterexample(doc).dump() << '\n';
    return kAuditFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded-degree plane spanner from Delaunay edges"};
    app.set_version_flag("--version", std::string(d8::kToolVersion));
    app.require_subcommand(1);

    // generate
    d8::RunConfig config;
    std::string dist = "uniform-square";
    double perturb = 0.0;
    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "Write a random point set in general position");
    gen->add_option("--n", config.n, "Number of points")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", config.seed, "Random seed (D8_SEED overrides)");
    gen->add_option("--dist", dist, "uniform-square | gaussian | annulus");
    gen->add_option("--perturb", perturb, "Jitter scale used instead of redrawing a degenerate sample");
    gen->add_option("--attempts", config.max_attempts, "Sampling attempts before giving up");
    gen->add_option("--out", gen_out, "Output point file (stdout if omitted)");

    // build
    std::string build_in, build_edges, build_svg;
    std::optional<d8::VertexId> fan;
    bool build_degenerate = false;
    auto* build = app.add_subcommand("build", "Construct the spanner and write its edges");
    build->add_option("--in", build_in, "Point file")->required();
    build->add_option("--out-edges", build_edges, "Edge file (stdout if omitted)");
    build->add_option("--svg", build_svg, "SVG rendering");
    build->add_option("--cone-fan", fan, "Draw the cone boundaries at this vertex");
    build->add_flag("--allow-degenerate", build_degenerate, "Skip the general-position check");

    // audit
    ReportFlags audit_flags;
    std::string audit_edges;
    bool audit_stretch = false;
    auto* audit = app.add_subcommand("audit", "Degree, subgraph and structural audits");
    audit->add_option("--in", audit_flags.in, "Point file")->required();
    audit->add_option("--report", audit_flags.report, "JSON report (stdout if omitted)");
    audit->add_option("--edges", audit_edges, "Audit this edge file instead of the constructed spanner");
    audit->add_flag("--stretch", audit_stretch, "Also run the stretch checks");
    audit->add_flag("--timestamp", audit_flags.timestamp, "Record the current time in the report");
    audit->add_flag("--allow-degenerate", audit_flags.allow_degenerate, "Skip the general-position check");

    // stretch
    ReportFlags stretch_flags;
    bool per_edge = false;
    auto* stretch = app.add_subcommand("stretch", "Per-edge and all-pairs stretch against the triangulation");
    stretch->add_option("--in", stretch_flags.in, "Point file")->required();
    stretch->add_option("--report", stretch_flags.report, "JSON report (stdout if omitted)");
    stretch->add_flag("--per-edge", per_edge, "Include the per-edge table");
    stretch->add_flag("--timestamp", stretch_flags.timestamp, "Record the current time in the report");
    stretch->add_flag("--allow-degenerate", stretch_flags.allow_degenerate, "Skip the general-position check");

    // witness
    std::string witness_in, witness_edge, witness_svg;
    auto* witness = app.add_subcommand("witness", "Constructive spanner path for one Delaunay edge");
    witness->add_option("--in", witness_in, "Point file")->required();
    witness->add_option("--edge", witness_edge, "Delaunay edge as p,q")->required();
    witness->add_option("--svg", witness_svg, "SVG with the path highlighted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kPass : kInputError;
    }

    try {
        if (*gen) {
            if (const char* env = std::getenv("D8_SEED")) {
                try {
                    std::size_t used = 0;
                    config.seed = std::stoull(env, &used, 0);
                    if (env[used] != '\0') throw std::invalid_argument(env);
                } catch (const std::logic_error&) {
                    throw d8::InputError(std::string("D8_SEED is not an integer: ") + env);
                }
            }
            config.distribution = d8::parse_distribution(dist);
            if (perturb > 0.0) config.perturbation = perturb;
            const d8::GeneratedPoints g = d8::generate(config);
            for (const std::string& line : g.log) std::cerr << line << '\n';
            if (gen_out.empty()) {
                d8::write_points(std::cout, g.points);
            } else {
                d8::write_points_file(gen_out, g.points);
            }
            return kPass;
        }

        if (*build) {
            const d8::D8Graph g = d8::construct_d8(load_dt(build_in, build_degenerate));
            if (build_edges.empty()) {
                d8::write_edges(std::cout, g.selection);
            } else {
                std::ofstream out(build_edges);
                if (!out) throw d8::InputError("cannot write " + build_edges);
                d8::write_edges(out, g.selection);
            }
            if (!build_svg.empty()) {
                d8::SvgOptions svg;
                svg.cone_fan = fan;
                write_text(build_svg, d8::render_svg(g.dt, &g.selection, svg));
            }
            const d8::DegreeReport deg = d8::degree_audit(g);
            std::cerr << "points " << g.dt.vertex_count() << ", dt edges " << g.dt.edges().size() << ", spanner edges "
                      << g.selection.edges().size() << ", max degree " << deg.max_degree << '\n';
            return kPass;
        }

        if (*audit) {
            d8::AuditOptions options;
            options.stretch = audit_stretch;
            if (audit_edges.empty()) {
                const d8::D8Graph g = d8::construct_d8(load_dt(audit_flags.in, audit_flags.allow_degenerate));
                return finish_report(d8::audit_instance(g, options), audit_flags, false);
            }
            const d8::Triangulation dt = load_dt(audit_flags.in, audit_flags.allow_degenerate);
            const d8::LabelledEdges edges = d8::read_edges_file(audit_edges, dt.vertex_count());
            return finish_report(d8::audit_edges(dt, edges.e_a, edges.e_can, options), audit_flags, false);
        }

        if (*stretch) {
            d8::AuditOptions options;
            options.lemma_audits = false;
            options.stretch = true;
            const d8::D8Graph g = d8::construct_d8(load_dt(stretch_flags.in, stretch_flags.allow_degenerate));
            return finish_report(d8::audit_instance(g, options), stretch_flags, per_edge);
        }

        if (*witness) {
            const auto comma = witness_edge.find(',');
            if (comma == std::string::npos) throw d8::InputError("--edge expects p,q");
            d8::VertexId p = 0, q = 0;
            try {
                p = static_cast<d8::VertexId>(std::stoul(witness_edge.substr(0, comma)));
                q = static_cast<d8::VertexId>(std::stoul(witness_edge.substr(comma + 1)));
            } catch (const std::logic_error&) {
                throw d8::InputError("--edge expects p,q");
            }
            const d8::D8Graph g = d8::construct_d8(load_dt(witness_in, false));
            if (p >= g.dt.vertex_count() || q >= g.dt.vertex_count() || !g.dt.has_edge(p, q)) {
                throw d8::InputError("(" + std::to_string(p) + ", " + std::to_string(q) + ") is not a Delaunay edge");
            }
            const d8::WitnessPath path = d8::witness_path(g.dt, g.selection, p, q);
            std::cout << d8::witness_json(path).dump(2) << '\n';
            if (!witness_svg.empty()) {
                d8::SvgOptions svg;
                svg.highlight = path.vertices;
                write_text(witness_svg, d8::render_svg(g.dt, &g.selection, svg));
            }
            return d8::within_bound(path.length, path.canonical_bound) ? kPass : kAuditFailure;
        }
    } catch (const d8::StructuralError& e) {
        std::cerr << json{{"error", "structural"}, {"detail", e.what()}, {"vertices", e.vertices()}}.dump() << '\n';
        return kAuditFailure;
    } catch (const d8::GeneralPositionError& e) {
        json violations = json::array();
        for (const d8::Violation& v : e.violations()) {
            violations.push_back({{"kind", d8::to_string(v.kind)}, {"vertices", v.ids}});
            if (violations.size() == 20) break;
        }
        std::cerr << json{{"error", "general position"}, {"detail", e.what()}, {"violations", violations}}.dump()
                  << '\n';
        return kInputError;
    } catch (const d8::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const d8::GeometryError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kPass;
}
