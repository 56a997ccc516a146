#include "d8/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace d8 {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

template <typename T>
T parse_number(std::string_view token, std::size_t line) {
    T value{};
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw InputError(where(line) + "cannot parse '" + std::string(token) + "'");
    }
    return value;
}

std::string format(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    return out;
}

// Portable across standard libraries, unlike the std distributions.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<Vec2> sample(std::size_t n, Distribution d, std::mt19937_64& rng) {
    std::vector<Vec2> out;
    out.reserve(n);
    while (out.size() < n) {
        switch (d) {
            case Distribution::UniformSquare:
                out.push_back({unit(rng), unit(rng)});
                break;
            case Distribution::Gaussian: {
                // Box-Muller; 1 - u keeps the logarithm finite.
                const double radius = std::sqrt(-2.0 * std::log(1.0 - unit(rng)));
                const double angle = 2.0 * std::numbers::pi * unit(rng);
                out.push_back({radius * std::cos(angle), radius * std::sin(angle)});
                break;
            }
            case Distribution::Annulus: {
                // Uniform by area between radii 0.5 and 1.
                const double radius = std::sqrt(0.25 + 0.75 * unit(rng));
                const double angle = 2.0 * std::numbers::pi * unit(rng);
                out.push_back({radius * std::cos(angle), radius * std::sin(angle)});
                break;
            }
        }
    }
    return out;
}

std::string describe(const std::vector<Violation>& violations) {
    std::string s = std::to_string(violations.size()) + " general-position violation(s), first " +
                    to_string(violations.front().kind) + " {";
    for (std::size_t k = 0; k < violations.front().ids.size(); ++k) {
        s += (k ? ", " : "") + std::to_string(violations.front().ids[k]);
    }
    return s + "}";
}

double round12(double v) { return std::stod(format("%.12g", v)); }

nlohmann::ordered_json edge_json(const Edge& e) { return nlohmann::ordered_json::array({e.u, e.v}); }

nlohmann::ordered_json pair_json(const PairRatio& r) {
    return {{"p", r.p}, {"q", r.q}, {"ratio", r.ratio}};
}

nlohmann::ordered_json edge_stretch_json(const EdgeStretch& s) {
    return {{"edge", edge_json(s.edge)},           {"path_length", s.path_length},
            {"euclidean", s.euclidean},            {"ratio", s.ratio()},
            {"canonical_bound", s.canonical_bound}, {"euclidean_bound", s.euclidean_bound}};
}

template <typename T, typename F>
nlohmann::ordered_json capped(const std::vector<T>& items, std::size_t cap, F&& to_json) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < items.size() && k < cap; ++k) out.push_back(to_json(items[k]));
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

PointSet read_points(std::istream& in) {
    std::vector<Vec2> coords;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string_view text = trim(raw);
        if (text.empty() || text.front() == '#') continue;
        const auto tokens = split(text);
        if (tokens.size() != 2) throw InputError(where(line) + "expected '<x> <y>'");
        const Vec2 c{parse_number<double>(tokens[0], line), parse_number<double>(tokens[1], line)};
        if (!std::isfinite(c.x) || !std::isfinite(c.y)) throw InputError(where(line) + "non-finite coordinate");
        coords.push_back(c);
    }
    if (in.bad()) throw InputError("read error");
    return PointSet(coords);
}

PointSet read_points_file(const std::string& path) {
    std::ifstream in = open_input(path);
    return read_points(in);
}

void write_points(std::ostream& out, const PointSet& points) {
    for (const Point& p : points) out << format("%.17g", p.x) << ' ' << format("%.17g", p.y) << '\n';
}

void write_points_file(const std::string& path, const PointSet& points) {
    std::ofstream out = open_output(path);
    write_points(out, points);
}

LabelledEdges read_edges(std::istream& in, std::size_t vertex_count) {
    LabelledEdges out;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string_view text = trim(raw);
        if (text.empty() || text.front() == '#') continue;
        const auto tokens = split(text);
        if (tokens.size() != 3) throw InputError(where(line) + "expected '<u> <v> <A|CAN>'");
        const auto u = parse_number<VertexId>(tokens[0], line);
        const auto v = parse_number<VertexId>(tokens[1], line);
        if (u >= vertex_count || v >= vertex_count) throw InputError(where(line) + "vertex id out of range");
        if (u == v) throw InputError(where(line) + "self loop");
        if (tokens[2] == "A") {
            out.e_a.emplace_back(u, v);
        } else if (tokens[2] == "CAN") {
            out.e_can.emplace_back(u, v);
        } else {
            throw InputError(where(line) + "unknown label '" + std::string(tokens[2]) + "'");
        }
    }
    if (in.bad()) throw InputError("read error");
    return out;
}

LabelledEdges read_edges_file(const std::string& path, std::size_t vertex_count) {
    std::ifstream in = open_input(path);
    return read_edges(in, vertex_count);
}

void write_edges(std::ostream& out, const EdgeSelection& sel) {
    for (const Edge& e : sel.e_a()) out << e.u << ' ' << e.v << " A\n";
    for (const auto& [e, _] : sel.e_can()) {
        if (!sel.in_e_a(e.u, e.v)) out << e.u << ' ' << e.v << " CAN\n";
    }
}

// ---------------------------------------------------------------------------

std::string to_string(Distribution d) {
    switch (d) {
        case Distribution::UniformSquare: return "uniform-square";
        case Distribution::Gaussian: return "gaussian";
        case Distribution::Annulus: return "annulus";
    }
    return "unknown";
}

Distribution parse_distribution(std::string_view name) {
    if (name == "uniform-square" || name == "uniform") return Distribution::UniformSquare;
    if (name == "gaussian") return Distribution::Gaussian;
    if (name == "annulus") return Distribution::Annulus;
    throw InputError("unknown distribution '" + std::string(name) + "'");
}

GeneratedPoints generate(const RunConfig& config) {
    if (config.n == 0) throw InputError("n must be at least 1");
    if (config.perturbation && !(*config.perturbation > 0.0)) throw InputError("perturbation must be positive");

    GeneratedPoints out;
    std::vector<Vec2> coords;
    std::mt19937_64 rng;
    for (std::size_t attempt = 0; attempt < config.max_attempts; ++attempt) {
        out.attempts = attempt + 1;
        if (attempt == 0 || !config.perturbation) {
            rng.seed(attempt == 0 ? config.seed : splitmix(config.seed + attempt));
            coords = sample(config.n, config.distribution, rng);
        } else {
            const double s = *config.perturbation;
            for (Vec2& c : coords) {
                c.x += s * (2.0 * unit(rng) - 1.0);
                c.y += s * (2.0 * unit(rng) - 1.0);
            }
            out.log.push_back("attempt " + std::to_string(attempt) + ": perturbed every point by up to " +
                              format("%.3g", s));
        }
        PointSet points(coords);
        const auto violations = check_general_position(points);
        if (violations.empty()) {
            out.points = std::move(points);
            return out;
        }
        out.log.push_back("attempt " + std::to_string(attempt) + ": rejected, " + describe(violations));
    }
    throw GeometryError("no point set in general position after " + std::to_string(config.max_attempts) +
                        " attempts");
}

// ---------------------------------------------------------------------------

namespace {

class SvgCanvas {
public:
    SvgCanvas(const PointSet& points, double width) : width_(width) {
        double min_x = 0, max_x = 1, min_y = 0, max_y = 1;
        if (!points.empty()) {
            min_x = max_x = points[0].x;
            min_y = max_y = points[0].y;
            for (const Point& p : points) {
                min_x = std::min(min_x, p.x);
                max_x = std::max(max_x, p.x);
                min_y = std::min(min_y, p.y);
                max_y = std::max(max_y, p.y);
            }
        }
        const double span = std::max({max_x - min_x, max_y - min_y, 1e-12});
        scale_ = (width - 2 * kMargin) / span;
        min_x_ = min_x;
        max_y_ = max_y;
        height_ = (max_y - min_y) * scale_ + 2 * kMargin;
    }

    double x(double v) const { return kMargin + (v - min_x_) * scale_; }
    double y(double v) const { return kMargin + (max_y_ - v) * scale_; }

    void begin(std::ostream& out) const {
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << format("%.0f", width_)
            << "\" height=\"" << format("%.0f", height_) << "\" viewBox=\"0 0 " << format("%.3f", width_) << ' '
            << format("%.3f", height_) << "\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    }

    void line(std::ostream& out, const Vec2& a, const Vec2& b) const {
        out << "<line x1=\"" << format("%.3f", x(a.x)) << "\" y1=\"" << format("%.3f", y(a.y)) << "\" x2=\""
            << format("%.3f", x(b.x)) << "\" y2=\"" << format("%.3f", y(b.y)) << "\"/>\n";
    }

    // A ray from `a` in direction `d`, long enough to leave the drawing.
    void ray(std::ostream& out, const Vec2& a, const Vec2& d) const {
        const double reach = 2.0 * std::max(width_, height_) / scale_;
        line(out, a, {a.x + reach * d.x, a.y + reach * d.y});
    }

private:
    static constexpr double kMargin = 20.0;
    double width_;
    double height_ = 0;
    double scale_ = 1;
    double min_x_ = 0;
    double max_y_ = 0;
};

void draw_edges(std::ostream& out, const SvgCanvas& canvas, const PointSet& pts, const std::string& id,
                const std::string& style, std::span<const Edge> edges) {
    out << "<g id=\"" << id << "\" " << style << ">\n";
    for (const Edge& e : edges) canvas.line(out, pts[e.u], pts[e.v]);
    out << "</g>\n";
}

void draw_overlays(std::ostream& out, const SvgCanvas& canvas, const PointSet& pts, const SvgOptions& options) {
    if (options.cone_fan && *options.cone_fan < pts.size()) {
        const Vec2& c = pts[*options.cone_fan];
        out << "<g id=\"cones\" stroke=\"#2ca02c\" stroke-width=\"1\" stroke-dasharray=\"4 3\">\n";
        for (int k = 0; k < 6; ++k) {
            const double angle = std::numbers::pi / 6.0 + k * std::numbers::pi / 3.0;
            canvas.ray(out, c, {std::cos(angle), std::sin(angle)});
        }
        out << "</g>\n";
    }
    if (options.highlight && options.highlight->size() > 1) {
        out << "<g id=\"witness\" stroke=\"#1f77b4\" stroke-width=\"3\" stroke-opacity=\"0.8\">\n";
        const auto& path = *options.highlight;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            if (path[k] < pts.size() && path[k + 1] < pts.size()) canvas.line(out, pts[path[k]], pts[path[k + 1]]);
        }
        out << "</g>\n";
    }
}

void draw_points(std::ostream& out, const SvgCanvas& canvas, const PointSet& pts) {
    out << "<g id=\"points\" fill=\"black\">\n";
    for (const Point& p : pts) {
        out << "<circle cx=\"" << format("%.3f", canvas.x(p.x)) << "\" cy=\"" << format("%.3f", canvas.y(p.y))
            << "\" r=\"2.5\"><title>" << p.id << "</title></circle>\n";
    }
    out << "</g>\n</svg>\n";
}

}  // namespace

std::string render_svg(const Triangulation& dt, const EdgeSelection* sel, const SvgOptions& options) {
    const PointSet& pts = dt.points();
    const SvgCanvas canvas(pts, options.width);
    std::ostringstream out;
    canvas.begin(out);
    draw_edges(out, canvas, pts, "dt", "stroke=\"#d3d3d3\" stroke-width=\"1\"", dt.edges());
    if (sel) {
        std::vector<Edge> can;
        for (const auto& [e, _] : sel->e_can()) {
            if (!sel->in_e_a(e.u, e.v)) can.push_back(e);
        }
        draw_edges(out, canvas, pts, "e-a", "stroke=\"black\" stroke-width=\"1.5\"", sel->e_a());
        draw_edges(out, canvas, pts, "e-can", "stroke=\"#d62728\" stroke-width=\"1.5\"", can);
    }
    draw_overlays(out, canvas, pts, options);
    draw_points(out, canvas, pts);
    return out.str();
}

std::string render_points_svg(const PointSet& points, const SvgOptions& options) {
    const SvgCanvas canvas(points, options.width);
    std::ostringstream out;
    canvas.begin(out);
    draw_overlays(out, canvas, points, options);
    draw_points(out, canvas, points);
    return out.str();
}

// ---------------------------------------------------------------------------

nlohmann::ordered_json constants_json() {
    const double theta = std::numbers::pi / 3.0;
    return {{"theta", round12(theta)},
            {"arc_factor", round12(theta / std::sin(theta))},
            {"stretch_bound", round12(1.0 + theta / std::sin(theta))},
            {"relative_tolerance", kRelativeTolerance}};
}

nlohmann::ordered_json report_json(const AuditReport& report, const ReportContext& context) {
    using json = nlohmann::ordered_json;
    const std::size_t cap = context.max_counterexamples;

    json doc;
    doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    if (context.timestamp) doc["timestamp"] = *context.timestamp;
    if (context.config) {
        const RunConfig& c = *context.config;
        doc["config"] = {{"n", c.n},
                         {"seed", c.seed},
                         {"distribution", to_string(c.distribution)},
                         {"perturbation", c.perturbation ? json(*c.perturbation) : json(nullptr)}};
    }
    if (context.input) doc["input"] = *context.input;
    doc["constants"] = constants_json();
    doc["counts"] = {{"points", report.point_count},
                     {"dt_edges", report.dt_edge_count},
                     {"e_a", report.e_a_count},
                     {"e_can", report.e_can_count}};

    const DegreeReport& d = report.degree;
    doc["degree"] = {
        {"passed", report.degree_passed()},
        {"max_degree", d.max_degree},
        {"max_vertex", d.max_vertex ? json(*d.max_vertex) : json(nullptr)},
        {"e_a_max_degree", d.e_a_max_degree},
        {"histogram", d.histogram},
        {"cone_overflows", capped(d.cone_overflows, cap, [](const auto& o) {
             return json{{"vertex", o.first}, {"cone", o.second.index()}};
         })}};

    const SubgraphReport& s = report.subgraph;
    doc["subgraph"] = {{"passed", s.passed()},
                       {"not_in_dt", capped(s.not_in_dt, cap, edge_json)},
                       {"crossings_checked", s.crossings_checked},
                       {"crossings", capped(s.crossings, cap, [](const Crossing& c) {
                            return json::array({edge_json(c.first), edge_json(c.second)});
                        })}};

    json audits = json::array();
    for (const AuditVerdict& v : report.audits) {
        audits.push_back({{"name", v.name},
                          {"passed", v.passed()},
                          {"checked", v.checked},
                          {"failures", v.failures.size()},
                          {"counterexamples", capped(v.failures, cap, [](const Counterexample& c) {
                               return json{{"detail", c.detail}, {"vertices", c.vertices}};
                           })}});
    }
    doc["audits"] = std::move(audits);

    if (report.stretch) {
        const StretchReport& st = *report.stretch;
        json stretch = {{"passed", st.passed()},
                        {"connected", st.connected},
                        {"max_edge_ratio", st.worst_edge ? st.worst_edge->ratio() : 1.0},
                        {"worst_edge", st.worst_edge ? edge_stretch_json(*st.worst_edge) : json(nullptr)},
                        {"max_ratio_vs_dt", pair_json(st.max_ratio_vs_dt)},
                        {"max_ratio_vs_euclid", pair_json(st.max_ratio_vs_euclid)},
                        {"dt_ratio_vs_euclid", pair_json(st.dt_ratio_vs_euclid)},
                        {"edge_bound_violations", capped(st.edge_bound_violations, cap, edge_json)},
                        {"canonical_bound_violations", capped(st.canonical_bound_violations, cap, edge_json)},
                        {"chain_violations", capped(st.chain_violations, cap, edge_json)}};
        if (context.per_edge) {
            json rows = json::array();
            for (const EdgeStretch& e : st.per_dt_edge) rows.push_back(edge_stretch_json(e));
            stretch["per_dt_edge"] = std::move(rows);
        }
        doc["stretch"] = std::move(stretch);
    }

    doc["passed"] = report.passed();
    return doc;
}

nlohmann::ordered_json witness_json(const WitnessPath& path) {
    using json = nlohmann::ordered_json;
    json trace = json::array();
    for (const WitnessStep& s : path.trace) {
        trace.push_back({{"rule", to_string(s.rule)}, {"source", s.source}, {"target", s.target}, {"anchor", s.anchor}});
    }
    return {{"source", path.source},
            {"target", path.target},
            {"vertices", path.vertices},
            {"length", path.length},
            {"canonical_bound", path.canonical_bound},
            {"within_bound", within_bound(path.length, path.canonical_bound)},
            {"depth", path.depth},
            {"trace", std::move(trace)}};
}

}  // namespace d8
