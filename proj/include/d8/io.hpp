#pragma once

#include "d8/analysis.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace d8 {

inline constexpr std::string_view kToolName = "d8";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Malformed or unreadable input (maps to CLI exit code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Point files: one "<x> <y>" per line, '#' starts a comment line.

PointSet read_points(std::istream& in);
PointSet read_points_file(const std::string& path);
/// Writes with 17 significant digits so that reading back is bit-exact.
void write_points(std::ostream& out, const PointSet& points);
void write_points_file(const std::string& path, const PointSet& points);

// ---------------------------------------------------------------------------
// Edge files: one "<u> <v> <A|CAN>" per line.

struct LabelledEdges {
    std::vector<Edge> e_a;
    std::vector<Edge> e_can;
};

LabelledEdges read_edges(std::istream& in, std::size_t vertex_count);
LabelledEdges read_edges_file(const std::string& path, std::size_t vertex_count);
/// E_A edges in acceptance order, then E_CAN edges (minus those already in E_A) in edge order.
void write_edges(std::ostream& out, const EdgeSelection& sel);

// ---------------------------------------------------------------------------
// Random instances

enum class Distribution { UniformSquare, Gaussian, Annulus };

std::string to_string(Distribution d);
/// Throws InputError for an unknown name.
Distribution parse_distribution(std::string_view name);

struct RunConfig {
    std::size_t n = 100;
    std::uint64_t seed = 0;
    Distribution distribution = Distribution::UniformSquare;
    /// When set, a sample that fails the general-position check is jittered
    /// by up to this amount per coordinate instead of being redrawn.
    std::optional<double> perturbation;
    std::size_t max_attempts = 16;
};

struct GeneratedPoints {
    PointSet points;
    std::size_t attempts = 1;
    /// One line per rejected sample or applied perturbation.
    std::vector<std::string> log;
};

/// Deterministic in the config. Throws GeometryError when the attempt
/// budget is exhausted.
GeneratedPoints generate(const RunConfig& config);

// ---------------------------------------------------------------------------
// Rendering and reports

struct SvgOptions {
    double width = 800.0;
    /// Path to draw on top of the edge layers.
    std::optional<std::vector<VertexId>> highlight;
    /// Vertex whose six cone boundaries are drawn.
    std::optional<VertexId> cone_fan;
};

/// SVG 1.1 with DT edges in light gray, E_A black, E_CAN red. With no
/// selection only the DT layer and the points are drawn; with an empty
/// triangulation only the points.
std::string render_svg(const Triangulation& dt, const EdgeSelection* sel, const SvgOptions& options = {});
std::string render_points_svg(const PointSet& points, const SvgOptions& options = {});

struct ReportContext {
    std::optional<RunConfig> config;
    std::optional<std::string> input;
    /// ISO 8601 time; omitted from the document when empty so that reports
    /// can be compared byte for byte.
    std::optional<std::string> timestamp;
    std::size_t max_counterexamples = 20;
    /// Include the per-DT-edge stretch table.
    bool per_edge = false;
};

nlohmann::ordered_json report_json(const AuditReport& report, const ReportContext& context = {});
nlohmann::ordered_json witness_json(const WitnessPath& path);
nlohmann::ordered_json constants_json();

}  // namespace d8
