#pragma once

#include "sweepout/cube_lattice.hpp"
#include "sweepout/filling_radius.hpp"
#include "sweepout/homological_filling.hpp"
#include "sweepout/sweepout_engine.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sweepout {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "report.v1";
inline constexpr const char* kComplexSchema = "complex.v1";
inline constexpr const char* kToolVersion = "0.1.0";

/** Malformed or mismatching input; the message names the file and location. */
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedFile {
  std::string path;
  std::string sha256;  // hex digest of the raw bytes
  Json json;
};

std::string sha256_hex(const std::string& bytes);
/// Reads and parses a JSON file; parse errors carry the byte offset.
LoadedFile load_json(const std::string& path);

/// "p/q" (or "p" for integers).
Json rational_json(const Rational& value);
/// Decimal with 12 significant digits.
Json real_json(double value);
/// Accepts "p/q" or decimal strings and JSON numbers.
Rational rational_from_json(const Json& value, const std::string& where);

/**
 * A complex read from complex.v1: labeled cubes, simplices, or a piece of the
 * cube decomposition. `labels` gives the corner labels of each cube when the
 * complex came from labeled cubes.
 */
struct ComplexInput {
  std::string kind;  // "cubes", "simplices" or "decomposition"
  std::optional<GluedComplex> glued;
  ChainComplex chains;
  std::vector<std::vector<int>> cube_labels;
  std::optional<ChainWeighting> weights;  // from an optional "weights" block
};

ComplexInput parse_complex(const Json& j, const std::string& where);

/// {"points": k, "distances": [[...]]}, or {"cycle_graph": {...}} / {"sphere": "icosahedron"}.
FiniteMetricSpace parse_metric(const Json& j, const std::string& where);

/// complex.v1 with cubes plus "metric" and "vertex_images" (label -> point).
FillingInput parse_filling(const Json& j, const std::string& where);

/// Tables from an fh report, an array of them, or {"tables": [...]}.
std::map<int, FillingFunctionTable> parse_tables(const Json& j, const std::string& where);
/// Measurements block of a sweep or starfish report.
SweepoutMeasurements parse_measurements(const Json& j, const std::string& where);

Json table_json(const FillingFunctionTable& table);
FillingFunctionTable table_from_json(const Json& j, const std::string& where);
Json optional_rational_json(const std::optional<Rational>& value);  // "inf" for infinity

/** A polyhedral record for OFF export. */
struct GeometryRecord {
  std::string name;
  std::vector<std::vector<double>> vertices;
  std::vector<std::vector<std::size_t>> faces;  // polygons
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Vertices at chart coordinates (charts shifted apart along the first axis),
/// squares as quads, every edge listed.
GeometryRecord geometry_of(const GluedComplex& complex, const std::string& name);
/// Vertices and edges of a fiber, at the coordinates of the canonical chart.
GeometryRecord geometry_of(const SweepoutBundle& bundle, const FiberRecord& fiber, const std::string& name);

std::string to_off(const GeometryRecord& record);
/// Writes one `<name>.off` per record in name order; creates `dir` (empty when
/// there are no records). Returns the written file names. Throws InputError
/// when the directory cannot be written.
std::vector<std::string> export_geometry(const std::vector<GeometryRecord>& records, const std::filesystem::path& dir);

/** report.v1 envelope. */
struct ReportBuilder {
  std::string command;
  Json arguments = Json::object();
  Json inputs = Json::array();
  Json result = Json::object();
  std::string status = "ok";
  double seconds = 0.0;

  void add_input(const LoadedFile& file);
  /// Everything except the timing block, which is appended last.
  Json to_json() const;
};

}  // namespace sweepout
