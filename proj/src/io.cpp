#include "sweepout/io.hpp"

#include "sweepout/cube_decomposition.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace sweepout {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return out.str();
}

LoadedFile load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  LoadedFile f;
  f.path = path;
  const std::string bytes = buf.str();
  f.sha256 = sha256_hex(bytes);
  try {
    f.json = Json::parse(bytes);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return f;
}

Json rational_json(const Rational& value) { return format_rational(value); }

Json real_json(double value) {
  if (!std::isfinite(value)) return format_real(value);
  return std::stod(format_real(value));
}

Rational rational_from_json(const Json& value, const std::string& where) {
  try {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) return Rational(value.get<long long>());
    if (value.is_number()) return parse_rational(value.dump());
  } catch (const std::exception& e) {
    throw InputError(where + ": " + e.what());
  }
  throw InputError(where + ": expected a rational (\"p/q\", a decimal string or a number)");
}

Json optional_rational_json(const std::optional<Rational>& value) {
  return value ? rational_json(*value) : Json("inf");
}

namespace {

std::optional<Rational> optional_rational_from_json(const Json& value, const std::string& where) {
  if (value.is_null() || (value.is_string() && value.get<std::string>() == "inf")) return std::nullopt;
  return rational_from_json(value, where);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const Json::exception& e) {
    throw InputError(where + ": " + e.what());
  }
}

void check_schema(const Json& j, const std::string& expected, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected a JSON object");
  if (!j.contains("schema")) return;
  const auto schema = get_as<std::string>(j.at("schema"), where + ".schema");
  if (schema != expected) {
    throw InputError(where + ": unsupported schema \"" + schema + "\" (expected \"" + expected + "\")");
  }
}

Piece piece_from_name(const std::string& name, const std::string& where) {
  for (Piece p : {Piece::Z, Piece::X1, Piece::X2, Piece::Y, Piece::Skeleton})
    if (piece_name(p) == name) return p;
  throw InputError(where + ": unknown piece \"" + name + "\"");
}

}  // namespace

ComplexInput parse_complex(const Json& j, const std::string& where) {
  check_schema(j, kComplexSchema, where);
  ComplexInput c;
  try {
    if (j.contains("cubes")) {
      c.kind = "cubes";
      const int dim = get_as<int>(field(j, "dimension", where), where + ".dimension");
      if (dim < 1 || dim > 6) throw InputError(where + ".dimension: must lie in 1..6");
      c.cube_labels = get_as<std::vector<std::vector<int>>>(j.at("cubes"), where + ".cubes");
      for (std::size_t i = 0; i < c.cube_labels.size(); ++i) {
        if (c.cube_labels[i].size() != (std::size_t{1} << dim)) {
          throw InputError(where + ".cubes[" + std::to_string(i) + "]: expected " + std::to_string(1 << dim) + " corner labels");
        }
      }
      c.glued = from_labeled_cubes(dim, c.cube_labels);
      c.chains = c.glued->chains();
    } else if (j.contains("simplices")) {
      c.kind = "simplices";
      auto simplices = get_as<std::vector<std::vector<std::size_t>>>(j.at("simplices"), where + ".simplices");
      if (simplices.empty()) throw InputError(where + ".simplices: empty");
      c.chains = ChainComplex::from_simplices(simplices);
    } else if (j.contains("decomposition")) {
      c.kind = "decomposition";
      const auto& d = j.at("decomposition");
      const std::string w = where + ".decomposition";
      const int n = get_as<int>(field(d, "n", w), w + ".n");
      const int p = get_as<int>(field(d, "p", w), w + ".p");
      const Rational eps = rational_from_json(field(d, "epsilon", w), w + ".epsilon");
      const Piece piece = piece_from_name(get_as<std::string>(field(d, "piece", w), w + ".piece"), w + ".piece");
      auto set = build_decomposition(n, p, eps);
      c.glued = set.piece(piece);
      c.chains = c.glued->chains();
    } else {
      throw InputError(where + ": expected one of \"cubes\", \"simplices\" or \"decomposition\"");
    }
    if (j.contains("weights")) {
      ChainWeighting w = ChainWeighting::unit(c.chains);
      for (const auto& [key, row] : j.at("weights").items()) {
        const std::string wk = where + ".weights." + key;
        int k = -1;
        try {
          k = std::stoi(key);
        } catch (const std::exception&) {
          throw InputError(wk + ": degree keys must be integers");
        }
        if (k < 0 || k > c.chains.top_dimension()) throw InputError(wk + ": degree outside the complex");
        if (!row.is_array() || row.size() != c.chains.count(k)) {
          throw InputError(wk + ": expected " + std::to_string(c.chains.count(k)) + " weights");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
          w.per_degree[static_cast<std::size_t>(k)][i] = rational_from_json(row[i], wk + "[" + std::to_string(i) + "]");
        }
      }
      w.validate(c.chains);
      c.weights = std::move(w);
    }
  } catch (const DomainError& e) {
    throw InputError(where + ": " + e.what());
  } catch (const GluingError& e) {
    throw InputError(where + ": " + e.what());
  }
  return c;
}

FiniteMetricSpace parse_metric(const Json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected a JSON object");
  FiniteMetricSpace m;
  try {
    if (j.contains("distances")) {
      const auto& rows = j.at("distances");
      if (!rows.is_array()) throw InputError(where + ".distances: expected an array of rows");
      if (j.contains("points") && get_as<std::size_t>(j.at("points"), where + ".points") != rows.size()) {
        throw InputError(where + ": \"points\" disagrees with the number of distance rows");
      }
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array()) throw InputError(where + ".distances[" + std::to_string(i) + "]: expected an array");
        std::vector<Rational> row;
        for (std::size_t k = 0; k < rows[i].size(); ++k) {
          row.push_back(rational_from_json(rows[i][k], where + ".distances[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
        }
        m.distances.push_back(std::move(row));
      }
    } else if (j.contains("cycle_graph")) {
      const auto& g = j.at("cycle_graph");
      const std::string w = where + ".cycle_graph";
      m = FiniteMetricSpace::cycle_graph(get_as<std::size_t>(field(g, "points", w), w + ".points"),
                                         rational_from_json(field(g, "circumference", w), w + ".circumference"));
    } else if (j.contains("sphere")) {
      const auto name = get_as<std::string>(j.at("sphere"), where + ".sphere");
      if (name == "icosahedron") {
        m = FiniteMetricSpace::spherical(icosahedron_vertices());
      } else if (name == "octahedron") {
        m = FiniteMetricSpace::spherical(octahedron_vertices());
      } else {
        throw InputError(where + ".sphere: unknown sample \"" + name + "\"");
      }
      m.degree = 2;
    } else if (j.contains("graph")) {
      const auto& g = j.at("graph");
      const std::string w = where + ".graph";
      const auto n = get_as<std::size_t>(field(g, "vertices", w), w + ".vertices");
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      std::vector<Rational> lengths;
      const auto& list = field(g, "edges", w);
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string we = w + ".edges[" + std::to_string(i) + "]";
        if (!list[i].is_array() || list[i].size() != 3) throw InputError(we + ": expected [a, b, length]");
        edges.push_back({get_as<std::size_t>(list[i][0], we), get_as<std::size_t>(list[i][1], we)});
        lengths.push_back(rational_from_json(list[i][2], we));
      }
      m = FiniteMetricSpace::from_graph(n, edges, lengths);
    } else {
      throw InputError(where + ": expected \"distances\", \"cycle_graph\", \"sphere\" or \"graph\"");
    }
    if (j.contains("degree")) m.degree = get_as<int>(j.at("degree"), where + ".degree");
    if (j.contains("volume")) m.volume = rational_from_json(j.at("volume"), where + ".volume");
    m.validate();
  } catch (const DomainError& e) {
    throw InputError(where + ": " + e.what());
  }
  return m;
}

FillingInput parse_filling(const Json& j, const std::string& where) {
  auto c = parse_complex(j, where);
  if (c.kind != "cubes") throw InputError(where + ": a filling must be given by labeled cubes");
  FillingInput in;
  in.P = *c.glued;
  in.metric = parse_metric(field(j, "metric", where), where + ".metric");
  const auto& images = field(j, "vertex_images", where);
  if (!images.is_object()) throw InputError(where + ".vertex_images: expected an object from corner label to point");
  std::map<int, std::size_t> by_label;
  for (const auto& [key, value] : images.items()) {
    int label = 0;
    try {
      label = std::stoi(key);
    } catch (const std::exception&) {
      throw InputError(where + ".vertex_images: label \"" + key + "\" is not an integer");
    }
    const auto point = get_as<std::size_t>(value, where + ".vertex_images." + key);
    if (point >= in.metric.size()) throw InputError(where + ".vertex_images." + key + ": point outside the metric");
    by_label[label] = point;
  }
  std::vector<std::vector<std::size_t>> per_chart;
  for (const auto& cube : c.cube_labels) {
    std::vector<std::size_t> row;
    for (int l : cube) {
      auto it = by_label.find(l);
      if (it == by_label.end()) throw InputError(where + ".vertex_images: no image for label " + std::to_string(l));
      row.push_back(it->second);
    }
    per_chart.push_back(std::move(row));
  }
  try {
    in.vertex_images = vertex_images_from_corners(in.P, per_chart);
  } catch (const DomainError& e) {
    throw InputError(where + ".vertex_images: " + e.what());
  }
  if (j.contains("strict")) in.strict_single_boundary_face = get_as<bool>(j.at("strict"), where + ".strict");
  if (j.contains("nu")) in.nu = rational_from_json(j.at("nu"), where + ".nu");
  return in;
}

Json table_json(const FillingFunctionTable& t) {
  Json j;
  j["degree"] = t.k;
  j["exhaustive"] = t.exhaustive;
  j["fillings_exact"] = t.fillings_exact;
  j["cycle_space_dimension"] = t.cycle_space_dimension;
  j["candidates"] = t.candidates;
  j["entries"] = Json::array();
  for (const auto& e : t.entries) {
    Json row;
    row["v"] = rational_json(e.v);
    row["value"] = optional_rational_json(e.value);
    row["exact"] = e.exact;
    row["cycles"] = e.cycles;
    if (!e.notice.empty()) row["notice"] = e.notice;
    j["entries"].push_back(row);
  }
  j["steps"] = Json::array();
  for (const auto& s : t.steps) {
    j["steps"].push_back({{"weight", rational_json(s.weight)}, {"sup", optional_rational_json(s.sup)}, {"cycles", s.cycles}});
  }
  j["notices"] = t.notices;
  return j;
}

FillingFunctionTable table_from_json(const Json& j, const std::string& where) {
  FillingFunctionTable t;
  t.k = get_as<int>(field(j, "degree", where), where + ".degree");
  if (j.contains("exhaustive")) t.exhaustive = get_as<bool>(j.at("exhaustive"), where + ".exhaustive");
  if (j.contains("fillings_exact")) t.fillings_exact = get_as<bool>(j.at("fillings_exact"), where + ".fillings_exact");
  const auto& entries = field(j, "entries", where);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string we = where + ".entries[" + std::to_string(i) + "]";
    FhEntry e;
    e.v = rational_from_json(field(entries[i], "v", we), we + ".v");
    e.value = optional_rational_from_json(field(entries[i], "value", we), we + ".value");
    e.exact = entries[i].value("exact", false);
    e.cycles = entries[i].value("cycles", std::size_t{0});
    t.entries.push_back(std::move(e));
  }
  if (j.contains("steps")) {
    const auto& steps = j.at("steps");
    Rational previous = -1;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const std::string ws = where + ".steps[" + std::to_string(i) + "]";
      FhStep s;
      s.weight = rational_from_json(field(steps[i], "weight", ws), ws + ".weight");
      s.sup = optional_rational_from_json(field(steps[i], "sup", ws), ws + ".sup");
      s.cycles = steps[i].value("cycles", std::size_t{0});
      if (s.weight <= previous) throw InputError(ws + ": step weights must increase");
      previous = s.weight;
      t.steps.push_back(std::move(s));
    }
  }
  return t;
}

std::map<int, FillingFunctionTable> parse_tables(const Json& j, const std::string& where) {
  std::map<int, FillingFunctionTable> out;
  auto add = [&](const FillingFunctionTable& t, const std::string& w) {
    if (!out.emplace(t.k, t).second) throw InputError(w + ": second table for degree " + std::to_string(t.k));
  };
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      for (const auto& [k, t] : parse_tables(j[i], where + "[" + std::to_string(i) + "]")) add(t, where);
    }
    return out;
  }
  if (!j.is_object()) throw InputError(where + ": expected a report, a table or a list of them");
  if (j.contains("tables")) return parse_tables(j.at("tables"), where + ".tables");
  if (j.contains("schema")) {
    check_schema(j, kReportSchema, where);
    const auto& result = field(j, "result", where);
    add(table_from_json(field(result, "table", where + ".result"), where + ".result.table"), where);
    return out;
  }
  add(table_from_json(j, where), where);
  return out;
}

SweepoutMeasurements parse_measurements(const Json& j, const std::string& where) {
  const Json* block = &j;
  std::string w = where;
  if (j.contains("schema")) {
    check_schema(j, kReportSchema, where);
    block = &field(field(j, "result", where), "measurements", where + ".result");
    w = where + ".result.measurements";
  } else if (j.contains("measurements")) {
    block = &j.at("measurements");
    w = where + ".measurements";
  }
  SweepoutMeasurements m;
  m.waist_upper = get_as<double>(field(*block, "waist_upper", w), w + ".waist_upper");
  m.urysohn_upper = get_as<double>(field(*block, "urysohn_upper", w), w + ".urysohn_upper");
  m.source = block->value("source", std::string("report"));
  return m;
}

namespace {

std::vector<double> shifted(const std::vector<Rational>& coords, int chart, bool shift) {
  std::vector<double> out;
  for (const auto& c : coords) out.push_back(to_double(c));
  if (shift && !out.empty()) out[0] += 3.0 * chart;
  return out;
}

}  // namespace

GeometryRecord geometry_of(const GluedComplex& complex, const std::string& name) {
  GeometryRecord g;
  g.name = name;
  const bool shift = complex.charts().size() > 1;
  for (std::size_t v = 0; v < complex.cell_count(0); ++v) {
    const auto& rep = complex.representative(0, v);
    const auto& chart = complex.charts()[static_cast<std::size_t>(rep.chart)];
    g.vertices.push_back(shifted(chart.coordinates(rep), rep.chart, shift));
  }
  if (complex.dimension() >= 1) {
    for (std::size_t e = 0; e < complex.cell_count(1); ++e) {
      const auto& vs = complex.chains().vertices(1, e);
      if (vs.size() == 2) g.edges.push_back({vs[0], vs[1]});
    }
  }
  if (complex.dimension() >= 2) {
    for (std::size_t f = 0; f < complex.cell_count(2); ++f) {
      auto cs = corners(complex.representative(2, f));
      std::vector<std::size_t> quad;
      for (std::size_t b : {0u, 1u, 3u, 2u}) quad.push_back(complex.require(cs[b]).id);
      g.faces.push_back(std::move(quad));
    }
  }
  return g;
}

GeometryRecord geometry_of(const SweepoutBundle& bundle, const FiberRecord& fiber, const std::string& name) {
  GeometryRecord g;
  g.name = name;
  const bool shift = bundle.N.charts().size() > 1;
  std::map<PointKey, std::size_t> index;
  auto vertex = [&](const PointKey& k) {
    auto [it, fresh] = index.emplace(k, g.vertices.size());
    if (fresh) g.vertices.push_back(shifted(k.coords, k.chart, shift));
    return it->second;
  };
  for (const auto& v : fiber.vertices) vertex(v);
  for (const auto& e : fiber.edges) g.edges.push_back({vertex(e.from_key), vertex(e.to_key)});
  return g;
}

std::string to_off(const GeometryRecord& r) {
  std::size_t dim = 3;
  for (const auto& v : r.vertices) dim = std::max(dim, v.size());
  std::ostringstream out;
  if (dim == 3) {
    out << "OFF\n";
  } else {
    out << "nOFF\n" << dim << '\n';
  }
  // Graphs carry their edges as two-vertex faces so that viewers draw them.
  const bool graph = r.faces.empty();
  const std::size_t faces = graph ? r.edges.size() : r.faces.size();
  out << r.vertices.size() << ' ' << faces << ' ' << r.edges.size() << '\n';
  for (const auto& v : r.vertices) {
    for (std::size_t i = 0; i < dim; ++i) out << (i ? " " : "") << format_real(i < v.size() ? v[i] : 0.0);
    out << '\n';
  }
  if (graph) {
    for (const auto& [a, b] : r.edges) out << "2 " << a << ' ' << b << '\n';
  } else {
    for (const auto& f : r.faces) {
      out << f.size();
      for (auto v : f) out << ' ' << v;
      out << '\n';
    }
  }
  return out.str();
}

std::vector<std::string> export_geometry(const std::vector<GeometryRecord>& records, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw InputError(dir.string() + ": cannot create export directory");
  std::vector<const GeometryRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->name < b->name; });
  std::vector<std::string> names;
  for (const auto* r : sorted) {
    const std::string file = r->name + ".off";
    std::ofstream out(dir / file, std::ios::binary);
    out << to_off(*r);
    if (!out) throw InputError((dir / file).string() + ": write failed");
    names.push_back(file);
  }
  return names;
}

void ReportBuilder::add_input(const LoadedFile& file) {
  inputs.push_back({{"path", file.path}, {"sha256", file.sha256}});
}

Json ReportBuilder::to_json() const {
  Json j;
  j["schema"] = kReportSchema;
  j["tool"] = {{"name", "sweepout-forge"}, {"version", kToolVersion}};
  j["command"] = command;
  j["arguments"] = arguments;
  j["inputs"] = inputs;
  j["status"] = status;
  j["result"] = result;
  j["timing"] = {{"seconds", real_json(seconds)}};
  return j;
}

}  // namespace sweepout
