// sweepout-forge: command-line front end writing report.v1 JSON.
#include "sweepout/cube_decomposition.hpp"
#include "sweepout/filling_radius.hpp"
#include "sweepout/homological_filling.hpp"
#include "sweepout/io.hpp"
#include "sweepout/pseudo_homology.hpp"
#include "sweepout/starfish.hpp"
#include "sweepout/sweepout_engine.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace sweepout;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitAudit = 2;

struct Options {
  int n = 0;
  int p = 1;
  std::string epsilon = "1/2";
  std::string complex;
  std::string input;
  std::string metric;
  std::string bundle;
  std::string tables;
  std::string fillrad;
  std::optional<int> degree;
  std::string grid;
  std::string mode = "auto";
  std::size_t samples = 4096;
  std::uint64_t seed = 1;
  std::string report;
  std::string export_dir;
  double tolerance = 1e-9;
  bool strict = false;
  std::string leg = "4";
  std::string radius = "1/2";
  int resolution = 8;
  int levels = 3;
};

/// Positive integer from SWEEPOUT_FORGE_THREADS, 1 when unset.
int thread_cap() {
  const char* raw = std::getenv("SWEEPOUT_FORGE_THREADS");
  if (!raw || !*raw) return 1;
  const std::string s(raw);
  if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 4 || std::stoi(s) < 1) {
    throw InputError("SWEEPOUT_FORGE_THREADS: expected a positive integer, got \"" + s + "\"");
  }
  return std::stoi(s);
}

Rational rational_arg(const std::string& text, const std::string& flag) {
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw InputError(flag + ": " + e.what());
  }
}

/// "a:b:s" (inclusive range) or a comma-separated list.
std::vector<Rational> parse_grid(const std::string& text) {
  std::vector<Rational> grid;
  if (text.find(':') != std::string::npos) {
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (second == std::string::npos) throw InputError("--grid: expected start:stop:step");
    const Rational a = rational_arg(text.substr(0, first), "--grid");
    const Rational b = rational_arg(text.substr(first + 1, second - first - 1), "--grid");
    const Rational s = rational_arg(text.substr(second + 1), "--grid");
    if (s <= 0) throw InputError("--grid: step must be positive");
    if (a < 0 || b < a) throw InputError("--grid: need 0 <= start <= stop");
    for (Rational v = a; v <= b; v += s) {
      grid.push_back(v);
      if (grid.size() > 10000) throw InputError("--grid: more than 10000 points");
    }
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto end = std::min(text.find(',', start), text.size());
      grid.push_back(rational_arg(text.substr(start, end - start), "--grid"));
      start = end + 1;
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.front() < 0) throw InputError("--grid: weights must be nonnegative");
  }
  return grid;
}

Json counts_json(const GluedComplex& c) {
  Json cells = Json::array();
  for (int k = 0; k <= c.dimension(); ++k) cells.push_back(c.cell_count(k));
  return {{"cells", cells}, {"euler_characteristic", c.euler_characteristic()}};
}

Json pseudomanifold_json(const PseudomanifoldReport& r) {
  return {{"pseudomanifold", r.is_pseudomanifold()},
          {"dimension", r.dimension},
          {"pure", r.pure},
          {"facet_incidence_ok", r.facet_incidence_ok},
          {"strongly_connected", r.strongly_connected},
          {"orientable", r.orientable},
          {"closed", r.closed()},
          {"boundary_facets", r.boundary.support_size()},
          {"notes", r.notes}};
}

Json estimate_json(const FillRadEstimate& e) {
  Json pair = {{"birth", rational_json(e.pair.birth)}, {"death", optional_rational_json(e.pair.death)}};
  return {{"value", rational_json(e.value)},
          {"value_real", real_json(to_double(e.value))},
          {"degree", e.degree},
          {"pair", pair},
          {"convention", e.convention}};
}

Json audit_json(const AuditReport& a) {
  Json clauses = Json::array();
  for (const auto& c : a.clauses) {
    Json j = {{"name", c.name},         {"inequality", c.inequality},       {"lhs", real_json(c.lhs)},
              {"rhs", real_json(c.rhs)}, {"tolerance", real_json(c.tolerance)}, {"skipped", c.skipped},
              {"passed", c.passed},     {"informational", c.informational}};
    if (!c.notice.empty()) j["notice"] = c.notice;
    clauses.push_back(j);
  }
  return {{"estimate", estimate_json(a.estimate)}, {"clauses", clauses}, {"passed", a.passed()}};
}

Json measurements_json(const SweepoutMeasurements& m) {
  return {{"waist_upper", real_json(m.waist_upper)}, {"urysohn_upper", real_json(m.urysohn_upper)}, {"source", m.source}};
}

Json bound_json(const BoundValue& b) {
  Json statuses = Json::array();
  for (auto s : b.statuses) statuses.push_back(to_string(s));
  Json j = {{"available", b.available}, {"partial", b.partial}, {"statuses", statuses}, {"notes", b.notes}};
  if (b.available) {
    j["value"] = optional_rational_json(b.value);
    if (b.value) j["value_real"] = real_json(to_double(*b.value));
  }
  return j;
}

int run_decompose(const Options& o, ReportBuilder& r) {
  if (o.n < 1 || o.n > 5) throw InputError("--n: must lie in 1..5");
  const Rational eps = rational_arg(o.epsilon, "--epsilon");
  r.arguments = {{"n", o.n}, {"p", o.p}, {"epsilon", rational_json(eps)}};
  const auto set = build_decomposition(o.n, o.p, eps);
  Json pieces = Json::object();
  for (Piece piece : {Piece::Z, Piece::X1, Piece::X2, Piece::Y, Piece::Skeleton})
    pieces[piece_name(piece)] = counts_json(set.piece(piece));
  r.result["pieces"] = pieces;

  const auto y = validate_Y(o.n, o.p, eps);
  Json yj = pseudomanifold_json(y.report);
  yj["boundary_in_cube_boundary"] = y.boundary_in_cube_boundary;
  yj["top_cells"] = y.top_cells;
  yj["passed"] = y.passed();
  r.result["Y"] = yj;

  std::size_t max_edges = 0;
  std::size_t skeleta = 0;
  std::vector<GeometryRecord> records;
  Json at_max = Json::array();
  const auto z_cells = decomposition_cells(o.n, o.p, Piece::Z);
  for (std::size_t i = 0; i < z_cells.size(); ++i) {
    const auto fiber = theta_fiber_of_cell(z_cells[i], o.p, eps);
    skeleta += recognize_cube_skeleton(fiber.complex, o.p).isomorphic;
    const auto edges = fiber.complex.cell_count(1);
    Json base = Json::array();
    for (const auto& b : fiber.base) base.push_back(rational_json(b));
    if (edges > max_edges) at_max = Json::array();
    if (edges >= max_edges) {
      max_edges = edges;
      at_max.push_back(base);
    }
    if (!o.export_dir.empty()) {
      const std::string index = std::to_string(i);
      records.push_back(geometry_of(fiber.complex, "fiber-" + std::string(4 - std::min<std::size_t>(4, index.size()), '0') + index));
    }
  }
  r.result["fibers"] = {{"count", z_cells.size()},
                        {"cube_skeleta", skeleta},
                        {"max_edges", max_edges},
                        {"max_edges_at", at_max}};
  if (!o.export_dir.empty()) r.result["exported"] = export_geometry(records, o.export_dir);

  const bool ok = y.passed() && skeleta == z_cells.size();
  r.status = ok ? "ok" : "failed";
  return ok ? kExitOk : kExitAudit;
}

int run_validate(const Options& o, ReportBuilder& r) {
  const auto file = load_json(o.complex);
  r.add_input(file);
  r.arguments = {{"complex", o.complex}};
  const auto c = parse_complex(file.json, o.complex);
  const auto report = c.glued ? check_pseudomanifold(*c.glued) : check_pseudomanifold(c.chains);
  r.result = pseudomanifold_json(report);
  r.result["kind"] = c.kind;
  if (!report.orientation_witness.empty()) r.result["orientation_witness"] = report.orientation_witness;
  r.status = report.is_pseudomanifold() ? "ok" : "failed";
  return report.is_pseudomanifold() ? kExitOk : kExitAudit;
}

int run_sweep(const Options& o, ReportBuilder& r) {
  const auto file = load_json(o.input);
  r.add_input(file);
  r.arguments = {{"input", o.input}, {"strict", o.strict}};
  auto in = parse_filling(file.json, o.input);
  if (o.strict) in.strict_single_boundary_face = true;
  const auto bundle = build_bundle(in);
  const auto waist = measure_waist(bundle);
  const auto audit = homology_audit(bundle);

  r.result["n"] = bundle.n;
  r.result["epsilon"] = rational_json(bundle.eps);
  r.result["delta"] = rational_json(bundle.delta);
  r.result["cubes"] = bundle.cube_count;
  r.result["boundary_facets"] = bundle.boundary_facets.size();
  Json nj = pseudomanifold_json(bundle.n_report);
  nj.update(counts_json(bundle.N));
  r.result["N"] = nj;
  const bool within = waist.waist_upper <= waist.certified_max;
  r.result["waist"] = {{"waist_upper", rational_json(waist.waist_upper)},
                       {"urysohn_upper", rational_json(waist.urysohn_upper)},
                       {"certified_max", rational_json(waist.certified_max)},
                       {"within_certified", within},
                       {"fibers", waist.fibers},
                       {"max_edges", waist.max_edges}};
  r.result["homology"] = {{"homologous", audit.homologous},
                          {"witness_verified", audit.witness_verified},
                          {"witness_cells", audit.witness.support_size()},
                          {"note", audit.note}};
  r.result["measurements"] = measurements_json(measurements(waist));
  r.result["notes"] = bundle.notes;

  if (!o.export_dir.empty()) {
    std::vector<GeometryRecord> records{geometry_of(bundle.N, "N")};
    for (const auto& f : all_fibers(bundle)) {
      if (!f.base_cell) continue;
      const std::string id = std::to_string(f.base_cell->second);
      records.push_back(geometry_of(bundle, f,
                                    "fiber-" + std::to_string(f.base_cell->first) + "-" +
                                        std::string(5 - std::min<std::size_t>(5, id.size()), '0') + id));
    }
    r.result["exported"] = export_geometry(records, o.export_dir);
  }

  const bool ok = bundle.n_report.is_pseudomanifold() && bundle.n_report.closed() && audit.homologous &&
                  audit.witness_verified && within;
  r.status = ok ? "ok" : "failed";
  return ok ? kExitOk : kExitAudit;
}

int run_fillrad(const Options& o, ReportBuilder& r) {
  const auto file = load_json(o.metric);
  r.add_input(file);
  r.arguments = {{"metric", o.metric}};
  if (o.degree) r.arguments["degree"] = *o.degree;
  const auto space = parse_metric(file.json, o.metric);
  const auto estimate = fillrad_estimate(space, o.degree);
  r.result["points"] = space.size();
  r.result["diameter"] = rational_json(space.diameter());
  r.result["estimate"] = estimate_json(estimate);
  const auto ref = reference_constants(estimate.degree);
  r.result["reference"] = {{"n", ref.n}, {"sphere_fillrad", real_json(ref.sphere_fillrad)}, {"c_n", rational_json(ref.c_n)}};
  Json pairs = Json::array();
  for (const auto& pair : rips_persistence(space, estimate.degree)) {
    if (pair.degree != estimate.degree || (pair.death && *pair.death == pair.birth)) continue;
    pairs.push_back({{"birth", rational_json(pair.birth)}, {"death", optional_rational_json(pair.death)}});
  }
  r.result["persistence"] = pairs;
  return kExitOk;
}

int run_fh(const Options& o, ReportBuilder& r) {
  const auto file = load_json(o.complex);
  r.add_input(file);
  if (!o.degree || *o.degree < 0) throw InputError("--degree: required and nonnegative");
  r.arguments = {{"complex", o.complex}, {"degree", *o.degree}, {"grid", o.grid}, {"mode", o.mode},
                 {"samples", o.samples}, {"seed", o.seed}};
  const auto c = parse_complex(file.json, o.complex);
  if (*o.degree + 1 > c.chains.top_dimension()) throw InputError("--degree: the complex has no cells of degree k+1");
  const auto grid = parse_grid(o.grid);
  FhOptions options;
  options.mode = o.mode == "exhaustive" ? FhMode::Exhaustive : o.mode == "sampled" ? FhMode::Sampled : FhMode::Auto;
  options.samples = o.samples;
  options.seed = o.seed;
  const auto weights = c.weights ? *c.weights : ChainWeighting::unit(c.chains);
  const auto table = fh_profile(c.chains, *o.degree, grid, weights, options);
  r.result["table"] = table_json(table);
  Json values = Json::array();
  for (const auto& v : grid) {
    const auto value = fh_value(table, v);
    values.push_back({{"v", rational_json(v)}, {"value", optional_rational_json(value.value)}, {"status", to_string(value.status)}});
  }
  r.result["values"] = values;
  return kExitOk;
}

int run_bound(const Options& o, ReportBuilder& r) {
  const Rational fillrad = rational_arg(o.fillrad, "--fillrad");
  r.arguments = {{"n", o.n}, {"p", o.p}, {"fillrad", rational_json(fillrad)}};
  std::map<int, FillingFunctionTable> tables;
  if (!o.tables.empty()) {
    const auto file = load_json(o.tables);
    r.add_input(file);
    r.arguments["tables"] = o.tables;
    tables = parse_tables(file.json, o.tables);
  }
  const auto b = theorem_bounds(o.n, o.p, fillrad, tables);
  r.result = {{"n", b.n},
              {"p", b.p},
              {"fillrad", rational_json(b.fillrad)},
              {"face_count", b.face_count},
              {"enumerated_face_count", b.enumerated_face_count},
              {"prefactor", rational_json(b.prefactor)},
              {"cubical", bound_json(b.fr3)},
              {"simplicial", bound_json(b.improved)}};
  r.status = b.fr3.partial || b.improved.partial ? "partial" : "ok";
  return kExitOk;
}

int run_starfish(const Options& o, ReportBuilder& r) {
  const Rational leg = rational_arg(o.leg, "--leg");
  const Rational radius = rational_arg(o.radius, "--radius");
  r.arguments = {{"leg", rational_json(leg)}, {"radius", rational_json(radius)}, {"resolution", o.resolution},
                 {"levels", o.levels}, {"tolerance", real_json(o.tolerance)}};
  const auto s = make_starfish(leg, radius, o.resolution, o.levels);
  const auto h = hexapodize(s);
  const auto m = measurements(s);
  r.result["surface"] = counts_json(s.M);
  r.result["tripod"] = {{"max_fiber_length", rational_json(s.max_fiber_length)},
                        {"max_loop_length", rational_json(s.max_loop_length)},
                        {"center_jump", rational_json(s.center_jump)}};
  const bool ratio_ok = h.length_ratio <= Rational(21, 10);
  const bool jumps_ok = h.max_consecutive_difference <= 2 * h.max_loop_length;
  r.result["hexapod"] = {{"all_cycles", h.all_cycles},
                         {"max_fiber_length", rational_json(h.max_fiber_length)},
                         {"max_loop_length", rational_json(h.max_loop_length)},
                         {"length_ratio", rational_json(h.length_ratio)},
                         {"length_ratio_real", real_json(to_double(h.length_ratio))},
                         {"length_ratio_within_twice", ratio_ok},
                         {"max_consecutive_difference", rational_json(h.max_consecutive_difference)},
                         {"consecutive_difference_bounded", jumps_ok}};
  r.result["measurements"] = measurements_json(m);
  const auto audit = inequality_audit(s.metric, m, 2, o.tolerance);
  r.result["audit"] = audit_json(audit);
  const bool ok = h.all_cycles && ratio_ok && jumps_ok && audit.passed();
  r.status = ok ? "ok" : "failed";
  return ok ? kExitOk : kExitAudit;
}

int run_audit(const Options& o, ReportBuilder& r) {
  const auto file = load_json(o.metric);
  r.add_input(file);
  r.arguments = {{"metric", o.metric}, {"tolerance", real_json(o.tolerance)}};
  if (o.degree) r.arguments["degree"] = *o.degree;
  const auto space = parse_metric(file.json, o.metric);
  std::optional<SweepoutMeasurements> sweep;
  if (!o.bundle.empty()) {
    const auto b = load_json(o.bundle);
    r.add_input(b);
    r.arguments["bundle"] = o.bundle;
    sweep = parse_measurements(b.json, o.bundle);
    r.result["measurements"] = measurements_json(*sweep);
  }
  const auto audit = inequality_audit(space, sweep, o.degree, o.tolerance);
  r.result["audit"] = audit_json(audit);
  r.status = audit.passed() ? "ok" : "failed";
  return audit.passed() ? kExitOk : kExitAudit;
}

void write_report(const Json& report, const std::string& path) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw InputError(path + ": cannot write report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubical sweepouts, filling radius and homological filling functions"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Options o;

  auto report_flag = [&](CLI::App* sub) { sub->add_option("--report,--out", o.report, "Report path (stdout when absent)"); };

  auto* decompose = app.add_subcommand("decompose", "Cube decomposition, Y validation and theta fibers");
  decompose->add_option("--n", o.n, "Cube dimension minus one")->required();
  decompose->add_option("--p", o.p, "Sweepout degree")->required();
  decompose->add_option("--epsilon", o.epsilon, "Collar width, e.g. 1/2");
  decompose->add_option("--export-fibers", o.export_dir, "Directory for one OFF file per cell of Z");
  report_flag(decompose);

  auto* validate = app.add_subcommand("validate", "Pseudomanifold checks on a complex.v1 file");
  validate->add_option("--complex", o.complex)->required();
  report_flag(validate);

  auto* sweep = app.add_subcommand("sweep", "Build the sweepout bundle of a filling and measure its fibers");
  sweep->add_option("--input", o.input)->required();
  sweep->add_flag("--strict", o.strict, "Reject cubes with more than one boundary face");
  sweep->add_option("--export-fibers", o.export_dir, "Directory for N.off and the fiber OFF files");
  report_flag(sweep);

  auto* fillrad = app.add_subcommand("fillrad", "Filling radius estimate from Rips persistence");
  fillrad->add_option("--metric", o.metric)->required();
  fillrad->add_option("--degree", o.degree);
  report_flag(fillrad);

  auto* fh = app.add_subcommand("fh", "Homological filling function on a grid");
  fh->add_option("--complex", o.complex)->required();
  fh->add_option("--degree", o.degree)->required();
  fh->add_option("--grid", o.grid, "start:stop:step or a comma list")->required();
  fh->add_option("--mode", o.mode)->check(CLI::IsMember({"auto", "exhaustive", "sampled"}));
  fh->add_option("--samples", o.samples)->check(CLI::PositiveNumber);
  fh->add_option("--seed", o.seed);
  report_flag(fh);

  auto* bound = app.add_subcommand("bound", "Evaluate the cubical and simplicial filling bounds");
  bound->add_option("--n", o.n)->required();
  bound->add_option("--p", o.p)->required();
  bound->add_option("--fillrad", o.fillrad)->required();
  bound->add_option("--tables", o.tables, "fh report(s) or table list");
  report_flag(bound);

  auto* starfish = app.add_subcommand("starfish", "Starfish surface, tripod and hexapod sweepouts, audit");
  starfish->add_option("--leg", o.leg);
  starfish->add_option("--radius", o.radius);
  starfish->add_option("--resolution", o.resolution);
  starfish->add_option("--levels", o.levels);
  starfish->add_option("--tolerance", o.tolerance);
  report_flag(starfish);

  auto* audit = app.add_subcommand("audit", "Audit the filling radius inequalities");
  audit->add_option("--metric", o.metric)->required();
  audit->add_option("--bundle", o.bundle, "sweep or starfish report with measurements");
  audit->add_option("--degree", o.degree);
  audit->add_option("--tolerance", o.tolerance);
  report_flag(audit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    ReportBuilder r;
    const int threads = thread_cap();
    const auto start = std::chrono::steady_clock::now();
    int code = kExitOk;
    CLI::App* sub = app.get_subcommands().front();
    r.command = sub->get_name();
    if (sub == decompose) {
      code = run_decompose(o, r);
    } else if (sub == validate) {
      code = run_validate(o, r);
    } else if (sub == sweep) {
      code = run_sweep(o, r);
    } else if (sub == fillrad) {
      code = run_fillrad(o, r);
    } else if (sub == fh) {
      code = run_fh(o, r);
    } else if (sub == bound) {
      code = run_bound(o, r);
    } else if (sub == starfish) {
      code = run_starfish(o, r);
    } else {
      code = run_audit(o, r);
    }
    r.arguments["threads"] = threads;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_report(r.to_json(), o.report);
    if (!o.report.empty() && o.report != "-") std::cout << r.command << ": " << r.status << "\n";
    return code;
  } catch (const SubdivisionRequiredError& e) {
    std::cerr << "sweepout-forge: subdivision required: " << e.what() << "\n";
  } catch (const InputError& e) {
    std::cerr << "sweepout-forge: input error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "sweepout-forge: error: " << e.what() << "\n";
  }
  return kExitInput;
}
