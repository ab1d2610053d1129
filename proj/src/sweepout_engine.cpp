#include "sweepout/sweepout_engine.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace sweepout {

namespace {

using Span = std::pair<int, int>;

int side_of_facet(const AxisGrid& grid, int facet) { return facet % 2 == 0 ? 0 : grid.size() - 1; }

// Image of a chart cell lying on facet_a under the identification.
CubicalCell map_facet_cell(const Identification& id, const std::vector<AxisGrid>& ga,
                           const std::vector<AxisGrid>& gb, const CubicalCell& cell) {
  const int d = static_cast<int>(ga.size());
  const int axis_a = id.facet_a / 2;
  const int axis_b = id.facet_b / 2;
  CubicalCell image;
  image.chart = id.chart_b;
  image.spans.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    if (i == axis_a) continue;
    const auto ui = static_cast<std::size_t>(i);
    auto [lo, hi] = cell.spans[ui];
    const int m = ga[ui].size();
    image.spans[static_cast<std::size_t>(id.perm[ui])] = id.signs[ui] == 1 ? Span{lo, hi} : Span{m - 1 - hi, m - 1 - lo};
  }
  const int sb = side_of_facet(gb[static_cast<std::size_t>(axis_b)], id.facet_b);
  image.spans[static_cast<std::size_t>(axis_b)] = {sb, sb};
  return image;
}

Identification inverse_of(const Identification& id) {
  Identification inv;
  inv.chart_a = id.chart_b;
  inv.facet_a = id.facet_b;
  inv.chart_b = id.chart_a;
  inv.facet_b = id.facet_a;
  inv.perm.assign(id.perm.size(), 0);
  inv.signs.assign(id.signs.size(), 1);
  for (std::size_t i = 0; i < id.perm.size(); ++i) {
    inv.perm[static_cast<std::size_t>(id.perm[i])] = static_cast<int>(i);
    inv.signs[static_cast<std::size_t>(id.perm[i])] = id.signs[i];
  }
  return inv;
}

// Copies cells across identified facets until both sides of every
// identification carry the same cells. Pieces of N and Q that reach a glued
// facet only from one side (along ridges of the boundary) need this before
// glue() accepts the facets.
void saturate_identified_facets(std::vector<Chart>& charts, const std::vector<Identification>& identifications) {
  std::vector<std::set<CubicalCell>> cells(charts.size());
  for (std::size_t c = 0; c < charts.size(); ++c) {
    for (auto cell : charts[c].cells) {
      cell.chart = static_cast<int>(c);
      cells[c].insert(cell);
    }
  }
  std::vector<Identification> both;
  for (const auto& id : identifications) {
    both.push_back(id);
    both.push_back(inverse_of(id));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& id : both) {
      const auto ca = static_cast<std::size_t>(id.chart_a);
      const auto cb = static_cast<std::size_t>(id.chart_b);
      const auto axis = static_cast<std::size_t>(id.facet_a / 2);
      const int sa = side_of_facet(charts[ca].grids[axis], id.facet_a);
      std::vector<CubicalCell> added;
      for (const auto& cell : cells[ca]) {
        if (cell.spans[axis] != Span{sa, sa}) continue;
        auto image = map_facet_cell(id, charts[ca].grids, charts[cb].grids, cell);
        if (!cells[cb].count(image)) added.push_back(std::move(image));
      }
      if (added.empty()) continue;
      changed = true;
      for (auto& c : close_under_faces(std::move(added))) {
        c.chart = static_cast<int>(cb);
        cells[cb].insert(std::move(c));
      }
    }
  }
  for (std::size_t c = 0; c < charts.size(); ++c) charts[c].cells.assign(cells[c].begin(), cells[c].end());
}

// Cells of dimension n+1 charts with one axis frozen at `index` inserted at `axis`.
std::vector<CubicalCell> with_axis(const std::vector<CubicalCell>& cells, int axis, Span span) {
  std::vector<CubicalCell> out;
  out.reserve(cells.size());
  for (auto c : cells) {
    c.spans.insert(c.spans.begin() + axis, span);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<CubicalCell> halve_indices(std::vector<CubicalCell> cells) {
  for (auto& c : cells)
    for (auto& [lo, hi] : c.spans) {
      lo /= 2;
      hi /= 2;
    }
  return cells;
}

unsigned corner_bits(const std::vector<int>& corner) {
  unsigned bits = 0;
  for (std::size_t i = 0; i < corner.size(); ++i)
    if (corner[i] > 0) bits |= 1u << i;
  return bits;
}

// Collapse of a fiber point to a corner of its cube: the map mu with
// parameter e applied coordinatewise.
std::vector<int> collapse_to_corner(const std::vector<Rational>& x, const Rational& e) {
  std::vector<int> corner;
  corner.reserve(x.size());
  for (const auto& v : x) {
    if (v >= e) {
      corner.push_back(1);
    } else if (v <= -e) {
      corner.push_back(-1);
    } else {
      throw DomainError("fiber vertex does not collapse to a corner");
    }
  }
  return corner;
}

void validate_filling(const FillingInput& input) {
  const auto& P = input.P;
  if (P.charts().empty()) throw DomainError("filling: P has no cubes");
  const int d = P.dimension();
  if (d < 2) throw DomainError("filling: P must have dimension at least 2");
  for (std::size_t c = 0; c < P.charts().size(); ++c) {
    const auto& chart = P.charts()[c];
    if (chart.dimension() != d) throw DomainError("filling: chart " + std::to_string(c) + " has the wrong dimension");
    for (const auto& g : chart.grids) {
      if (!(g == AxisGrid::coarse())) throw DomainError("filling: chart " + std::to_string(c) + " is not a single cube on {-1, 1}");
    }
    CubicalCell top{static_cast<int>(c), std::vector<Span>(static_cast<std::size_t>(d), Span{0, 1})};
    if (!chart.contains(top)) throw DomainError("filling: chart " + std::to_string(c) + " lacks its top cube");
    std::set<std::size_t> seen;
    for (unsigned bits = 0; bits < (1u << d); ++bits) {
      if (!seen.insert(corner_vertex(P, static_cast<int>(c), bits)).second) {
        throw DomainError("filling: cube " + std::to_string(c) + " has two corners glued together; subdivide P first");
      }
    }
  }
  input.metric.validate();
  if (input.vertex_images.size() != P.cell_count(0)) {
    throw DomainError("filling: expected " + std::to_string(P.cell_count(0)) + " vertex images, got " +
                      std::to_string(input.vertex_images.size()));
  }
  for (auto img : input.vertex_images) {
    if (img >= input.metric.size()) throw DomainError("filling: vertex image " + std::to_string(img) + " is not a metric point");
  }
}

struct RidgeSide {
  std::size_t facet;
  int axis;
  int side;
};

// Signed permutation between the free axes of a ridge seen from two cubes,
// matched through the vertex ids of the ridge corners.
Identification ridge_identification(const SweepoutBundle& b, const RidgeSide& r1, const RidgeSide& r2) {
  const auto& P = b.input.P;
  const int d = b.n + 1;
  const auto& f1 = b.boundary_facets[r1.facet];
  const auto& f2 = b.boundary_facets[r2.facet];
  std::vector<int> free1, free2;
  for (int i = 0; i < d; ++i) {
    if (i != f1.axis && i != r1.axis) free1.push_back(i);
    if (i != f2.axis && i != r2.axis) free2.push_back(i);
  }
  auto corner_of = [&](const BoundaryFacet& f, const RidgeSide& r, const std::vector<int>& axes, const std::vector<int>& signs) {
    std::vector<int> corner(static_cast<std::size_t>(d), 0);
    corner[static_cast<std::size_t>(f.axis)] = f.side;
    corner[static_cast<std::size_t>(r.axis)] = r.side;
    for (std::size_t i = 0; i < axes.size(); ++i) corner[static_cast<std::size_t>(axes[i])] = signs[i];
    return corner;
  };
  const std::size_t m = free1.size();
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  do {
    for (unsigned flips = 0; flips < (1u << m); ++flips) {
      bool ok = true;
      for (unsigned bits = 0; bits < (1u << m) && ok; ++bits) {
        std::vector<int> s1(m), s2(m);
        std::vector<int> target(m);
        for (std::size_t i = 0; i < m; ++i) {
          s1[i] = (bits >> i) & 1u ? 1 : -1;
          const int flip = (flips >> i) & 1u ? -1 : 1;
          s2[static_cast<std::size_t>(order[i])] = flip * s1[i];
        }
        auto c1 = corner_of(f1, r1, free1, s1);
        auto c2 = corner_of(f2, r2, free2, s2);
        ok = corner_vertex(P, f1.chart, corner_bits(c1)) == corner_vertex(P, f2.chart, corner_bits(c2));
      }
      if (!ok) continue;
      Identification id;
      id.chart_a = static_cast<int>(b.cube_count + r1.facet);
      id.facet_a = 2 * r1.axis + (r1.side > 0 ? 1 : 0);
      id.chart_b = static_cast<int>(b.cube_count + r2.facet);
      id.facet_b = 2 * r2.axis + (r2.side > 0 ? 1 : 0);
      id.perm.assign(static_cast<std::size_t>(d), 0);
      id.signs.assign(static_cast<std::size_t>(d), 1);
      id.perm[static_cast<std::size_t>(r1.axis)] = r2.axis;
      id.perm[static_cast<std::size_t>(f1.axis)] = f2.axis;
      for (std::size_t i = 0; i < m; ++i) {
        id.perm[static_cast<std::size_t>(free1[i])] = free2[static_cast<std::size_t>(order[i])];
        id.signs[static_cast<std::size_t>(free1[i])] = (flips >> i) & 1u ? -1 : 1;
      }
      return id;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  throw DomainError("filling: a ridge of the boundary is glued inconsistently");
}

}  // namespace

std::size_t corner_vertex(const GluedComplex& P, int chart, unsigned bits) {
  const int d = P.charts().at(static_cast<std::size_t>(chart)).dimension();
  CubicalCell v{chart, {}};
  for (int i = 0; i < d; ++i) {
    const int s = (bits >> i) & 1u ? 1 : 0;
    v.spans.push_back({s, s});
  }
  return P.require(v).id;
}

std::vector<std::size_t> vertex_images_from_corners(const GluedComplex& P,
                                                    const std::vector<std::vector<std::size_t>>& per_chart) {
  if (per_chart.size() != P.charts().size()) throw DomainError("vertex images: one list per cube expected");
  std::vector<std::optional<std::size_t>> images(P.cell_count(0));
  for (std::size_t c = 0; c < per_chart.size(); ++c) {
    const int d = P.charts()[c].dimension();
    if (per_chart[c].size() != (std::size_t{1} << d)) throw DomainError("vertex images: cube " + std::to_string(c) + " needs 2^dim corners");
    for (unsigned bits = 0; bits < per_chart[c].size(); ++bits) {
      auto v = corner_vertex(P, static_cast<int>(c), bits);
      if (images[v] && *images[v] != per_chart[c][bits]) {
        throw DomainError("vertex images: glued corners of cube " + std::to_string(c) + " disagree");
      }
      images[v] = per_chart[c][bits];
    }
  }
  std::vector<std::size_t> out;
  for (auto& img : images) {
    if (!img) throw DomainError("vertex images: a vertex has no image");
    out.push_back(*img);
  }
  return out;
}

std::size_t SweepoutBundle::corner_image(int chart, const std::vector<int>& corner) const {
  return input.vertex_images[corner_vertex(input.P, chart, corner_bits(corner))];
}

Rational SweepoutBundle::corner_distance(int chart, const std::vector<int>& u, const std::vector<int>& v) const {
  return input.metric(corner_image(chart, u), corner_image(chart, v));
}

int SweepoutBundle::n_orientation(const CubicalCell& top_cell) const {
  if (!n_report.orientable) throw DomainError("N is not orientable");
  auto ref = N.require(top_cell);
  return n_report.orientation.at(ref.id) * ref.orientation;
}

PointKey SweepoutBundle::h(int chart, const std::vector<Rational>& x) const {
  if (x.size() != static_cast<std::size_t>(n + 1)) throw DomainError("h: point has the wrong dimension");
  if (in_Y(x, 1, eps)) return T.canonical_point(chart, theta(x, 1, eps));
  for (std::size_t f = 0; f < boundary_facets.size(); ++f) {
    const auto& F = boundary_facets[f];
    if (F.chart != chart || x[static_cast<std::size_t>(F.axis)] != F.side) continue;
    std::vector<Rational> tangent;
    for (int i = 0; i <= n; ++i)
      if (i != F.axis) tangent.push_back(x[static_cast<std::size_t>(i)]);
    std::vector<Rational> sorted;
    for (const auto& v : tangent) sorted.push_back(abs(v));
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() < 2 || sorted[1] > eps) continue;
    const Rational s = sorted[1];
    std::vector<Rational> t(static_cast<std::size_t>(n + 1));
    std::size_t k = 0;
    for (int i = 0; i <= n; ++i) {
      if (i == F.axis) {
        t[static_cast<std::size_t>(i)] = s;
        continue;
      }
      t[static_cast<std::size_t>(i)] = s == 0 ? tangent[k] : lambda(tangent[k], s);
      ++k;
    }
    return T.canonical_point(static_cast<int>(cube_count + f), t);
  }
  throw DomainError("h: point is not on N");
}

SweepoutBundle build_bundle(const FillingInput& input) {
  validate_filling(input);
  SweepoutBundle b;
  b.input = input;
  const auto& P = b.input.P;
  const int d = P.dimension();
  b.n = d - 1;
  b.eps = Rational(1, 2);
  b.cube_count = P.charts().size();
  const int n = b.n;

  auto p_report = check_pseudomanifold(P);
  if (!p_report.is_pseudomanifold()) throw DomainError("filling: P is not a pseudomanifold");
  if (p_report.closed()) throw DomainError("filling: P has empty boundary");

  for (const auto& [id, coeff] : p_report.boundary.coeffs) {
    const auto& cell = P.representative(n, id);
    BoundaryFacet f;
    f.chart = cell.chart;
    f.p_cell = id;
    for (int i = 0; i < d; ++i) {
      auto [lo, hi] = cell.spans[static_cast<std::size_t>(i)];
      if (lo == hi) {
        f.axis = i;
        f.side = lo == 0 ? -1 : 1;
      }
    }
    b.boundary_facets.push_back(f);
  }
  std::sort(b.boundary_facets.begin(), b.boundary_facets.end(), [](const BoundaryFacet& a, const BoundaryFacet& c) {
    return std::tie(a.chart, a.axis, a.side) < std::tie(c.chart, c.axis, c.side);
  });
  std::vector<int> per_cube(b.cube_count, 0);
  for (const auto& f : b.boundary_facets) ++per_cube[static_cast<std::size_t>(f.chart)];
  for (std::size_t c = 0; c < b.cube_count; ++c) {
    if (per_cube[c] <= 1) continue;
    std::string msg = "cube " + std::to_string(c) + " of P has " + std::to_string(per_cube[c]) +
                      " faces on the boundary; subdivide P so that each cube has at most one";
    if (input.strict_single_boundary_face) throw SubdivisionRequiredError(msg);
    b.notes.push_back(msg + " (accepted: the construction does not rely on it)");
  }

  // Edge images.
  b.edge_lengths.resize(P.cell_count(1));
  b.delta = 0;
  for (std::size_t e = 0; e < P.cell_count(1); ++e) {
    const auto& vs = P.chains().vertices(1, e);
    b.edge_lengths[e] = b.input.metric(b.input.vertex_images[vs.front()], b.input.vertex_images[vs.back()]);
    b.delta = std::max(b.delta, b.edge_lengths[e]);
  }

  const std::vector<AxisGrid> eps_grids(static_cast<std::size_t>(d), AxisGrid::standard(b.eps));
  const std::vector<AxisGrid> unit_grids(static_cast<std::size_t>(d), AxisGrid::unit());
  const auto y_cells = decomposition_cells(n, 1, Piece::Y);
  const auto x1_cells = decomposition_cells(n, 1, Piece::X1);
  const auto z_cells = halve_indices(decomposition_cells(n, 1, Piece::Z));
  std::vector<CubicalCell> x2_facet, eps_facet, z_facet;
  if (n >= 2) {
    x2_facet = decomposition_cells(n - 1, 1, Piece::X2);
    z_facet = halve_indices(decomposition_cells(n - 1, 1, Piece::Z));
  }
  eps_facet = eps_grid_cells(n);

  std::vector<Chart> n_charts, q_charts, t_charts;
  for (std::size_t c = 0; c < b.cube_count; ++c) {
    std::vector<CubicalCell> nc = y_cells;
    std::vector<CubicalCell> qc = x1_cells;
    for (const auto& f : b.boundary_facets) {
      if (f.chart != static_cast<int>(c)) continue;
      const Span fixed = f.side < 0 ? Span{0, 0} : Span{4, 4};
      auto x2 = with_axis(x2_facet, f.axis, fixed);
      nc.insert(nc.end(), x2.begin(), x2.end());
      auto all = with_axis(eps_facet, f.axis, fixed);
      qc.insert(qc.end(), all.begin(), all.end());
    }
    n_charts.push_back(Chart::from_cells(eps_grids, nc));
    q_charts.push_back(Chart::from_cells(eps_grids, qc));
    t_charts.push_back(Chart::from_cells(unit_grids, z_cells));
  }
  std::vector<Identification> t_idents = P.identifications();
  if (n >= 2) {
    const AxisGrid level({Rational(0), Rational(1, 2)});
    for (std::size_t fi = 0; fi < b.boundary_facets.size(); ++fi) {
      const auto& f = b.boundary_facets[fi];
      auto grids = unit_grids;
      grids[static_cast<std::size_t>(f.axis)] = level;
      t_charts.push_back(Chart::from_cells(grids, with_axis(z_facet, f.axis, Span{0, 1})));
      Identification id;
      id.chart_a = static_cast<int>(b.cube_count + fi);
      id.facet_a = 2 * f.axis + 1;
      id.chart_b = f.chart;
      id.facet_b = 2 * f.axis + (f.side > 0 ? 1 : 0);
      id.perm.resize(static_cast<std::size_t>(d));
      std::iota(id.perm.begin(), id.perm.end(), 0);
      id.signs.assign(static_cast<std::size_t>(d), 1);
      t_idents.push_back(id);
    }
    // Pieces over adjacent boundary facets meet along their common ridge.
    std::map<std::size_t, std::vector<RidgeSide>> ridges;
    for (std::size_t fi = 0; fi < b.boundary_facets.size(); ++fi) {
      const auto& f = b.boundary_facets[fi];
      for (int axis = 0; axis < d; ++axis) {
        if (axis == f.axis) continue;
        for (int side : {-1, 1}) {
          CubicalCell r{f.chart, std::vector<Span>(static_cast<std::size_t>(d), Span{0, 1})};
          r.spans[static_cast<std::size_t>(f.axis)] = f.side < 0 ? Span{0, 0} : Span{1, 1};
          r.spans[static_cast<std::size_t>(axis)] = side < 0 ? Span{0, 0} : Span{1, 1};
          ridges[P.require(r).id].push_back({fi, axis, side});
        }
      }
    }
    for (const auto& [rid, sides] : ridges) {
      if (sides.size() != 2) {
        throw DomainError("filling: the boundary of P is not a closed pseudomanifold (a ridge lies on " +
                          std::to_string(sides.size()) + " boundary faces)");
      }
      t_idents.push_back(ridge_identification(b, sides[0], sides[1]));
    }
  } else {
    b.notes.push_back("n = 1: the boundary pieces of N and T are empty");
  }

  saturate_identified_facets(n_charts, P.identifications());
  saturate_identified_facets(q_charts, P.identifications());
  saturate_identified_facets(t_charts, t_idents);
  b.N = glue(std::move(n_charts), P.identifications());
  b.Q = glue(std::move(q_charts), P.identifications());
  b.T = glue(std::move(t_charts), t_idents);

  b.n_report = check_pseudomanifold(b.N);
  if (!b.n_report.is_pseudomanifold() || !b.n_report.closed()) {
    throw DomainError("internal: N is not a closed pseudomanifold");
  }
  if (!b.n_report.orientable) b.notes.push_back("N is not orientable; loop orientations are unavailable");
  return b;
}

namespace {

struct KeyUnionFind {
  std::map<PointKey, PointKey> parent;
  PointKey find(const PointKey& k) {
    auto it = parent.find(k);
    if (it == parent.end()) {
      parent.emplace(k, k);
      return k;
    }
    if (it->second == k) return k;
    PointKey root = find(it->second);
    parent[k] = root;
    return root;
  }
  void unite(const PointKey& a, const PointKey& b) {
    auto ra = find(a);
    auto rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
};

}  // namespace

void summarize_fiber(const SweepoutBundle& b, FiberRecord& r, const std::vector<std::vector<int>>& vertex_corners,
                    int chart) {
  KeyUnionFind uf;
  for (const auto& v : r.vertices) uf.find(v);
  for (const auto& e : r.edges) uf.unite(e.from_key, e.to_key);
  std::map<PointKey, FiberComponent> comps;
  std::map<PointKey, std::size_t> vertex_count;
  std::map<PointKey, int> degree;
  for (const auto& v : r.vertices) ++vertex_count[uf.find(v)];
  for (const auto& e : r.edges) {
    auto& comp = comps[uf.find(e.from_key)];
    comp.edges.push_back(e);
    comp.length += e.length;
    ++degree[e.from_key];
    ++degree[e.to_key];
  }
  r.total_length = 0;
  r.max_component_length = 0;
  r.max_edge_length = 0;
  for (auto& [root, comp] : comps) {
    bool simple = comp.edges.size() == vertex_count[root] && comp.edges.size() >= 2;
    for (const auto& e : comp.edges) simple = simple && degree[e.from_key] == 2 && degree[e.to_key] == 2;
    comp.simple_cycle = simple;
    r.total_length += comp.length;
    r.max_component_length = std::max(r.max_component_length, comp.length);
    r.components.push_back(std::move(comp));
  }
  for (const auto& e : r.edges) r.max_edge_length = std::max(r.max_edge_length, e.length);
  for (const auto& c : vertex_corners) r.image_points.insert(b.corner_image(chart, c));
  r.image_diameter = 0;
  for (auto a : r.image_points)
    for (auto c : r.image_points) r.image_diameter = std::max(r.image_diameter, b.input.metric(a, c));
}

FiberRecord fiber_at(const SweepoutBundle& b, const TPoint& t) {
  const int n = b.n;
  const int d = n + 1;
  if (t.chart < 0 || t.chart >= static_cast<int>(b.T.charts().size())) throw DomainError("fiber: chart is not a chart of T");
  if (t.coords.size() != static_cast<std::size_t>(d)) throw DomainError("fiber: point has the wrong dimension");
  FiberRecord r;
  r.base = t;
  r.base_key = b.T.canonical_point(t.chart, t.coords);
  int chart = t.chart;
  Rational e = b.eps;
  int facet_axis = -1;
  int facet_side = 0;
  std::optional<FiberComplex> fc;
  std::vector<Rational> point_fiber;
  if (!b.is_boundary_chart(t.chart)) {
    fc = theta_fiber(t.coords, 1, b.eps);
  } else {
    const auto& F = b.facet_of_chart(t.chart);
    chart = F.chart;
    facet_axis = F.axis;
    facet_side = F.side;
    e = t.coords[static_cast<std::size_t>(F.axis)];
    if (e < 0 || e > Rational(1, 2)) throw DomainError("fiber: level outside [0, 1/2]");
    std::vector<Rational> z;
    for (int i = 0; i < d; ++i)
      if (i != F.axis) z.push_back(t.coords[static_cast<std::size_t>(i)]);
    if (!in_Z(z, 1)) throw DomainError("fiber: point is not on T");
    if (e == 0) {
      point_fiber = z;
    } else {
      fc = theta_fiber(z, 1, e);
    }
  }
  auto embed = [&](std::vector<Rational> x) {
    if (facet_axis >= 0) x.insert(x.begin() + facet_axis, Rational(facet_side));
    return x;
  };
  std::vector<std::vector<int>> corners_seen;
  if (!fc) {
    auto x = embed(point_fiber);
    r.vertices.push_back(b.N.canonical_point(chart, x));
    r.vertex_count = 1;
    r.cube_dimension = 0;
    r.cube_skeleton = true;
    std::vector<int> corner;
    for (const auto& v : x) corner.push_back(v > 0 ? 1 : (v < 0 ? -1 : 1));
    // A level-0 point has two zero coordinates and maps to the center of a
    // face; it has no edges, so only its nearest corner is recorded.
    corners_seen.push_back(corner);
    summarize_fiber(b, r, corners_seen, chart);
    return r;
  }
  const auto& cx = *fc;
  const auto& fchart = cx.complex.charts()[0];
  r.cube_dimension = cx.k;
  r.cube_skeleton = recognize_cube_skeleton(cx.complex, 1).isomorphic;
  for (std::size_t v = 0; v < cx.complex.cell_count(0); ++v) {
    auto x = embed(fchart.coordinates(cx.complex.representative(0, v)));
    corners_seen.push_back(collapse_to_corner(x, e));
    r.vertices.push_back(b.N.canonical_point(chart, x));
  }
  r.vertex_count = r.vertices.size();
  for (std::size_t id = 0; id < cx.complex.cell_count(1); ++id) {
    auto ends = corners(cx.complex.representative(1, id));
    FiberEdge edge;
    edge.chart = chart;
    edge.from = embed(fchart.coordinates(ends[0]));
    edge.to = embed(fchart.coordinates(ends[1]));
    edge.from_key = b.N.canonical_point(chart, edge.from);
    edge.to_key = b.N.canonical_point(chart, edge.to);
    std::vector<Rational> mid;
    for (std::size_t i = 0; i < edge.from.size(); ++i) mid.push_back((edge.from[i] + edge.to[i]) / 2);
    edge.mid_key = b.N.canonical_point(chart, mid);
    auto u = collapse_to_corner(edge.from, e);
    auto w = collapse_to_corner(edge.to, e);
    CubicalCell pe{chart, {}};
    for (std::size_t i = 0; i < u.size(); ++i) {
      const int lo = std::min(u[i], w[i]) > 0 ? 1 : 0;
      const int hi = std::max(u[i], w[i]) > 0 ? 1 : 0;
      pe.spans.push_back({lo, hi});
    }
    edge.p_edge = b.input.P.require(pe).id;
    edge.length = b.edge_lengths[edge.p_edge];
    r.edges.push_back(std::move(edge));
  }
  summarize_fiber(b, r, corners_seen, chart);
  return r;
}

FiberRecord fiber(const SweepoutBundle& b, int dim, std::size_t cell) {
  const auto& rep = b.T.representative(dim, cell);
  TPoint t{rep.chart, b.T.charts()[static_cast<std::size_t>(rep.chart)].barycenter(rep)};
  auto r = fiber_at(b, t);
  r.base_cell = std::pair{dim, cell};
  return r;
}

std::vector<FiberRecord> all_fibers(const SweepoutBundle& b) {
  std::vector<FiberRecord> out;
  for (int k = 0; k <= b.T.dimension(); ++k)
    for (std::size_t id = 0; id < b.T.cell_count(k); ++id) out.push_back(fiber(b, k, id));
  return out;
}

WaistBound measure_waist(const SweepoutBundle& b) {
  WaistBound w;
  w.waist_upper = 0;
  w.urysohn_upper = 0;
  Rational factor = (b.n + 1) * Rational(BigInt(1) << b.n);
  w.certified_max = factor * b.delta;
  for (const auto& f : all_fibers(b)) {
    ++w.fibers;
    w.waist_upper = std::max(w.waist_upper, f.total_length);
    w.urysohn_upper = std::max(w.urysohn_upper, Rational(f.image_diameter + f.max_edge_length));
    w.max_edges = std::max(w.max_edges, f.edges.size());
  }
  return w;
}

Rational waist_upper_bound(const SweepoutBundle& b) { return measure_waist(b).waist_upper; }

SweepoutMeasurements measurements(const WaistBound& bound) {
  SweepoutMeasurements m;
  m.waist_upper = to_double(bound.waist_upper);
  m.urysohn_upper = to_double(bound.urysohn_upper);
  m.source = "fibers of the sweepout built from the filling";
  return m;
}

ChainVector n_cycle_in_ambient(const SweepoutBundle& b) {
  ChainVector c(b.n, Ring::Z2);
  for (std::size_t id = 0; id < b.N.cell_count(b.n); ++id) c.add(b.Q.require(b.N.representative(b.n, id)).id, 1);
  return c;
}

ChainVector boundary_cycle_in_ambient(const SweepoutBundle& b) {
  ChainVector c(b.n, Ring::Z2);
  for (const auto& f : b.boundary_facets) {
    for (auto cell : eps_grid_cells(b.n)) {
      if (std::any_of(cell.spans.begin(), cell.spans.end(), [](const Span& s) { return s.first == s.second; })) continue;
      cell.spans.insert(cell.spans.begin() + f.axis, f.side < 0 ? Span{0, 0} : Span{4, 4});
      cell.chart = f.chart;
      c.add(b.Q.require(cell).id, 1);
    }
  }
  return c;
}

HomologyAudit homology_audit(const SweepoutBundle& b) { return homology_audit(b, n_cycle_in_ambient(b)); }

HomologyAudit homology_audit(const SweepoutBundle& b, const ChainVector& n_cycle) {
  HomologyAudit a;
  a.n_cycle = n_cycle;
  a.boundary_cycle = boundary_cycle_in_ambient(b);
  const auto& ambient = b.Q.chains();
  if (!boundary_of(ambient, n_cycle).empty()) {
    throw DomainError("homology audit: the chain of N is not a cycle (a top cell is missing or repeated)");
  }
  auto r = homologous(a.n_cycle, a.boundary_cycle, ambient);
  a.homologous = r.homologous;
  a.witness = r.witness;
  if (r.homologous) {
    a.witness_verified = boundary_of(ambient, a.witness) == a.n_cycle - a.boundary_cycle;
    a.note = "N and the boundary of P bound the witness chain in the tube Q together with the boundary";
  } else {
    a.note = r.note;
  }
  return a;
}

}  // namespace sweepout
