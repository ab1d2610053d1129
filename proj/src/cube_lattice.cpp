#include "sweepout/cube_lattice.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace sweepout {

GluingError::GluingError(std::size_t index, int chart_a, int facet_a, int chart_b, int facet_b,
                         const std::string& reason)
    : std::runtime_error("gluing error in identification " + std::to_string(index) + " (chart " +
                         std::to_string(chart_a) + " facet " + std::to_string(facet_a) + " -> chart " +
                         std::to_string(chart_b) + " facet " + std::to_string(facet_b) + "): " + reason),
      index(index),
      chart_a(chart_a),
      facet_a(facet_a),
      chart_b(chart_b),
      facet_b(facet_b) {}

std::string ring_name(Ring ring) { return ring == Ring::Z ? "Z" : "Z2"; }

// ---------------------------------------------------------------- AxisGrid

AxisGrid::AxisGrid(std::vector<Rational> points) : points_(std::move(points)) {
  if (points_.empty()) throw DomainError("axis grid needs at least one breakpoint");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i - 1] < points_[i])) throw DomainError("axis grid breakpoints must be strictly increasing");
  }
}

AxisGrid AxisGrid::standard(const Rational& eps) {
  if (!(eps > 0 && eps < 1)) throw DomainError("epsilon must lie strictly between 0 and 1");
  return AxisGrid({Rational(-1), Rational(-eps), Rational(0), eps, Rational(1)});
}

AxisGrid AxisGrid::unit() { return AxisGrid({Rational(-1), Rational(0), Rational(1)}); }

AxisGrid AxisGrid::coarse() { return AxisGrid({Rational(-1), Rational(1)}); }

std::optional<int> AxisGrid::index_of(const Rational& value) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), value);
  if (it == points_.end() || *it != value) return std::nullopt;
  return static_cast<int>(it - points_.begin());
}

bool AxisGrid::is_symmetric() const { return reflected() == *this; }

bool AxisGrid::contains_standard_points() const {
  return index_of(Rational(-1)) && index_of(Rational(0)) && index_of(Rational(1));
}

AxisGrid AxisGrid::reflected() const {
  std::vector<Rational> r;
  r.reserve(points_.size());
  for (auto it = points_.rbegin(); it != points_.rend(); ++it) r.push_back(-*it);
  return AxisGrid(std::move(r));
}

// ------------------------------------------------------------ CubicalCell

int CubicalCell::dimension() const {
  int d = 0;
  for (const auto& [lo, hi] : spans) d += lo != hi ? 1 : 0;
  return d;
}

std::vector<int> CubicalCell::free_axes() const {
  std::vector<int> axes;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].first != spans[i].second) axes.push_back(static_cast<int>(i));
  }
  return axes;
}

std::string to_string(const CubicalCell& cell) {
  std::ostringstream out;
  out << "c" << cell.chart << ":";
  for (std::size_t i = 0; i < cell.spans.size(); ++i) {
    if (i) out << "x";
    const auto& [lo, hi] = cell.spans[i];
    if (lo == hi) {
      out << "{" << lo << "}";
    } else {
      out << "[" << lo << "," << hi << "]";
    }
  }
  return out.str();
}

std::vector<CubicalCell> enumerate_faces(const CubicalCell& cell, int codim) {
  const auto axes = cell.free_axes();
  const int dim = static_cast<int>(axes.size());
  if (codim < 0 || codim > dim) {
    throw DomainError("enumerate_faces: codimension " + std::to_string(codim) + " exceeds cell dimension " +
                      std::to_string(dim));
  }
  std::vector<CubicalCell> faces;
  // choose which free axes collapse (bitmask with codim bits) and to which end
  for (unsigned mask = 0; mask < (1u << dim); ++mask) {
    if (std::popcount(mask) != codim) continue;
    for (unsigned ends = 0; ends < (1u << codim); ++ends) {
      CubicalCell face = cell;
      int slot = 0;
      for (int j = 0; j < dim; ++j) {
        if (!(mask & (1u << j))) continue;
        auto& span = face.spans[static_cast<std::size_t>(axes[static_cast<std::size_t>(j)])];
        int v = (ends & (1u << slot)) ? span.second : span.first;
        span = {v, v};
        ++slot;
      }
      faces.push_back(std::move(face));
    }
  }
  std::sort(faces.begin(), faces.end());
  return faces;
}

std::vector<SignedFace> signed_facets(const CubicalCell& cell) {
  std::vector<SignedFace> out;
  int before = 0;
  for (std::size_t i = 0; i < cell.spans.size(); ++i) {
    const auto [lo, hi] = cell.spans[i];
    if (lo == hi) continue;
    const int parity = (before % 2 == 0) ? 1 : -1;
    CubicalCell low = cell;
    low.spans[i] = {lo, lo};
    CubicalCell high = cell;
    high.spans[i] = {hi, hi};
    out.push_back({std::move(low), -parity});
    out.push_back({std::move(high), parity});
    ++before;
  }
  return out;
}

std::vector<CubicalCell> corners(const CubicalCell& cell) {
  const auto axes = cell.free_axes();
  std::vector<CubicalCell> out;
  out.reserve(std::size_t{1} << axes.size());
  for (unsigned bits = 0; bits < (1u << axes.size()); ++bits) {
    CubicalCell v = cell;
    for (std::size_t j = 0; j < axes.size(); ++j) {
      auto& span = v.spans[static_cast<std::size_t>(axes[j])];
      int value = (bits & (1u << j)) ? span.second : span.first;
      span = {value, value};
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<CubicalCell> close_under_faces(std::vector<CubicalCell> cells) {
  std::set<CubicalCell> seen(cells.begin(), cells.end());
  std::vector<CubicalCell> work(seen.begin(), seen.end());
  while (!work.empty()) {
    CubicalCell c = std::move(work.back());
    work.pop_back();
    for (auto& f : signed_facets(c)) {
      if (seen.insert(f.face).second) work.push_back(std::move(f.face));
    }
  }
  return {seen.begin(), seen.end()};
}

// ------------------------------------------------------------------ Chart

bool Chart::contains(const CubicalCell& cell) const {
  CubicalCell probe = cell;
  auto it = std::lower_bound(cells.begin(), cells.end(), probe,
                             [](const CubicalCell& a, const CubicalCell& b) { return a.spans < b.spans; });
  return it != cells.end() && it->spans == cell.spans;
}

std::vector<Rational> Chart::coordinates(const CubicalCell& vertex) const {
  std::vector<Rational> x;
  x.reserve(vertex.spans.size());
  for (std::size_t i = 0; i < vertex.spans.size(); ++i) {
    x.push_back(grids[i][vertex.spans[i].first]);
  }
  return x;
}

std::vector<Rational> Chart::barycenter(const CubicalCell& cell) const {
  std::vector<Rational> x;
  x.reserve(cell.spans.size());
  for (std::size_t i = 0; i < cell.spans.size(); ++i) {
    x.push_back((grids[i][cell.spans[i].first] + grids[i][cell.spans[i].second]) / 2);
  }
  return x;
}

Chart Chart::single_cube(std::vector<AxisGrid> grids) {
  CubicalCell top;
  for (const auto& g : grids) top.spans.push_back({0, g.size() - 1});
  return from_cells(std::move(grids), {top});
}

Chart Chart::subdivided(std::vector<AxisGrid> grids) {
  std::vector<std::vector<std::pair<int, int>>> options;
  for (const auto& g : grids) {
    std::vector<std::pair<int, int>> o;
    for (int i = 0; i < g.size(); ++i) {
      o.push_back({i, i});
      if (i + 1 < g.size()) o.push_back({i, i + 1});
    }
    options.push_back(std::move(o));
  }
  Chart chart;
  chart.grids = std::move(grids);
  std::vector<std::size_t> idx(options.size(), 0);
  while (true) {
    CubicalCell c;
    for (std::size_t i = 0; i < options.size(); ++i) c.spans.push_back(options[i][idx[i]]);
    chart.cells.push_back(std::move(c));
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == options[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  std::sort(chart.cells.begin(), chart.cells.end());
  return chart;
}

Chart Chart::from_cells(std::vector<AxisGrid> grids, std::vector<CubicalCell> cells) {
  for (auto& c : cells) c.chart = 0;
  Chart chart;
  chart.grids = std::move(grids);
  chart.cells = close_under_faces(std::move(cells));
  return chart;
}

// ----------------------------------------------------------- ChainComplex

ChainComplex::ChainComplex(int top_dimension)
    : counts_(static_cast<std::size_t>(top_dimension + 1), 0),
      boundary_(static_cast<std::size_t>(top_dimension + 1)),
      vertices_(static_cast<std::size_t>(top_dimension + 1)) {}

std::size_t ChainComplex::count(int k) const {
  if (k < 0 || k >= static_cast<int>(counts_.size())) return 0;
  return counts_[static_cast<std::size_t>(k)];
}

std::size_t ChainComplex::total_cells() const { return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0}); }

const std::vector<Incidence>& ChainComplex::boundary(int k, std::size_t cell) const {
  return boundary_.at(static_cast<std::size_t>(k)).at(cell);
}

std::map<std::size_t, long long> ChainComplex::boundary_coefficients(int k, std::size_t cell, Ring ring) const {
  std::map<std::size_t, long long> merged;
  for (const auto& inc : boundary(k, cell)) merged[inc.face] += inc.coeff;
  for (auto it = merged.begin(); it != merged.end();) {
    if (ring == Ring::Z2) it->second = ((it->second % 2) + 2) % 2;
    if (it->second == 0) {
      it = merged.erase(it);
    } else {
      ++it;
    }
  }
  return merged;
}

const std::vector<std::size_t>& ChainComplex::vertices(int k, std::size_t cell) const {
  return vertices_.at(static_cast<std::size_t>(k)).at(cell);
}

std::size_t ChainComplex::add_cell(int k, std::vector<Incidence> boundary, std::vector<std::size_t> vertices) {
  if (k < 0) throw DomainError("negative cell dimension");
  const auto uk = static_cast<std::size_t>(k);
  if (uk >= counts_.size()) {
    counts_.resize(uk + 1, 0);
    boundary_.resize(uk + 1);
    vertices_.resize(uk + 1);
  }
  for (const auto& inc : boundary) {
    if (k == 0 || inc.face >= counts_[uk - 1]) throw DomainError("boundary refers to a missing face");
  }
  if (k == 0 && vertices.empty()) vertices.push_back(counts_[0]);
  boundary_[uk].push_back(std::move(boundary));
  vertices_[uk].push_back(std::move(vertices));
  return counts_[uk]++;
}

ChainComplex ChainComplex::from_simplices(const std::vector<std::vector<std::size_t>>& simplices) {
  std::vector<std::set<std::vector<std::size_t>>> by_dim;
  for (auto s : simplices) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    const std::size_t m = s.size();
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      std::vector<std::size_t> face;
      for (std::size_t i = 0; i < m; ++i) {
        if (mask & (1u << i)) face.push_back(s[i]);
      }
      if (by_dim.size() < face.size()) by_dim.resize(face.size());
      by_dim[face.size() - 1].insert(std::move(face));
    }
  }
  ChainComplex complex(static_cast<int>(by_dim.size()) - 1);
  std::vector<std::map<std::vector<std::size_t>, std::size_t>> ids(by_dim.size());
  for (std::size_t d = 0; d < by_dim.size(); ++d) {
    for (const auto& s : by_dim[d]) {
      std::vector<Incidence> bd;
      std::vector<std::size_t> verts;
      if (d > 0) {
        for (auto v : s) verts.push_back(ids[0].at({v}));
        for (std::size_t i = 0; i < s.size(); ++i) {
          std::vector<std::size_t> face = s;
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
          bd.push_back({ids[d - 1].at(face), (i % 2 == 0) ? 1 : -1});
        }
      }
      if (d == 0) {
        ids[0][s] = complex.count(0);
        complex.add_cell(0, {}, {});
      } else {
        ids[d][s] = complex.add_cell(static_cast<int>(d), std::move(bd), std::move(verts));
      }
    }
  }
  return complex;
}

// ------------------------------------------------------------ ChainVector

void ChainVector::add(std::size_t cell, long long coeff) {
  long long& slot = coeffs[cell];
  slot += coeff;
  if (ring == Ring::Z2) slot = ((slot % 2) + 2) % 2;
  if (slot == 0) coeffs.erase(cell);
}

ChainVector ChainVector::operator+(const ChainVector& other) const {
  if (other.degree != degree || other.ring != ring) throw DomainError("chain degree or ring mismatch");
  ChainVector out = *this;
  for (const auto& [c, v] : other.coeffs) out.add(c, v);
  return out;
}

ChainVector ChainVector::negated() const {
  ChainVector out(degree, ring);
  for (const auto& [c, v] : coeffs) out.add(c, -v);
  return out;
}

ChainVector ChainVector::operator-(const ChainVector& other) const { return *this + other.negated(); }

bool ChainVector::operator==(const ChainVector& other) const {
  return degree == other.degree && ring == other.ring && coeffs == other.coeffs;
}

ChainVector boundary_of(const ChainComplex& complex, const ChainVector& chain) {
  ChainVector out(chain.degree - 1, chain.ring);
  if (chain.degree == 0) return out;
  for (const auto& [cell, coeff] : chain.coeffs) {
    for (const auto& [face, c] : complex.boundary_coefficients(chain.degree, cell, chain.ring)) {
      out.add(face, coeff * c);
    }
  }
  return out;
}

SparseMatrix boundary_matrix(const ChainComplex& complex, int k, Ring ring) {
  SparseMatrix m;
  m.rows = k > 0 ? complex.count(k - 1) : 0;
  m.cols = complex.count(k);
  m.columns.resize(m.cols);
  if (k > 0) {
    for (std::size_t c = 0; c < m.cols; ++c) m.columns[c] = complex.boundary_coefficients(k, c, ring);
  }
  return m;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b, Ring ring) {
  if (a.cols != b.rows) throw DomainError("matrix shape mismatch");
  SparseMatrix out;
  out.rows = a.rows;
  out.cols = b.cols;
  out.columns.resize(b.cols);
  for (std::size_t j = 0; j < b.cols; ++j) {
    auto& col = out.columns[j];
    for (const auto& [mid, vb] : b.columns[j]) {
      for (const auto& [row, va] : a.columns[mid]) col[row] += va * vb;
    }
    for (auto it = col.begin(); it != col.end();) {
      if (ring == Ring::Z2) it->second = ((it->second % 2) + 2) % 2;
      it = it->second == 0 ? col.erase(it) : std::next(it);
    }
  }
  return out;
}

std::string to_string(const PointKey& key) {
  std::string s = "c" + std::to_string(key.chart) + "(";
  for (std::size_t i = 0; i < key.coords.size(); ++i) {
    if (i) s += ",";
    s += format_rational(key.coords[i]);
  }
  return s + ")";
}

// ----------------------------------------------------------------- gluing

namespace {

struct ParityUnionFind {
  std::vector<std::size_t> parent;
  std::vector<int> parity;  // orientation relative to parent

  explicit ParityUnionFind(std::size_t n) : parent(n), parity(n, 1) { std::iota(parent.begin(), parent.end(), 0); }

  std::pair<std::size_t, int> find(std::size_t x) {
    int acc = 1;
    std::size_t r = x;
    while (parent[r] != r) {
      acc *= parity[r];
      r = parent[r];
    }
    // path compression
    int along = acc;
    while (parent[x] != x) {
      std::size_t next = parent[x];
      int p = parity[x];
      parent[x] = r;
      parity[x] = along;
      along *= p;
      x = next;
    }
    return {r, acc};
  }

  // returns false on an orientation conflict inside one class
  bool unite(std::size_t x, std::size_t y, int sign) {
    auto [rx, px] = find(x);
    auto [ry, py] = find(y);
    if (rx == ry) return px == sign * py;
    if (rx < ry) {
      parent[ry] = rx;
      parity[ry] = py * sign * px;
    } else {
      parent[rx] = ry;
      parity[rx] = px * sign * py;
    }
    return true;
  }
};

int permutation_sign(std::vector<int> values) {
  int sign = 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      if (values[i] > values[j]) sign = -sign;
    }
  }
  return sign;
}

int side_index(const AxisGrid& g, int facet) { return (facet % 2) ? g.size() - 1 : 0; }

}  // namespace

std::vector<Rational> apply_identification(const Identification& ident, const std::vector<AxisGrid>& target_grids,
                                           const std::vector<Rational>& coords) {
  const int axis_a = ident.facet_a / 2;
  const int axis_b = ident.facet_b / 2;
  std::vector<Rational> y(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (static_cast<int>(i) == axis_a) continue;
    y[static_cast<std::size_t>(ident.perm[i])] = ident.signs[i] * coords[i];
  }
  const auto& g = target_grids[static_cast<std::size_t>(axis_b)];
  y[static_cast<std::size_t>(axis_b)] = g[side_index(g, ident.facet_b)];
  return y;
}

namespace {

std::vector<Rational> apply_inverse(const Identification& ident, const std::vector<AxisGrid>& source_grids,
                                    const std::vector<Rational>& y) {
  const int axis_a = ident.facet_a / 2;
  std::vector<Rational> x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (static_cast<int>(i) == axis_a) continue;
    x[i] = ident.signs[i] * y[static_cast<std::size_t>(ident.perm[i])];
  }
  const auto& g = source_grids[static_cast<std::size_t>(axis_a)];
  x[static_cast<std::size_t>(axis_a)] = g[side_index(g, ident.facet_a)];
  return x;
}

bool on_facet(const std::vector<AxisGrid>& grids, int facet, const std::vector<Rational>& x) {
  const auto axis = static_cast<std::size_t>(facet / 2);
  return x[axis] == grids[axis][side_index(grids[axis], facet)];
}

}  // namespace

GluedComplex glue(std::vector<Chart> charts, std::vector<Identification> identifications) {
  GluedComplex out;
  // normalize charts
  for (std::size_t c = 0; c < charts.size(); ++c) {
    auto& chart = charts[c];
    for (auto& cell : chart.cells) {
      if (cell.spans.size() != chart.grids.size()) {
        throw DomainError("chart " + std::to_string(c) + ": cell arity differs from chart dimension");
      }
      for (std::size_t i = 0; i < cell.spans.size(); ++i) {
        auto [lo, hi] = cell.spans[i];
        if (lo < 0 || hi < lo || hi >= chart.grids[i].size()) {
          throw DomainError("chart " + std::to_string(c) + ": span off the grid in " + to_string(cell));
        }
      }
      cell.chart = static_cast<int>(c);
    }
    chart.cells = close_under_faces(std::move(chart.cells));
  }

  std::vector<std::size_t> offset(charts.size() + 1, 0);
  for (std::size_t c = 0; c < charts.size(); ++c) offset[c + 1] = offset[c] + charts[c].cells.size();
  auto global_index = [&](const CubicalCell& cell) -> std::optional<std::size_t> {
    const auto& cells = charts[static_cast<std::size_t>(cell.chart)].cells;
    auto it = std::lower_bound(cells.begin(), cells.end(), cell);
    if (it == cells.end() || *it != cell) return std::nullopt;
    return offset[static_cast<std::size_t>(cell.chart)] + static_cast<std::size_t>(it - cells.begin());
  };

  ParityUnionFind uf(offset.back());
  for (std::size_t k = 0; k < identifications.size(); ++k) {
    const auto& id = identifications[k];
    auto fail = [&](const std::string& why) {
      throw GluingError(k, id.chart_a, id.facet_a, id.chart_b, id.facet_b, why);
    };
    if (id.chart_a < 0 || id.chart_b < 0 || id.chart_a >= static_cast<int>(charts.size()) ||
        id.chart_b >= static_cast<int>(charts.size())) {
      fail("chart index out of range");
    }
    const auto& ca = charts[static_cast<std::size_t>(id.chart_a)];
    const auto& cb = charts[static_cast<std::size_t>(id.chart_b)];
    const int d = ca.dimension();
    if (cb.dimension() != d) fail("charts have different dimensions");
    if (id.facet_a < 0 || id.facet_a >= 2 * d || id.facet_b < 0 || id.facet_b >= 2 * d) fail("facet index out of range");
    if (static_cast<int>(id.perm.size()) != d || static_cast<int>(id.signs.size()) != d) {
      fail("permutation and signs must have one entry per axis");
    }
    {
      std::vector<int> sorted = id.perm;
      std::sort(sorted.begin(), sorted.end());
      for (int i = 0; i < d; ++i) {
        if (sorted[static_cast<std::size_t>(i)] != i) fail("perm is not a permutation");
      }
    }
    const int axis_a = id.facet_a / 2;
    const int axis_b = id.facet_b / 2;
    if (id.perm[static_cast<std::size_t>(axis_a)] != axis_b) fail("perm must send the normal axis to the normal axis");
    for (int i = 0; i < d; ++i) {
      if (i == axis_a) continue;
      const auto ui = static_cast<std::size_t>(i);
      int s = id.signs[ui];
      if (s != 1 && s != -1) fail("signs must be +1 or -1");
      const auto& ga = ca.grids[ui];
      const auto& gb = cb.grids[static_cast<std::size_t>(id.perm[ui])];
      if (!(s == 1 ? gb == ga : gb == ga.reflected())) fail("grids along axis " + std::to_string(i) + " do not match");
    }
    const int sa = side_index(ca.grids[static_cast<std::size_t>(axis_a)], id.facet_a);
    const int sb = side_index(cb.grids[static_cast<std::size_t>(axis_b)], id.facet_b);
    std::size_t count_a = 0;
    std::size_t count_b = 0;
    for (const auto& cell : cb.cells) count_b += cell.spans[static_cast<std::size_t>(axis_b)] == std::pair{sb, sb};
    for (const auto& cell : ca.cells) {
      if (cell.spans[static_cast<std::size_t>(axis_a)] != std::pair{sa, sa}) continue;
      ++count_a;
      CubicalCell image;
      image.chart = id.chart_b;
      image.spans.resize(static_cast<std::size_t>(d));
      std::vector<int> images_of_free;
      int sign = 1;
      for (int i = 0; i < d; ++i) {
        if (i == axis_a) continue;
        const auto ui = static_cast<std::size_t>(i);
        auto [lo, hi] = cell.spans[ui];
        const int m = ca.grids[ui].size();
        std::pair<int, int> mapped = id.signs[ui] == 1 ? std::pair{lo, hi} : std::pair{m - 1 - hi, m - 1 - lo};
        image.spans[static_cast<std::size_t>(id.perm[ui])] = mapped;
        if (lo != hi) {
          images_of_free.push_back(id.perm[ui]);
          sign *= id.signs[ui];
        }
      }
      image.spans[static_cast<std::size_t>(axis_b)] = {sb, sb};
      sign *= permutation_sign(images_of_free);
      auto gi = global_index(cell);
      auto gj = global_index(image);
      if (!gj) fail("image " + to_string(image) + " of " + to_string(cell) + " is not a cell of the target chart");
      if (!uf.unite(*gi, *gj, sign)) fail("cell " + to_string(cell) + " is glued to itself with reversed orientation");
    }
    if (count_a != count_b) fail("facets carry different numbers of cells");
  }

  // collect classes
  std::map<std::size_t, std::vector<std::size_t>> classes;
  std::vector<const CubicalCell*> by_global(offset.back());
  for (std::size_t c = 0; c < charts.size(); ++c) {
    for (std::size_t i = 0; i < charts[c].cells.size(); ++i) by_global[offset[c] + i] = &charts[c].cells[i];
  }
  for (std::size_t g = 0; g < by_global.size(); ++g) classes[uf.find(g).first].push_back(g);

  int top = -1;
  for (const auto* cell : by_global) top = std::max(top, cell->dimension());
  std::vector<std::vector<std::pair<CubicalCell, std::vector<std::size_t>>>> per_dim(static_cast<std::size_t>(top + 1));
  for (auto& [root, members] : classes) {
    std::size_t best = members.front();
    for (auto g : members) {
      if (*by_global[g] < *by_global[best]) best = g;
    }
    per_dim[static_cast<std::size_t>(by_global[best]->dimension())].push_back({*by_global[best], members});
  }
  out.chains_ = ChainComplex(top);
  out.representatives_.resize(per_dim.size());
  out.members_.resize(per_dim.size());
  for (std::size_t k = 0; k < per_dim.size(); ++k) {
    auto& list = per_dim[k];
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t id = 0; id < list.size(); ++id) {
      const auto& [rep, members] = list[id];
      const int rep_parity = uf.find(*global_index(rep)).second;
      std::vector<CubicalCell> member_cells;
      for (auto g : members) {
        const int rel = uf.find(g).second * rep_parity;
        out.lookup_[*by_global[g]] = CellRef{static_cast<int>(k), id, rel};
        member_cells.push_back(*by_global[g]);
      }
      std::sort(member_cells.begin(), member_cells.end());
      out.merged_ += member_cells.size() - 1;
      out.representatives_[k].push_back(rep);
      out.members_[k].push_back(std::move(member_cells));
    }
  }
  for (std::size_t k = 0; k < per_dim.size(); ++k) {
    for (std::size_t id = 0; id < out.representatives_[k].size(); ++id) {
      const auto& rep = out.representatives_[k][id];
      std::vector<Incidence> bd;
      if (k > 0) {
        for (const auto& f : signed_facets(rep)) {
          const CellRef& ref = out.lookup_.at(f.face);
          bd.push_back({ref.id, f.incidence * ref.orientation});
        }
      }
      std::vector<std::size_t> verts;
      if (k > 0) {
        for (const auto& v : corners(rep)) verts.push_back(out.lookup_.at(v).id);
      }
      out.chains_.add_cell(static_cast<int>(k), std::move(bd), std::move(verts));
    }
  }
  out.charts_ = std::move(charts);
  out.identifications_ = std::move(identifications);
  return out;
}

const CubicalCell& GluedComplex::representative(int k, std::size_t id) const {
  return representatives_.at(static_cast<std::size_t>(k)).at(id);
}

const std::vector<CubicalCell>& GluedComplex::members(int k, std::size_t id) const {
  return members_.at(static_cast<std::size_t>(k)).at(id);
}

std::optional<CellRef> GluedComplex::find(const CubicalCell& cell) const {
  auto it = lookup_.find(cell);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

CellRef GluedComplex::require(const CubicalCell& cell) const {
  auto ref = find(cell);
  if (!ref) throw DomainError("cell " + to_string(cell) + " is not in the complex");
  return *ref;
}

PointKey GluedComplex::canonical_point(int chart, const std::vector<Rational>& coords) const {
  PointKey start{chart, coords};
  std::set<PointKey> seen{start};
  std::deque<PointKey> queue{start};
  while (!queue.empty()) {
    PointKey p = std::move(queue.front());
    queue.pop_front();
    const auto& grids = charts_[static_cast<std::size_t>(p.chart)].grids;
    for (const auto& id : identifications_) {
      if (id.chart_a == p.chart && on_facet(grids, id.facet_a, p.coords)) {
        PointKey q{id.chart_b, apply_identification(id, charts_[static_cast<std::size_t>(id.chart_b)].grids, p.coords)};
        if (seen.insert(q).second) queue.push_back(std::move(q));
      }
      if (id.chart_b == p.chart && on_facet(grids, id.facet_b, p.coords)) {
        PointKey q{id.chart_a, apply_inverse(id, charts_[static_cast<std::size_t>(id.chart_a)].grids, p.coords)};
        if (seen.insert(q).second) queue.push_back(std::move(q));
      }
    }
  }
  return *seen.begin();
}

int GluedComplex::euler_characteristic() const {
  int chi = 0;
  for (int k = 0; k <= dimension(); ++k) chi += (k % 2 ? -1 : 1) * static_cast<int>(cell_count(k));
  return chi;
}

GluedComplex skeleton(const GluedComplex& complex, int p) {
  if (p < 0 || p > complex.dimension()) {
    throw DomainError("skeleton: p = " + std::to_string(p) + " outside [0, " + std::to_string(complex.dimension()) + "]");
  }
  std::vector<Chart> charts = complex.charts();
  for (auto& chart : charts) {
    std::erase_if(chart.cells, [p](const CubicalCell& c) { return c.dimension() > p; });
  }
  return glue(std::move(charts), complex.identifications());
}

std::vector<Identification> labeled_identifications(int dim, const std::vector<std::vector<int>>& corner_labels) {
  const unsigned ncorners = 1u << dim;
  for (const auto& labels : corner_labels) {
    if (labels.size() != ncorners) throw DomainError("each cube needs 2^dim corner labels");
  }
  auto facet_corners = [&](int axis, int side) {
    std::vector<unsigned> out;
    for (unsigned bits = 0; bits < ncorners; ++bits) {
      if (static_cast<int>((bits >> axis) & 1u) == side) out.push_back(bits);
    }
    return out;
  };
  std::map<std::vector<int>, std::vector<std::pair<int, int>>> groups;
  for (std::size_t c = 0; c < corner_labels.size(); ++c) {
    for (int f = 0; f < 2 * dim; ++f) {
      std::vector<int> key;
      for (auto bits : facet_corners(f / 2, f % 2)) key.push_back(corner_labels[c][bits]);
      std::sort(key.begin(), key.end());
      groups[key].push_back({static_cast<int>(c), f});
    }
  }
  std::vector<Identification> out;
  for (const auto& [key, facets] : groups) {
    for (std::size_t j = 1; j < facets.size(); ++j) {
      auto [c0, f0] = facets[0];
      auto [c1, f1] = facets[j];
      const int a0 = f0 / 2;
      const int a1 = f1 / 2;
      std::vector<int> targets;
      for (int i = 0; i < dim; ++i) {
        if (i != a1) targets.push_back(i);
      }
      std::optional<Identification> found;
      do {
        for (unsigned signbits = 0; signbits < (1u << (dim - 1)) && !found; ++signbits) {
          Identification id{c0, f0, c1, f1, std::vector<int>(static_cast<std::size_t>(dim)),
                            std::vector<int>(static_cast<std::size_t>(dim), 1)};
          id.perm[static_cast<std::size_t>(a0)] = a1;
          int slot = 0;
          for (int i = 0; i < dim; ++i) {
            if (i == a0) continue;
            id.perm[static_cast<std::size_t>(i)] = targets[static_cast<std::size_t>(slot)];
            id.signs[static_cast<std::size_t>(i)] = (signbits >> slot & 1u) ? -1 : 1;
            ++slot;
          }
          bool ok = true;
          for (auto bits : facet_corners(a0, f0 % 2)) {
            unsigned image = static_cast<unsigned>(f1 % 2) << a1;
            for (int i = 0; i < dim; ++i) {
              if (i == a0) continue;
              unsigned b = (bits >> i) & 1u;
              if (id.signs[static_cast<std::size_t>(i)] == -1) b ^= 1u;
              image |= b << id.perm[static_cast<std::size_t>(i)];
            }
            if (corner_labels[static_cast<std::size_t>(c0)][bits] != corner_labels[static_cast<std::size_t>(c1)][image]) {
              ok = false;
              break;
            }
          }
          if (ok) found = id;
        }
      } while (!found && std::next_permutation(targets.begin(), targets.end()));
      if (!found) {
        throw GluingError(out.size(), c0, f0, c1, f1, "facet labels match as sets but no cube isometry aligns them");
      }
      out.push_back(*found);
    }
  }
  return out;
}

GluedComplex from_labeled_cubes(int dim, const std::vector<std::vector<int>>& corner_labels) {
  std::vector<Chart> charts;
  for (std::size_t c = 0; c < corner_labels.size(); ++c) {
    charts.push_back(Chart::single_cube(std::vector<AxisGrid>(static_cast<std::size_t>(dim), AxisGrid::coarse())));
  }
  return glue(std::move(charts), labeled_identifications(dim, corner_labels));
}

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

}  // namespace sweepout
