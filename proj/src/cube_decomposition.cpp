#include "sweepout/cube_decomposition.hpp"

#include <algorithm>
#include <chrono>
#include <map>

namespace sweepout {

namespace {

using Span = std::pair<int, int>;

const std::vector<Span>& eps_codes() {
  static const std::vector<Span> codes{{0, 0}, {1, 1}, {3, 3}, {4, 4}, {0, 1}, {1, 3}, {3, 4}};
  return codes;
}

const std::vector<Span>& unit_codes() {
  static const std::vector<Span> codes{{0, 0}, {2, 2}, {4, 4}, {0, 2}, {2, 4}};
  return codes;
}

std::vector<CubicalCell> product_cells(int dim, const std::vector<Span>& codes) {
  std::vector<CubicalCell> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
  while (true) {
    CubicalCell c;
    for (auto i : idx) c.spans.push_back(codes[i]);
    out.push_back(std::move(c));
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == codes.size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

void check_parameters(int n, int p) {
  if (n < 1 || p < 1 || p > n) {
    throw DomainError("decomposition needs 1 <= p <= n (got n = " + std::to_string(n) + ", p = " + std::to_string(p) + ")");
  }
}

void check_eps(const Rational& eps) {
  if (!(eps > 0 && eps < 1)) throw DomainError("epsilon must lie strictly between 0 and 1");
}

void check_cube_point(const std::vector<Rational>& x) {
  for (const auto& v : x) {
    if (v < -1 || v > 1) throw DomainError("point lies outside the cube [-1,1]^d");
  }
}

}  // namespace

std::string piece_name(Piece piece) {
  switch (piece) {
    case Piece::Z: return "Z";
    case Piece::X1: return "X1";
    case Piece::X2: return "X2";
    case Piece::Y: return "Y";
    case Piece::Skeleton: return "skeleton";
  }
  return "?";
}

const GluedComplex& DecompositionSet::piece(Piece which) const {
  switch (which) {
    case Piece::Z: return Z;
    case Piece::X1: return X1;
    case Piece::X2: return X2;
    case Piece::Y: return Y;
    case Piece::Skeleton: return skeleton;
  }
  return Y;
}

bool span_at_least_eps(std::pair<int, int> span) {
  const auto [lo, hi] = span;
  if (lo == hi) return lo != 2;
  return (lo == 0 && hi == 1) || (lo == 3 && hi == 4);
}

bool span_at_most_eps(std::pair<int, int> span) {
  const auto [lo, hi] = span;
  return lo >= 1 && hi <= 3;
}

std::vector<CubicalCell> eps_grid_cells(int dim) { return product_cells(dim, eps_codes()); }

std::vector<CubicalCell> decomposition_cells(int n, int p, Piece piece) {
  check_parameters(n, p);
  const int dim = n + 1;
  std::vector<CubicalCell> out;
  if (piece == Piece::Z) {
    for (auto& c : product_cells(dim, unit_codes())) {
      int zeros = static_cast<int>(std::count(c.spans.begin(), c.spans.end(), Span{2, 2}));
      if (zeros >= p + 1) out.push_back(std::move(c));
    }
    return out;
  }
  for (auto& c : eps_grid_cells(dim)) {
    int big = 0;
    int small = 0;
    int ends = 0;
    for (const auto& s : c.spans) {
      big += span_at_least_eps(s);
      small += span_at_most_eps(s);
      ends += (s == Span{0, 0} || s == Span{4, 4});
    }
    bool keep = false;
    switch (piece) {
      case Piece::X1: keep = big >= dim - p; break;
      case Piece::X2: keep = small >= p + 1; break;
      case Piece::Y: keep = big >= dim - p && small >= p + 1; break;
      case Piece::Skeleton: keep = ends >= dim - p; break;
      case Piece::Z: break;
    }
    if (keep) out.push_back(std::move(c));
  }
  return out;
}

DecompositionSet build_decomposition(int n, int p, const Rational& eps) {
  check_parameters(n, p);
  check_eps(eps);
  const std::vector<AxisGrid> grids(static_cast<std::size_t>(n + 1), AxisGrid::standard(eps));
  auto make = [&](Piece piece) { return glue({Chart::from_cells(grids, decomposition_cells(n, p, piece))}); };
  DecompositionSet d;
  d.n = n;
  d.p = p;
  d.eps = eps;
  d.Z = make(Piece::Z);
  d.X1 = make(Piece::X1);
  d.X2 = make(Piece::X2);
  d.Y = make(Piece::Y);
  d.skeleton = make(Piece::Skeleton);
  return d;
}

Rational lambda(const Rational& t, const Rational& eps) {
  if (t < -1 || t > 1) throw DomainError("lambda: argument outside [-1, 1]");
  if (eps == 0) return t;
  if (t >= eps) return (t - eps) / (1 - eps);
  if (t <= -eps) return (t + eps) / (1 - eps);
  return Rational(0);
}

Rational lambda_inverse(const Rational& z, const Rational& eps) {
  if (z == 0 || z < -1 || z > 1) throw DomainError("lambda_inverse: need a nonzero value in [-1, 1]");
  return z > 0 ? Rational(eps + (1 - eps) * z) : Rational(-eps + (1 - eps) * z);
}

Rational mu(const Rational& t, const Rational& eps) {
  if (t < -1 || t > 1) throw DomainError("mu: argument outside [-1, 1]");
  if (t >= eps) return Rational(1);
  if (t <= -eps) return Rational(-1);
  return t / eps;
}

std::pair<Rational, Rational> profile_maps(const Rational& t, const Rational& eps) {
  check_eps(eps);
  return {lambda(t, eps), mu(t, eps)};
}

bool in_X1(const std::vector<Rational>& x, int p, const Rational& eps) {
  int big = 0;
  for (const auto& v : x) big += abs(v) >= eps;
  return big >= static_cast<int>(x.size()) - p;
}

bool in_X2(const std::vector<Rational>& x, int p, const Rational& eps) {
  int small = 0;
  for (const auto& v : x) small += abs(v) <= eps;
  return small >= p + 1;
}

bool in_Y(const std::vector<Rational>& x, int p, const Rational& eps) { return in_X1(x, p, eps) && in_X2(x, p, eps); }

bool in_Z(const std::vector<Rational>& x, int p) {
  return std::count(x.begin(), x.end(), Rational(0)) >= p + 1;
}

bool in_skeleton(const std::vector<Rational>& x, int p) {
  int ends = 0;
  for (const auto& v : x) ends += abs(v) == 1;
  return ends >= static_cast<int>(x.size()) - p;
}

std::vector<Rational> theta(const std::vector<Rational>& x, int p, const Rational& eps) {
  check_cube_point(x);
  if (!in_Y(x, p, eps)) throw DomainError("theta: point is not in Y");
  std::vector<Rational> z;
  for (const auto& v : x) z.push_back(lambda(v, eps));
  return z;
}

std::vector<Rational> rho(const std::vector<Rational>& x, int p, const Rational& eps) {
  check_cube_point(x);
  if (!in_X1(x, p, eps)) throw DomainError("rho: point is not in X1");
  return rho_bar(x, eps);
}

std::vector<Rational> rho_bar(const std::vector<Rational>& x, const Rational& eps) {
  check_cube_point(x);
  std::vector<Rational> y;
  for (const auto& v : x) y.push_back(mu(v, eps));
  return y;
}

std::vector<std::vector<Rational>> rho_bar_preimages(const std::vector<Rational>& y, const Rational& eps) {
  check_cube_point(y);
  // mu has three linear pieces; only the middle one is nonconstant
  struct PieceMap {
    Rational lo, hi;  // domain
    Rational a, b;    // image endpoints
  };
  const std::vector<PieceMap> pieces{{Rational(-1), -eps, Rational(-1), Rational(-1)},
                                     {-eps, eps, Rational(-1), Rational(1)},
                                     {eps, Rational(1), Rational(1), Rational(1)}};
  std::vector<std::vector<Rational>> per_axis;
  for (const auto& v : y) {
    std::vector<Rational> roots;
    for (const auto& piece : pieces) {
      if (piece.a == piece.b) {
        if (v == piece.a) throw DomainError("rho_bar_preimages: point is not generic (coordinate at +-1)");
        continue;
      }
      if (v > piece.a && v < piece.b) roots.push_back(piece.lo + (v - piece.a) * (piece.hi - piece.lo) / (piece.b - piece.a));
    }
    per_axis.push_back(std::move(roots));
  }
  std::vector<std::vector<Rational>> out{{}};
  for (const auto& roots : per_axis) {
    std::vector<std::vector<Rational>> next;
    for (const auto& prefix : out) {
      for (const auto& r : roots) {
        auto q = prefix;
        q.push_back(r);
        next.push_back(std::move(q));
      }
    }
    out = std::move(next);
  }
  return out;
}

FiberComplex theta_fiber(const std::vector<Rational>& z, int p, const Rational& eps) {
  check_eps(eps);
  check_cube_point(z);
  if (!in_Z(z, p)) throw DomainError("theta_fiber: point has fewer than p+1 zero coordinates, so it is not in Z");
  FiberComplex fiber;
  fiber.base = z;
  fiber.eps = eps;
  std::vector<AxisGrid> grids;
  std::vector<int> fixed_index(z.size(), -1);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] == 0) {
      fiber.zero_axes.push_back(static_cast<int>(i));
      grids.push_back(AxisGrid::standard(eps));
      continue;
    }
    const Rational x = lambda_inverse(z[i], eps);
    std::vector<Rational> pts{Rational(-1), -eps, Rational(0), eps, Rational(1), x, -x};
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    AxisGrid g(std::move(pts));
    fixed_index[i] = *g.index_of(x);
    grids.push_back(std::move(g));
  }
  fiber.k = static_cast<int>(fiber.zero_axes.size());
  const std::vector<Span> zero_codes{{1, 1}, {3, 3}, {1, 3}};
  std::vector<CubicalCell> cells;
  std::vector<std::size_t> idx(static_cast<std::size_t>(fiber.k), 0);
  while (true) {
    int stars = 0;
    for (auto i : idx) stars += i == 2;
    if (stars <= p) {
      CubicalCell c;
      c.spans.resize(z.size());
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (fixed_index[j] >= 0) c.spans[j] = {fixed_index[j], fixed_index[j]};
      }
      for (std::size_t s = 0; s < idx.size(); ++s) {
        c.spans[static_cast<std::size_t>(fiber.zero_axes[s])] = zero_codes[idx[s]];
      }
      cells.push_back(std::move(c));
    }
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == zero_codes.size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  fiber.complex = glue({Chart::from_cells(std::move(grids), std::move(cells))});
  return fiber;
}

FiberComplex theta_fiber_of_cell(const CubicalCell& z_cell, int p, const Rational& eps) {
  const AxisGrid unit = AxisGrid::standard(eps);
  std::vector<Rational> z;
  for (const auto& [lo, hi] : z_cell.spans) {
    // Z cells sit on the {-1, 0, 1} hyperplanes of the standard grid
    for (int v : {lo, hi}) {
      if (v != 0 && v != 2 && v != 4) throw DomainError("theta_fiber_of_cell: cell is not on the {-1,0,1} grid");
    }
    z.push_back((unit[lo] + unit[hi]) / 2);
  }
  return theta_fiber(z, p, eps);
}

std::set<std::string> fiber_words(const FiberComplex& fiber) {
  std::set<std::string> words;
  const auto& chart = fiber.complex.charts().front();
  for (const auto& c : chart.cells) {
    std::string w;
    for (int axis : fiber.zero_axes) {
      const auto span = c.spans[static_cast<std::size_t>(axis)];
      w += span == Span{1, 1} ? '-' : span == Span{3, 3} ? '+' : '*';
    }
    words.insert(std::move(w));
  }
  return words;
}

std::set<std::string> cube_skeleton_words(int k, int p) {
  std::set<std::string> words;
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::string w;
    std::size_t x = code;
    int stars = 0;
    for (int i = 0; i < k; ++i) {
      const char c = "-+*"[x % 3];
      stars += c == '*';
      w += c;
      x /= 3;
    }
    if (stars <= p) words.insert(std::move(w));
  }
  return words;
}

CubeSkeletonMatch recognize_cube_skeleton(const GluedComplex& complex, int p) {
  CubeSkeletonMatch m;
  const auto& cx = complex.chains();
  const std::size_t V = cx.count(0);
  int k = 0;
  while ((std::size_t{1} << k) < V) ++k;
  if ((std::size_t{1} << k) != V) {
    m.reason = "vertex count " + std::to_string(V) + " is not a power of two";
    return m;
  }
  std::vector<std::vector<std::size_t>> adj(V);
  for (std::size_t e = 0; e < cx.count(1); ++e) {
    const auto& vs = cx.vertices(1, e);
    adj[vs[0]].push_back(vs[1]);
    adj[vs[1]].push_back(vs[0]);
  }
  for (std::size_t v = 0; v < V; ++v) {
    if (static_cast<int>(adj[v].size()) != k) {
      m.reason = "vertex " + std::to_string(v) + " has degree " + std::to_string(adj[v].size()) + ", expected " +
                 std::to_string(k);
      return m;
    }
  }
  std::vector<long long> label(V, -1);
  std::vector<int> dist(V, -1);
  std::vector<std::size_t> order{0};
  dist[0] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (auto w : adj[order[head]]) {
      if (dist[w] == -1) {
        dist[w] = dist[order[head]] + 1;
        order.push_back(w);
      }
    }
  }
  label[0] = 0;
  for (std::size_t j = 0; j < adj[0].size(); ++j) label[adj[0][j]] = 1LL << j;
  if (order.size() != V) {
    m.reason = "1-skeleton is disconnected";
    return m;
  }
  for (auto v : order) {
    if (dist[v] < 2) continue;
    long long acc = 0;
    for (auto w : adj[v]) {
      if (dist[w] == dist[v] - 1) acc |= label[w];
    }
    label[v] = acc;
    if (std::popcount(static_cast<unsigned long long>(acc)) != dist[v]) {
      m.reason = "BFS labels do not form a hypercube";
      return m;
    }
  }
  std::set<long long> distinct(label.begin(), label.end());
  if (distinct.size() != V) {
    m.reason = "BFS labels collide";
    return m;
  }
  for (std::size_t e = 0; e < cx.count(1); ++e) {
    const auto& vs = cx.vertices(1, e);
    if (std::popcount(static_cast<unsigned long long>(label[vs[0]] ^ label[vs[1]])) != 1) {
      m.reason = "edge joins labels differing in more than one bit";
      return m;
    }
  }
  for (int j = 0; j <= cx.top_dimension(); ++j) {
    if (j > p && cx.count(j) > 0) {
      m.reason = "cells of dimension " + std::to_string(j) + " exceed p";
      return m;
    }
    std::set<std::pair<long long, long long>> subcubes;
    for (std::size_t c = 0; c < cx.count(j); ++c) {
      long long all_and = ~0LL;
      long long all_or = 0;
      std::set<long long> labels;
      for (auto v : (j == 0 ? std::vector<std::size_t>{c} : cx.vertices(j, c))) {
        all_and &= label[v];
        all_or |= label[v];
        labels.insert(label[v]);
      }
      if (std::popcount(static_cast<unsigned long long>(all_or ^ all_and)) != j ||
          labels.size() != (std::size_t{1} << j)) {
        m.reason = "a " + std::to_string(j) + "-cell is not a subcube";
        return m;
      }
      subcubes.insert({all_and, all_or});
    }
    const std::size_t expected = j <= p ? (std::size_t{1} << (k - j)) * binomial(k, j) : 0;
    if (subcubes.size() != cx.count(j) || cx.count(j) != expected) {
      m.reason = "expected " + std::to_string(expected) + " cells of dimension " + std::to_string(j) + ", found " +
                 std::to_string(cx.count(j));
      return m;
    }
  }
  for (int j = cx.top_dimension() + 1; j <= std::min(p, k); ++j) {
    m.reason = "missing cells of dimension " + std::to_string(j);
    return m;
  }
  m.isomorphic = true;
  m.k = k;
  return m;
}

ConeImage big_theta(const std::vector<Rational>& x, int p) {
  check_cube_point(x);
  const int n = static_cast<int>(x.size());
  if (p < 1 || p >= n) throw DomainError("big_theta needs 1 <= p <= n-1");
  std::vector<Rational> a;
  for (const auto& v : x) a.push_back(abs(v));
  std::sort(a.begin(), a.end());
  ConeImage img;
  img.level = a[static_cast<std::size_t>(p)];
  if (img.level == 1) {
    img.apex = true;
    return img;
  }
  for (const auto& v : x) img.base.push_back(lambda(v, img.level));
  return img;
}

ShapeSet shapes_of(const GluedComplex& complex) {
  ShapeSet out;
  for (int k = 0; k <= complex.dimension(); ++k) {
    for (std::size_t id = 0; id < complex.cell_count(k); ++id) {
      const auto& rep = complex.representative(k, id);
      const auto& chart = complex.charts()[static_cast<std::size_t>(rep.chart)];
      CellShape shape;
      for (const auto& v : corners(rep)) shape.insert(chart.coordinates(v));
      out.insert(std::move(shape));
    }
  }
  return out;
}

std::vector<Rational> SignedPermutation::apply(const std::vector<Rational>& x) const {
  std::vector<Rational> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[static_cast<std::size_t>(perm[i])] = signs[i] * x[i];
  return y;
}

CellShape SignedPermutation::apply(const CellShape& shape) const {
  CellShape out;
  for (const auto& x : shape) out.insert(apply(x));
  return out;
}

ShapeSet SignedPermutation::apply(const ShapeSet& shapes) const {
  ShapeSet out;
  for (const auto& s : shapes) out.insert(apply(s));
  return out;
}

std::vector<SignedPermutation> cube_symmetry_generators(int dim) {
  std::vector<SignedPermutation> gens;
  for (int i = 0; i + 1 < dim; ++i) {
    SignedPermutation g;
    for (int j = 0; j < dim; ++j) g.perm.push_back(j);
    std::swap(g.perm[static_cast<std::size_t>(i)], g.perm[static_cast<std::size_t>(i + 1)]);
    g.signs.assign(static_cast<std::size_t>(dim), 1);
    gens.push_back(std::move(g));
  }
  SignedPermutation flip;
  for (int j = 0; j < dim; ++j) flip.perm.push_back(j);
  flip.signs.assign(static_cast<std::size_t>(dim), 1);
  flip.signs[0] = -1;
  gens.push_back(std::move(flip));
  return gens;
}

NaturalSweepout natural_sweepout(int n, int p, const Rational& level) {
  if (p < 1 || p > n - 1) throw DomainError("natural_sweepout needs 1 <= p <= n-1");
  check_eps(level);
  NaturalSweepout out;
  out.n = n;
  out.p = p;
  out.level = level;
  const AxisGrid unit = AxisGrid::standard(Rational(1, 2));
  auto point_of = [&](const CubicalCell& c) {
    std::vector<Rational> z;
    for (const auto& [lo, hi] : c.spans) z.push_back((unit[lo] + unit[hi]) / 2);
    return z;
  };
  for (const auto& cell : decomposition_cells(n - 1, p, Piece::Z)) {
    const auto z = point_of(cell);
    NaturalFiber bottom;
    bottom.cell = {ConeCell::Kind::Bottom, cell};
    bottom.sample = {false, z, Rational(0)};
    bottom.shapes = {CellShape{z}};
    out.fibers.push_back(std::move(bottom));

    NaturalFiber interior;
    interior.cell = {ConeCell::Kind::Interior, cell};
    interior.sample = {false, z, level};
    auto fiber = theta_fiber(z, p, level);
    interior.shapes = shapes_of(fiber.complex);
    interior.cube_dimension = fiber.k;
    interior.edge_count = fiber.complex.cell_count(1);
    out.fibers.push_back(std::move(interior));
  }
  NaturalFiber apex;
  apex.cell = {ConeCell::Kind::Apex, {}};
  apex.sample.apex = true;
  apex.sample.level = Rational(1);
  auto cube = glue({Chart::single_cube(std::vector<AxisGrid>(static_cast<std::size_t>(n), AxisGrid::coarse()))});
  auto skel = skeleton(cube, p);
  apex.shapes = shapes_of(skel);
  apex.cube_dimension = n;
  apex.edge_count = skel.cell_count(1);
  out.fibers.push_back(std::move(apex));

  std::map<std::pair<int, std::vector<Rational>>, const NaturalFiber*> index;
  for (const auto& f : out.fibers) index[{static_cast<int>(f.cell.kind), f.sample.base}] = &f;
  out.symmetric = true;
  const auto gens = cube_symmetry_generators(n);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    for (const auto& f : out.fibers) {
      std::vector<Rational> moved = f.sample.apex ? std::vector<Rational>{} : gens[g].apply(f.sample.base);
      auto it = index.find({static_cast<int>(f.cell.kind), moved});
      if (it == index.end() || it->second->shapes != gens[g].apply(f.shapes)) {
        out.symmetric = false;
        out.symmetry_failures.push_back("generator " + std::to_string(g) + " on fiber over " +
                                        (f.sample.apex ? std::string("apex") : to_string(f.cell.base_cell)));
      }
    }
  }
  return out;
}

YValidation validate_Y(int n, int p, const Rational& eps) {
  const auto start = std::chrono::steady_clock::now();
  YValidation v;
  v.n = n;
  v.p = p;
  auto decomposition = build_decomposition(n, p, eps);
  const auto& Y = decomposition.Y;
  v.report = check_pseudomanifold(Y);
  v.top_cells = Y.cell_count(v.report.dimension);
  const int last = Y.charts().front().grids.front().size() - 1;
  v.boundary_in_cube_boundary = true;
  for (const auto& [face, coeff] : v.report.boundary.coeffs) {
    const auto& rep = Y.representative(v.report.dimension - 1, face);
    bool on_boundary = false;
    for (const auto& s : rep.spans) on_boundary = on_boundary || s == Span{0, 0} || s == Span{last, last};
    if (!on_boundary) {
      v.boundary_in_cube_boundary = false;
      v.report.notes.push_back("boundary facet " + to_string(rep) + " is interior to the cube");
    }
  }
  v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return v;
}

}  // namespace sweepout
