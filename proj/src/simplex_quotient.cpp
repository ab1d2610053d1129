#include "sweepout/simplex_quotient.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace sweepout {

namespace {

using Span = std::pair<int, int>;

std::vector<Rational> drop_two_zeros(std::vector<Rational> values) {
  std::sort(values.begin(), values.end());
  if (values.size() < 2 || values[0] != 0 || values[1] != 0) {
    throw DomainError("simplex quotient: point has fewer than two zero coordinates, so it is not on T");
  }
  values.erase(values.begin(), values.begin() + 2);
  return values;
}

void check_generic(const std::vector<Rational>& x, int n) {
  std::string hint = "; the default sample is (";
  auto d = default_simplex_sample(n);
  for (std::size_t i = 0; i < d.size(); ++i) hint += (i ? ", " : "") + format_rational(d[i]);
  hint += ")";
  if (x.size() != static_cast<std::size_t>(std::max(n - 1, 0))) {
    throw DomainError("simplex point needs " + std::to_string(n - 1) + " coordinates" + hint);
  }
  SimplexQuotient q{x};
  if (!q.is_generic()) throw DomainError("simplex point is not generic: coordinates must be distinct and in (0, 1)" + hint);
}

// Sign of the permutation sorting `values` ascending.
int sorting_sign(const std::vector<Rational>& values) {
  int inversions = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (values[i] > values[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

// Span of the standard grid {-1, -eps, 0, eps, 1} holding a coordinate of N;
// a value on a grid point takes the side farther from 0.
Span span_of(const Rational& v, const Rational& eps) {
  if (v >= eps) return {3, 4};
  if (v <= -eps) return {0, 1};
  return {1, 3};
}

struct LoopGeometry {
  int chart = 0;
  Rational e;
  std::vector<Rational> base;  // fixed coordinates; zero axes left at 0
  std::vector<int> corner;     // corner of P for the fixed axes
  int level_axis = -1;
  int level_rank = -1;
};

LoopGeometry loop_geometry(const SweepoutBundle& b, const QuotientBranch& br, const std::vector<Rational>& x) {
  const int d = b.n + 1;
  LoopGeometry g;
  g.base.assign(static_cast<std::size_t>(d), Rational(0));
  g.corner.assign(static_cast<std::size_t>(d), 0);
  g.e = b.eps;
  g.chart = br.t_chart;
  if (br.boundary_piece) {
    const auto& F = b.facet_of_chart(br.t_chart);
    g.chart = F.chart;
    g.level_axis = F.axis;
    g.base[static_cast<std::size_t>(F.axis)] = F.side;
    g.corner[static_cast<std::size_t>(F.axis)] = F.side;
    for (std::size_t j = 0; j < br.rank_axis.size(); ++j)
      if (br.rank_axis[j] == F.axis) g.level_rank = static_cast<int>(j);
    g.e = x[static_cast<std::size_t>(g.level_rank)] / 2;
  }
  for (std::size_t j = 0; j < br.rank_axis.size(); ++j) {
    const int axis = br.rank_axis[j];
    if (axis == g.level_axis) continue;
    const auto ua = static_cast<std::size_t>(axis);
    g.base[ua] = br.signs[ua] * (g.e + (1 - g.e) * x[j]);
    g.corner[ua] = br.signs[ua];
  }
  return g;
}

// Orientation of the edge along `edge_axis` (from - to +) with the other zero
// axis at side `other_side`, read off at the generic point `x`: N's
// orientation on the top cell, moved so the edge comes first, against the
// simplex orientation pulled back along the remaining free axes.
int edge_sign(const SweepoutBundle& b, const QuotientBranch& br, const std::vector<Rational>& x, int edge_axis,
              int other_axis, int other_side) {
  const int d = b.n + 1;
  auto g = loop_geometry(b, br, x);
  auto coords = g.base;
  coords[static_cast<std::size_t>(other_axis)] = other_side * g.e;
  CubicalCell cell{g.chart, {}};
  std::vector<int> free_axes;
  for (int i = 0; i < d; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (i == g.level_axis) {
      cell.spans.push_back(coords[ui] < 0 ? Span{0, 0} : Span{4, 4});
    } else if (i == other_axis && !br.boundary_piece) {
      cell.spans.push_back(other_side < 0 ? Span{1, 1} : Span{3, 3});
    } else {
      cell.spans.push_back(span_of(coords[ui], b.eps));
      free_axes.push_back(i);
    }
  }
  const int o_cell = b.n_orientation(cell);
  int before = 0;
  std::vector<Rational> rest_values;
  int factor = 1;
  for (int axis : free_axes) {
    if (axis < edge_axis) ++before;
    if (axis == edge_axis) continue;
    if (axis == other_axis) {
      rest_values.push_back(x[static_cast<std::size_t>(g.level_rank)]);
      factor *= other_side;
      continue;
    }
    const auto rank = std::find(br.rank_axis.begin(), br.rank_axis.end(), axis) - br.rank_axis.begin();
    rest_values.push_back(x[static_cast<std::size_t>(rank)]);
    factor *= br.signs[static_cast<std::size_t>(axis)];
  }
  return o_cell * (before % 2 == 0 ? 1 : -1) * factor * sorting_sign(rest_values);
}

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

bool chain_vanishes(const std::map<std::vector<PointKey>, long long>& chain) {
  return std::all_of(chain.begin(), chain.end(), [](const auto& kv) { return kv.second == 0; });
}

}  // namespace

bool SimplexQuotient::is_generic() const {
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] <= 0 || coords[i] >= 1) return false;
    if (i > 0 && coords[i - 1] >= coords[i]) return false;
  }
  return true;
}

bool SimplexQuotient::on_boundary() const {
  if (coords.empty()) return false;
  if (coords.front() == 0 || coords.back() == 1) return true;
  for (std::size_t i = 1; i < coords.size(); ++i)
    if (coords[i - 1] == coords[i]) return true;
  return false;
}

SimplexQuotient simplex_quotient(const std::vector<Rational>& z_point) {
  std::vector<Rational> values;
  for (const auto& v : z_point) {
    if (abs(v) > 1) throw DomainError("simplex quotient: coordinate outside [-1, 1]");
    values.push_back(abs(v));
  }
  return {drop_two_zeros(std::move(values))};
}

SimplexQuotient simplex_quotient(const SweepoutBundle& b, const TPoint& t) {
  if (t.chart < 0 || t.chart >= static_cast<int>(b.T.charts().size())) throw DomainError("simplex quotient: not a chart of T");
  if (t.coords.size() != static_cast<std::size_t>(b.n + 1)) throw DomainError("simplex quotient: wrong dimension");
  if (!b.is_boundary_chart(t.chart)) return simplex_quotient(t.coords);
  const auto& F = b.facet_of_chart(t.chart);
  const Rational& s = t.coords[static_cast<std::size_t>(F.axis)];
  if (s < 0 || s > Rational(1, 2)) throw DomainError("simplex quotient: level outside [0, 1/2]");
  std::vector<Rational> tangent;
  for (int i = 0; i <= b.n; ++i)
    if (i != F.axis) tangent.push_back(t.coords[static_cast<std::size_t>(i)]);
  auto q = simplex_quotient(tangent);
  q.coords.push_back(2 * s);
  std::sort(q.coords.begin(), q.coords.end());
  return q;
}

std::vector<Rational> default_simplex_sample(int n) {
  std::vector<Rational> x;
  for (int i = 1; i <= n - 1; ++i) x.push_back(Rational(i, n + 3));
  return x;
}

TPoint QuotientBranch::point(const SweepoutBundle& b, const std::vector<Rational>& x) const {
  TPoint t{t_chart, std::vector<Rational>(static_cast<std::size_t>(b.n + 1), Rational(0))};
  const int level = boundary_piece ? b.facet_of_chart(t_chart).axis : -1;
  for (std::size_t j = 0; j < rank_axis.size(); ++j) {
    const auto ua = static_cast<std::size_t>(rank_axis[j]);
    t.coords[ua] = rank_axis[j] == level ? Rational(x[j] / 2) : Rational(signs[ua] * x[j]);
  }
  return t;
}

std::vector<QuotientBranch> quotient_branches(const SweepoutBundle& b) {
  const int d = b.n + 1;
  std::vector<QuotientBranch> out;
  auto add_orbit = [&](int t_chart, bool boundary, const std::vector<int>& axes, int level_axis) {
    // axes: the axes that may carry zeros; the level axis always carries a rank.
    for (std::size_t i = 0; i < axes.size(); ++i) {
      for (std::size_t j = i + 1; j < axes.size(); ++j) {
        std::vector<int> ranked;
        for (std::size_t k = 0; k < axes.size(); ++k)
          if (k != i && k != j) ranked.push_back(axes[k]);
        if (level_axis >= 0) ranked.push_back(level_axis);
        std::sort(ranked.begin(), ranked.end());
        std::vector<int> signed_axes;
        for (int a : ranked)
          if (a != level_axis) signed_axes.push_back(a);
        do {
          for (unsigned mask = 0; mask < (1u << signed_axes.size()); ++mask) {
            QuotientBranch br;
            br.t_chart = t_chart;
            br.boundary_piece = boundary;
            br.zero_axes = {axes[i], axes[j]};
            br.rank_axis = ranked;
            br.signs.assign(static_cast<std::size_t>(d), 1);
            for (std::size_t k = 0; k < signed_axes.size(); ++k)
              br.signs[static_cast<std::size_t>(signed_axes[k])] = (mask >> k) & 1u ? -1 : 1;
            out.push_back(std::move(br));
          }
        } while (std::next_permutation(ranked.begin(), ranked.end()));
      }
    }
  };
  std::vector<int> all(static_cast<std::size_t>(d));
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t c = 0; c < b.cube_count; ++c) add_orbit(static_cast<int>(c), false, all, -1);
  if (b.n >= 2) {
    for (std::size_t f = 0; f < b.boundary_facets.size(); ++f) {
      const int a = b.boundary_facets[f].axis;
      std::vector<int> tangent;
      for (int i : all)
        if (i != a) tangent.push_back(i);
      add_orbit(static_cast<int>(b.cube_count + f), true, tangent, a);
    }
  }
  return out;
}

std::optional<FiberRecord> branch_loop(const SweepoutBundle& b, const QuotientBranch& br, const std::vector<Rational>& at,
                                       const std::vector<Rational>& orient_at) {
  if (!b.n_report.orientable) throw DomainError("loop orientation needs an orientable N");
  auto g = loop_geometry(b, br, at);
  if (g.e == 0) return std::nullopt;
  const auto [z1, z2] = br.zero_axes;
  FiberRecord r;
  r.base = br.point(b, at);
  r.base_key = b.T.canonical_point(r.base.chart, r.base.coords);
  r.delta_point = at;
  r.cube_dimension = 2;
  r.cube_skeleton = true;
  r.oriented = true;
  std::vector<std::vector<int>> corners;
  auto vertex = [&](int s1, int s2) {
    auto x = g.base;
    x[static_cast<std::size_t>(z1)] = s1 * g.e;
    x[static_cast<std::size_t>(z2)] = s2 * g.e;
    return x;
  };
  auto corner = [&](int s1, int s2) {
    auto c = g.corner;
    c[static_cast<std::size_t>(z1)] = s1;
    c[static_cast<std::size_t>(z2)] = s2;
    return c;
  };
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1}) {
      r.vertices.push_back(b.N.canonical_point(g.chart, vertex(s1, s2)));
      corners.push_back(corner(s1, s2));
    }
  r.vertex_count = r.vertices.size();
  auto add_edge = [&](int axis, int other, int other_side, std::vector<Rational> from, std::vector<Rational> to,
                      std::vector<int> cfrom, std::vector<int> cto) {
    FiberEdge e;
    e.chart = g.chart;
    e.from_key = b.N.canonical_point(g.chart, from);
    e.to_key = b.N.canonical_point(g.chart, to);
    std::vector<Rational> mid;
    for (std::size_t i = 0; i < from.size(); ++i) mid.push_back((from[i] + to[i]) / 2);
    e.mid_key = b.N.canonical_point(g.chart, mid);
    e.from = std::move(from);
    e.to = std::move(to);
    CubicalCell pe{g.chart, {}};
    for (std::size_t i = 0; i < cfrom.size(); ++i) {
      const int lo = std::min(cfrom[i], cto[i]) > 0 ? 1 : 0;
      const int hi = std::max(cfrom[i], cto[i]) > 0 ? 1 : 0;
      pe.spans.push_back({lo, hi});
    }
    e.p_edge = b.input.P.require(pe).id;
    e.length = b.edge_lengths[e.p_edge];
    e.sign = edge_sign(b, br, orient_at, axis, other, other_side);
    r.edges.push_back(std::move(e));
  };
  for (int s : {-1, 1}) {
    add_edge(z1, z2, s, vertex(-1, s), vertex(1, s), corner(-1, s), corner(1, s));
    add_edge(z2, z1, s, vertex(s, -1), vertex(s, 1), corner(s, -1), corner(s, 1));
  }
  summarize_fiber(b, r, corners, g.chart);
  return r;
}

HbarFiber hbar_fiber(const SweepoutBundle& b, const std::vector<Rational>& x) {
  check_generic(x, b.n);
  HbarFiber h;
  h.x = x;
  h.branches = quotient_branches(b);
  std::set<PointKey> seen;
  h.all_simple = true;
  h.pairwise_disjoint = true;
  h.max_loop_length = 0;
  for (const auto& br : h.branches) {
    auto loop = branch_loop(b, br, x, x);
    if (!loop) throw DomainError("internal: a loop over a generic point collapsed");
    h.all_simple = h.all_simple && loop->components.size() == 1 && loop->components[0].simple_cycle;
    for (const auto& v : loop->vertices) h.pairwise_disjoint = seen.insert(v).second && h.pairwise_disjoint;
    h.max_loop_length = std::max(h.max_loop_length, loop->total_length);
    h.loops.push_back(std::move(*loop));
  }
  h.enumerated_count = h.loops.size();
  auto factorial = [](int k) {
    BigInt f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  const int n = b.n;
  h.formula_count = (BigInt(1) << n) * factorial(n + 1) * b.cube_count +
                    (BigInt(1) << (n - 1)) * factorial(n) * b.boundary_facets.size();
  h.count_mismatch = BigInt(h.enumerated_count) != h.formula_count;
  h.loop_bound = 4 * b.delta;
  h.within_bound = h.max_loop_length <= h.loop_bound;
  return h;
}

std::map<std::vector<PointKey>, long long> signed_edge_chain(const FiberRecord& fiber) {
  std::map<std::vector<PointKey>, long long> chain;
  for (const auto& e : fiber.edges) {
    if (e.from_key == e.to_key) continue;
    const bool forward = e.from_key < e.to_key;
    std::vector<PointKey> key = forward ? std::vector<PointKey>{e.from_key, e.to_key, e.mid_key}
                                        : std::vector<PointKey>{e.to_key, e.from_key, e.mid_key};
    chain[key] += forward ? e.sign : -e.sign;
  }
  return chain;
}

PairingCertificate boundary_pairing(const SweepoutBundle& b, const std::vector<Rational>& x0,
                                    const std::optional<std::vector<Rational>>& approach) {
  const int n = b.n;
  if (x0.size() != static_cast<std::size_t>(std::max(n - 1, 0))) {
    throw DomainError("boundary point needs " + std::to_string(n - 1) + " coordinates");
  }
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (x0[i] < 0 || x0[i] > 1 || (i > 0 && x0[i - 1] > x0[i])) throw DomainError("boundary point is not in the simplex");
  }
  SimplexQuotient q{x0};
  if (!q.on_boundary()) throw DomainError("boundary point lies in the interior of the simplex");
  PairingCertificate cert;
  cert.x0 = x0;
  if (x0.front() == 0) cert.cases.push_back("sign");
  for (std::size_t i = 1; i < x0.size(); ++i)
    if (x0[i - 1] == x0[i]) {
      cert.cases.push_back("isotropy");
      break;
    }
  if (x0.back() == 1) cert.cases.push_back("facet");
  if (approach) {
    cert.approach = *approach;
  } else {
    auto c = default_simplex_sample(n);
    for (std::size_t i = 0; i < x0.size(); ++i) cert.approach.push_back(x0[i] + (c[i] - x0[i]) / 1000);
  }
  check_generic(cert.approach, n);

  auto branches = quotient_branches(b);
  std::vector<std::pair<std::size_t, FiberRecord>> loops;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    auto loop = branch_loop(b, branches[i], x0, cert.approach);
    if (!loop) {
      ++cert.degenerate_branches;
      continue;
    }
    std::erase_if(loop->edges, [](const FiberEdge& e) { return e.from_key == e.to_key; });
    loops.emplace_back(i, std::move(*loop));
  }
  KeyUnionFind uf;
  for (const auto& [i, loop] : loops) {
    for (const auto& v : loop.vertices) uf.find(v);
    for (std::size_t k = 1; k < loop.vertices.size(); ++k) uf.unite(loop.vertices[0], loop.vertices[k]);
  }
  std::map<PointKey, PairingCluster> by_root;
  FiberRecord all;
  for (auto& [i, loop] : loops) {
    auto& cluster = by_root[uf.find(loop.vertices[0])];
    cluster.branch_indices.push_back(i);
    auto& f = cluster.limit_fiber;
    f.delta_point = x0;
    f.oriented = true;
    for (const auto& v : loop.vertices) f.vertices.push_back(v);
    for (const auto& e : loop.edges) {
      f.total_length += e.length;
      f.edges.push_back(e);
      all.edges.push_back(e);
    }
  }
  for (auto& [root, cluster] : by_root) {
    auto& f = cluster.limit_fiber;
    std::sort(f.vertices.begin(), f.vertices.end());
    f.vertices.erase(std::unique(f.vertices.begin(), f.vertices.end()), f.vertices.end());
    f.vertex_count = f.vertices.size();
    for (const auto& e : f.edges) f.max_edge_length = std::max(f.max_edge_length, e.length);
    cluster.cancels = chain_vanishes(signed_edge_chain(f));
    cert.clusters.push_back(std::move(cluster));
  }
  cert.zero_chain = chain_vanishes(signed_edge_chain(all));
  return cert;
}

FiberRecord collar_extend(const FiberRecord& fiber, const Rational& s) {
  if (s < 0 || s > 1) throw DomainError("collar parameter must lie in [0, 1]");
  if (!chain_vanishes(signed_edge_chain(fiber))) {
    throw DomainError("collar extension needs a fiber whose signed edge sum vanishes");
  }
  FiberRecord out;
  out.base = fiber.base;
  out.base_key = fiber.base_key;
  out.delta_point = fiber.delta_point;
  out.oriented = fiber.oriented;
  out.vertices = fiber.vertices;
  out.vertex_count = fiber.vertex_count;
  out.total_length = 0;
  out.max_edge_length = 0;
  if (s == 0) {
    out.edges = fiber.edges;
  } else if (s < 1) {
    for (const auto& e : fiber.edges) {
      std::vector<Rational> a_s, b_s;
      for (std::size_t i = 0; i < e.from.size(); ++i) {
        const Rational m = (e.from[i] + e.to[i]) / 2;
        a_s.push_back(s * e.from[i] + (1 - s) * m);
        b_s.push_back(s * e.to[i] + (1 - s) * m);
      }
      FiberEdge head = e;
      head.to = a_s;
      head.to_key = PointKey{e.chart, a_s};
      head.mid_key = PointKey{e.chart, {}};
      head.length = (1 - s) * e.length / 2;
      FiberEdge tail = e;
      tail.from = b_s;
      tail.from_key = PointKey{e.chart, b_s};
      tail.mid_key = PointKey{e.chart, {}};
      tail.length = head.length;
      for (std::size_t i = 0; i < e.from.size(); ++i) {
        head.mid_key.coords.push_back((e.from[i] + a_s[i]) / 2);
        tail.mid_key.coords.push_back((b_s[i] + e.to[i]) / 2);
      }
      out.edges.push_back(std::move(head));
      out.edges.push_back(std::move(tail));
    }
  }
  for (const auto& e : out.edges) {
    out.total_length += e.length;
    out.max_edge_length = std::max(out.max_edge_length, e.length);
  }
  return out;
}

}  // namespace sweepout
