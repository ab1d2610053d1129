#include "sweepout/filling_radius.hpp"

#include "sweepout/cube_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace sweepout {

Rational FiniteMetricSpace::diameter() const {
  Rational best = 0;
  for (const auto& row : distances)
    for (const auto& d : row) best = std::max(best, d);
  return best;
}

void FiniteMetricSpace::validate() const {
  const std::size_t k = size();
  for (std::size_t i = 0; i < k; ++i) {
    if (distances[i].size() != k) {
      throw DomainError("metric: row " + std::to_string(i) + " has " + std::to_string(distances[i].size()) +
                        " entries, expected " + std::to_string(k));
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (distances[i][i] != 0) throw DomainError("metric: nonzero diagonal entry at " + std::to_string(i));
    for (std::size_t j = 0; j < k; ++j) {
      if (distances[i][j] < 0) {
        throw DomainError("metric: negative distance d(" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (distances[i][j] != distances[j][i]) {
        throw DomainError("metric: asymmetric pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (std::size_t m = 0; m < k; ++m) {
        if (distances[i][j] > distances[i][m] + distances[m][j]) {
          throw DomainError("metric: triangle inequality fails for d(" + std::to_string(i) + "," +
                            std::to_string(j) + ") via " + std::to_string(m));
        }
      }
}

FiniteMetricSpace FiniteMetricSpace::scaled(const Rational& factor) const {
  FiniteMetricSpace out = *this;
  for (auto& row : out.distances)
    for (auto& d : row) d *= factor;
  if (out.volume && degree) {
    Rational f = 1;
    for (int i = 0; i < *degree; ++i) f *= factor;
    *out.volume *= f;
  }
  return out;
}

FiniteMetricSpace FiniteMetricSpace::relabeled(const std::vector<std::size_t>& order) const {
  FiniteMetricSpace out = *this;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = 0; j < order.size(); ++j) out.distances[i][j] = distances[order[i]][order[j]];
  return out;
}

FiniteMetricSpace FiniteMetricSpace::cycle_graph(std::size_t k, const Rational& circumference) {
  if (k < 3) throw DomainError("cycle graph needs at least 3 points");
  FiniteMetricSpace out;
  out.degree = 1;
  out.volume = circumference;
  out.distances.assign(k, std::vector<Rational>(k, Rational(0)));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t steps = i > j ? i - j : j - i;
      steps = std::min(steps, k - steps);
      out.distances[i][j] = circumference * Rational(static_cast<long long>(steps), static_cast<long long>(k));
    }
  return out;
}

FiniteMetricSpace FiniteMetricSpace::from_graph(std::size_t vertices,
                                                const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                                const std::vector<Rational>& lengths) {
  if (edges.size() != lengths.size()) throw DomainError("graph metric: one length per edge expected");
  std::vector<std::vector<std::pair<std::size_t, Rational>>> adj(vertices);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [a, b] = edges[e];
    if (a >= vertices || b >= vertices) throw DomainError("graph metric: edge endpoint out of range");
    if (lengths[e] < 0) throw DomainError("graph metric: negative edge length");
    adj[a].emplace_back(b, lengths[e]);
    adj[b].emplace_back(a, lengths[e]);
  }
  FiniteMetricSpace out;
  out.distances.assign(vertices, std::vector<Rational>(vertices, Rational(0)));
  using Item = std::pair<Rational, std::size_t>;
  for (std::size_t s = 0; s < vertices; ++s) {
    std::vector<std::optional<Rational>> dist(vertices);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[s] = Rational(0);
    queue.emplace(Rational(0), s);
    while (!queue.empty()) {
      auto [d, v] = queue.top();
      queue.pop();
      if (d != *dist[v]) continue;
      for (const auto& [w, len] : adj[v]) {
        Rational nd = d + len;
        if (!dist[w] || nd < *dist[w]) {
          dist[w] = nd;
          queue.emplace(nd, w);
        }
      }
    }
    for (std::size_t t = 0; t < vertices; ++t) {
      if (!dist[t]) throw DomainError("graph metric: graph is disconnected");
      out.distances[s][t] = *dist[t];
    }
  }
  return out;
}

FiniteMetricSpace FiniteMetricSpace::spherical(const std::vector<std::vector<double>>& unit_points) {
  FiniteMetricSpace out;
  const std::size_t k = unit_points.size();
  if (k > 0) out.degree = static_cast<int>(unit_points[0].size()) - 1;
  out.distances.assign(k, std::vector<Rational>(k, Rational(0)));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < unit_points[i].size(); ++c) dot += unit_points[i][c] * unit_points[j][c];
      dot = std::clamp(dot, -1.0, 1.0);
      Rational d = rational_from_double(std::acos(dot));
      out.distances[i][j] = d;
      out.distances[j][i] = d;
    }
  return out;
}

std::vector<std::vector<double>> icosahedron_vertices() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<std::vector<double>> pts;
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1}) {
      pts.push_back({0.0, s1 * 1.0, s2 * phi});
      pts.push_back({s1 * 1.0, s2 * phi, 0.0});
      pts.push_back({s2 * phi, 0.0, s1 * 1.0});
    }
  const double norm = std::sqrt(1.0 + phi * phi);
  for (auto& p : pts)
    for (auto& c : p) c /= norm;
  return pts;
}

std::vector<std::vector<double>> octahedron_vertices() {
  return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

namespace {

/// Index of a sorted vertex tuple in the combinatorial number system.
std::uint64_t combo_index(const std::uint32_t* v, int len, const std::vector<std::vector<std::uint64_t>>& binom) {
  std::uint64_t idx = 0;
  for (int i = 0; i < len; ++i) idx += binom[v[i]][static_cast<std::size_t>(i) + 1];
  return idx;
}

struct DimensionLevel {
  int width = 0;                      // vertices per simplex
  std::vector<std::uint32_t> verts;   // flat, in filtration order
  std::vector<std::uint32_t> value;   // diameter rank, in filtration order
  std::vector<std::int64_t> position; // combo index -> filtration position (or -1)

  std::size_t count() const { return value.size(); }
  const std::uint32_t* simplex(std::size_t i) const { return verts.data() + i * static_cast<std::size_t>(width); }
};

using Column = std::vector<std::uint32_t>;  // row positions, strictly decreasing

void add_column(Column& target, const Column& other) {
  Column out;
  out.reserve(target.size() + other.size());
  std::size_t i = 0, j = 0;
  while (i < target.size() && j < other.size()) {
    if (target[i] == other[j]) {
      ++i;
      ++j;
    } else if (target[i] > other[j]) {
      out.push_back(target[i++]);
    } else {
      out.push_back(other[j++]);
    }
  }
  out.insert(out.end(), target.begin() + static_cast<std::ptrdiff_t>(i), target.end());
  out.insert(out.end(), other.begin() + static_cast<std::ptrdiff_t>(j), other.end());
  target.swap(out);
}

}  // namespace

std::vector<PersistencePair> rips_persistence(const FiniteMetricSpace& space, int max_degree) {
  if (max_degree < 0) throw DomainError("rips_persistence: max_degree must be nonnegative");
  const std::size_t k = space.size();
  const int top = max_degree + 1;
  if (k >= (std::size_t{1} << 16)) throw BudgetExceeded("rips_persistence: too many points");
  if (static_cast<int>(k) >= top + 1) {
    std::size_t top_count = binomial(static_cast<int>(k), top + 1);
    if (top_count > kRipsSimplexBudget) {
      std::ostringstream msg;
      msg << "rips_persistence: C(" << k << "," << top + 1 << ") = " << top_count << " exceeds the budget of "
          << kRipsSimplexBudget << " simplices; subsample to fewer points or lower the degree";
      throw BudgetExceeded(msg.str());
    }
  }
  space.validate();
  std::vector<PersistencePair> pairs;
  if (k == 0) return pairs;

  // Rank the distinct distances so the reduction works on integers.
  std::vector<Rational> values;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) values.push_back(space(i, j));
  values.push_back(Rational(0));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<std::vector<std::uint32_t>> rank(k, std::vector<std::uint32_t>(k, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      rank[i][j] = static_cast<std::uint32_t>(std::lower_bound(values.begin(), values.end(), space(i, j)) -
                                              values.begin());
    }
  std::uint32_t cutoff = std::numeric_limits<std::uint32_t>::max();
  for (std::size_t i = 0; i < k; ++i) cutoff = std::min(cutoff, *std::max_element(rank[i].begin(), rank[i].end()));

  std::vector<std::vector<std::uint64_t>> binom(k + 1, std::vector<std::uint64_t>(static_cast<std::size_t>(top) + 2, 0));
  for (std::size_t n = 0; n <= k; ++n) {
    binom[n][0] = 1;
    for (std::size_t r = 1; r < binom[n].size(); ++r)
      binom[n][r] = n == 0 ? 0 : binom[n - 1][r - 1] + binom[n - 1][r];
  }

  // Enumerate simplices up to dimension `top` below the cutoff, depth first in
  // lexicographic order, then sort each dimension stably by diameter.
  std::vector<DimensionLevel> levels(static_cast<std::size_t>(top) + 1);
  for (int d = 0; d <= top; ++d) levels[static_cast<std::size_t>(d)].width = d + 1;
  std::vector<std::uint32_t> stack;
  auto extend = [&](auto&& self, std::uint32_t diam) -> void {
    const int d = static_cast<int>(stack.size()) - 1;
    auto& level = levels[static_cast<std::size_t>(d)];
    level.verts.insert(level.verts.end(), stack.begin(), stack.end());
    level.value.push_back(diam);
    if (d == top) return;
    for (std::uint32_t w = stack.back() + 1; w < k; ++w) {
      std::uint32_t nd = diam;
      bool ok = true;
      for (auto v : stack) {
        nd = std::max(nd, rank[v][w]);
        if (nd > cutoff) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      stack.push_back(w);
      self(self, nd);
      stack.pop_back();
    }
  };
  for (std::uint32_t v = 0; v < k; ++v) {
    stack.assign(1, v);
    extend(extend, 0);
  }
  for (auto& level : levels) {
    std::vector<std::size_t> order(level.count());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (level.value[a] != level.value[b]) return level.value[a] < level.value[b];
      return std::lexicographical_compare(level.simplex(a), level.simplex(a) + level.width, level.simplex(b),
                                          level.simplex(b) + level.width);
    });
    std::vector<std::uint32_t> verts;
    std::vector<std::uint32_t> value;
    verts.reserve(level.verts.size());
    value.reserve(level.value.size());
    for (auto i : order) {
      verts.insert(verts.end(), level.simplex(i), level.simplex(i) + level.width);
      value.push_back(level.value[i]);
    }
    level.verts.swap(verts);
    level.value.swap(value);
  }
  for (int d = 0; d < top; ++d) {
    auto& level = levels[static_cast<std::size_t>(d)];
    level.position.assign(binom[k][static_cast<std::size_t>(d) + 1], -1);
    for (std::size_t i = 0; i < level.count(); ++i)
      level.position[combo_index(level.simplex(i), level.width, binom)] = static_cast<std::int64_t>(i);
  }

  auto vertex_list = [&](int d, std::size_t i) {
    const auto& level = levels[static_cast<std::size_t>(d)];
    std::vector<std::size_t> out(level.simplex(i), level.simplex(i) + level.width);
    return out;
  };

  // Reduce from the top dimension down, clearing columns whose simplex is
  // already known to be a pivot of the dimension above.
  std::vector<std::vector<bool>> is_pivot_row(static_cast<std::size_t>(top) + 1);
  std::vector<std::vector<PersistencePair>> by_degree(static_cast<std::size_t>(top));
  for (int d = top; d >= 1; --d) {
    const auto& level = levels[static_cast<std::size_t>(d)];
    const auto& below = levels[static_cast<std::size_t>(d) - 1];
    std::vector<std::int64_t> pivot_owner(below.count(), -1);
    std::vector<Column> reduced(level.count());
    const std::vector<bool>* cleared =
        d < top ? &is_pivot_row[static_cast<std::size_t>(d)] : nullptr;
    is_pivot_row[static_cast<std::size_t>(d) - 1].assign(below.count(), false);
    std::vector<std::uint32_t> facet(static_cast<std::size_t>(d));
    for (std::size_t j = 0; j < level.count(); ++j) {
      if (cleared && (*cleared)[j]) continue;
      const std::uint32_t* s = level.simplex(j);
      Column col;
      col.reserve(static_cast<std::size_t>(d) + 1);
      for (int drop = 0; drop <= d; ++drop) {
        int w = 0;
        for (int i = 0; i <= d; ++i)
          if (i != drop) facet[static_cast<std::size_t>(w++)] = s[i];
        auto pos = below.position[combo_index(facet.data(), d, binom)];
        col.push_back(static_cast<std::uint32_t>(pos));
      }
      std::sort(col.begin(), col.end(), std::greater<>());
      while (!col.empty() && pivot_owner[col.front()] >= 0) {
        add_column(col, reduced[static_cast<std::size_t>(pivot_owner[col.front()])]);
      }
      if (col.empty()) continue;
      const std::uint32_t low = col.front();
      pivot_owner[low] = static_cast<std::int64_t>(j);
      is_pivot_row[static_cast<std::size_t>(d) - 1][low] = true;
      PersistencePair pair;
      pair.degree = d - 1;
      pair.birth = values[below.value[low]];
      pair.death = values[level.value[j]];
      for (auto row : col) pair.representative.push_back(vertex_list(d - 1, row));
      std::sort(pair.representative.begin(), pair.representative.end());
      by_degree[static_cast<std::size_t>(d) - 1].push_back(std::move(pair));
      reduced[j] = std::move(col);
    }
  }
  // Essential classes: positive simplices never killed. Above the cutoff the
  // complex is a cone, so only components can remain.
  const auto& vertices = levels[0];
  for (std::size_t i = 0; i < vertices.count(); ++i) {
    if (top >= 1 && is_pivot_row[0][i]) continue;
    PersistencePair pair;
    pair.degree = 0;
    pair.birth = values[vertices.value[i]];
    pair.representative.push_back(vertex_list(0, i));
    by_degree[0].push_back(std::move(pair));
  }
  for (int d = 0; d <= max_degree; ++d) {
    auto& list = by_degree[static_cast<std::size_t>(d)];
    std::stable_sort(list.begin(), list.end(), [](const PersistencePair& a, const PersistencePair& b) {
      if (a.birth != b.birth) return a.birth < b.birth;
      if (a.death.has_value() != b.death.has_value()) return a.death.has_value();
      return a.death && *a.death < *b.death;
    });
    for (auto& p : list) pairs.push_back(std::move(p));
  }
  return pairs;
}

FillRadEstimate fillrad_estimate(const FiniteMetricSpace& space, std::optional<int> degree) {
  int n = degree ? *degree : space.degree.value_or(-1);
  if (n < 1) throw DomainError("fillrad_estimate: the fundamental degree must be a positive integer");
  auto pairs = rips_persistence(space, n);
  const PersistencePair* best = nullptr;
  for (const auto& pair : pairs) {
    if (pair.degree != n || !pair.death || pair.persistence() <= 0) continue;
    if (!best || pair.persistence() > best->persistence() ||
        (pair.persistence() == best->persistence() && *pair.death > *best->death)) {
      best = &pair;
    }
  }
  if (!best) throw DomainError("fillrad_estimate: no persistent class in degree " + std::to_string(n));
  FillRadEstimate out;
  out.degree = n;
  out.pair = *best;
  out.value = *best->death / 2;
  out.convention =
      "the nu-neighborhood is modeled by the flag complex at threshold 2*nu; estimate = death threshold / 2 of "
      "the most persistent class in degree " + std::to_string(n);
  return out;
}

ReferenceConstants reference_constants(int n) {
  if (n < 1) throw DomainError("reference_constants: n must be at least 1");
  ReferenceConstants c;
  c.n = n;
  c.sphere_fillrad = 0.5 * std::acos(-1.0 / (n + 1));
  BigInt denom = BigInt(n + 1) << (n + 1);
  c.c_n = Rational(BigInt(1), denom);
  return c;
}

bool AuditReport::passed() const {
  return std::all_of(clauses.begin(), clauses.end(),
                     [](const AuditClause& c) { return c.skipped || c.informational || c.passed; });
}

const AuditClause* AuditReport::clause(const std::string& name) const {
  for (const auto& c : clauses)
    if (c.name == name) return &c;
  return nullptr;
}

AuditReport inequality_audit(const FiniteMetricSpace& space, const std::optional<SweepoutMeasurements>& sweep,
                             std::optional<int> degree, double tolerance) {
  space.validate();
  return inequality_audit(space, fillrad_estimate(space, degree), sweep, tolerance);
}

AuditReport inequality_audit(const FiniteMetricSpace& space, const FillRadEstimate& estimate,
                             const std::optional<SweepoutMeasurements>& sweep, double tolerance) {
  AuditReport report;
  report.estimate = estimate;
  const double est = to_double(estimate.value);
  auto make = [&](std::string name, std::string inequality, double rhs) {
    AuditClause c;
    c.name = std::move(name);
    c.inequality = std::move(inequality);
    c.lhs = est;
    c.rhs = rhs;
    c.tolerance = tolerance;
    c.passed = est <= rhs + tolerance;
    return c;
  };
  report.clauses.push_back(make("diameter", "FillRad(M) <= diam(M)/3", to_double(space.diameter()) / 3.0));
  if (space.volume) {
    const int n = estimate.degree;
    report.clauses.push_back(
        make("volume", "FillRad(M) <= n vol(M)^(1/n)", n * std::pow(to_double(*space.volume), 1.0 / n)));
  } else {
    AuditClause c;
    c.name = "volume";
    c.inequality = "FillRad(M) <= n vol(M)^(1/n)";
    c.skipped = true;
    c.notice = "no volume metadata";
    report.clauses.push_back(c);
  }
  const char* uw = "FillRad(M) <= UW(M)/2";
  const char* w = "FillRad(M) <= W(M)/2";
  const char* lower = "c_n W(M) <= FillRad(M)";
  if (sweep) {
    report.clauses.push_back(make("urysohn", uw, sweep->urysohn_upper / 2.0));
    report.clauses.push_back(make("waist", w, sweep->waist_upper / 2.0));
    AuditClause c;
    c.name = "waist_lower_ledger";
    c.inequality = lower;
    c.informational = true;
    c.lhs = to_double(reference_constants(estimate.degree).c_n) * sweep->waist_upper;
    c.rhs = est;
    c.tolerance = tolerance;
    c.passed = c.lhs <= c.rhs + tolerance;
    c.notice = "the measured waist is an upper bound, so this comparison is a consistency flag only";
    report.clauses.push_back(c);
  } else {
    for (auto [name, text] : {std::pair{"urysohn", uw}, std::pair{"waist", w}, std::pair{"waist_lower_ledger", lower}}) {
      AuditClause c;
      c.name = name;
      c.inequality = text;
      c.skipped = true;
      c.notice = "no sweepout measurements supplied";
      report.clauses.push_back(c);
    }
  }
  return report;
}

}  // namespace sweepout
