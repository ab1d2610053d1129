#include "sweepout/homological_filling.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <sstream>

namespace sweepout {

namespace {

std::size_t cells_in(const ChainComplex& c, int k) {
  if (k < 0 || k > c.top_dimension()) return 0;
  return c.count(k);
}

// Matrix of the boundary map from k-chains to (k-1)-chains, mod 2.
Z2Matrix z2_boundary(const ChainComplex& c, int k) {
  Z2Matrix m(cells_in(c, k - 1), cells_in(c, k));
  if (k <= 0) return m;
  for (std::size_t j = 0; j < m.num_cols(); ++j) {
    for (const auto& [face, coeff] : c.boundary_coefficients(k, j, Ring::Z2)) {
      if (coeff % 2 != 0) m.cols[j].flip(face);
    }
  }
  return m;
}

BitVector bits_of(const ChainVector& chain, std::size_t size) {
  BitVector b(size);
  for (const auto& [cell, coeff] : chain.coeffs) {
    if (cell >= size) throw DomainError("chain refers to a cell outside the ambient complex");
    if (coeff % 2 != 0) b.flip(cell);
  }
  return b;
}

ChainVector chain_of(const BitVector& b, int degree) {
  ChainVector c(degree, Ring::Z2);
  for (auto i : b.support()) c.add(i, 1);
  return c;
}

ChainVector mod2(const ChainVector& chain) {
  ChainVector c(chain.degree, Ring::Z2);
  for (const auto& [cell, coeff] : chain.coeffs)
    if (coeff % 2 != 0) c.add(cell, 1);
  return c;
}

/** Weights of one degree as integers over a common denominator. */
struct ScaledWeights {
  std::vector<std::int64_t> values;
  Rational scale = 1;

  explicit ScaledWeights(const std::vector<Rational>& weights) {
    BigInt l = 1;
    for (const auto& w : weights) l = boost::multiprecision::lcm(l, BigInt(denominator(w)));
    BigInt total = 0;
    for (const auto& w : weights) {
      BigInt s = numerator(w) * (l / denominator(w));
      total += s;
      values.push_back(0);
      if (total > BigInt(std::numeric_limits<std::int64_t>::max() / 4)) {
        throw DomainError("cell weights are too fine to be summed exactly in 64 bits");
      }
      values.back() = s.convert_to<std::int64_t>();
    }
    scale = Rational(l);
  }

  std::int64_t sum(const BitVector& b) const {
    std::int64_t s = 0;
    for (auto i : b.support()) s += values[i];
    return s;
  }
  Rational to_rational(std::int64_t s) const { return Rational(s) / scale; }
};

const std::vector<Rational>& weights_of(const ChainWeighting& w, int k) {
  static const std::vector<Rational> empty;
  if (k < 0 || static_cast<std::size_t>(k) >= w.per_degree.size()) return empty;
  return w.per_degree[static_cast<std::size_t>(k)];
}

}  // namespace

ChainWeighting ChainWeighting::unit(const ChainComplex& complex) {
  ChainWeighting w;
  for (int k = 0; k <= complex.top_dimension(); ++k) w.per_degree.emplace_back(complex.count(k), Rational(1));
  return w;
}

ChainWeighting ChainWeighting::from_geometry(const GluedComplex& complex) {
  ChainWeighting w;
  for (int k = 0; k <= complex.dimension(); ++k) {
    std::vector<Rational> row;
    for (std::size_t id = 0; id < complex.cell_count(k); ++id) {
      const auto& cell = complex.representative(k, id);
      const auto& chart = complex.charts()[static_cast<std::size_t>(cell.chart)];
      Rational v = 1;
      for (std::size_t a = 0; a < cell.spans.size(); ++a) {
        const auto [lo, hi] = cell.spans[a];
        if (lo != hi) v *= chart.grids[a][hi] - chart.grids[a][lo];
      }
      row.push_back(v);
    }
    w.per_degree.push_back(std::move(row));
  }
  return w;
}

const Rational& ChainWeighting::operator()(int k, std::size_t cell) const {
  const auto& row = weights_of(*this, k);
  if (cell >= row.size()) throw DomainError("no weight for cell " + std::to_string(cell) + " of degree " + std::to_string(k));
  return row[cell];
}

Rational ChainWeighting::weight(const ChainVector& chain) const {
  Rational total = 0;
  for (const auto& [cell, coeff] : chain.coeffs) {
    if (chain.ring == Ring::Z2) {
      if (coeff % 2 != 0) total += (*this)(chain.degree, cell);
    } else {
      total += (*this)(chain.degree, cell) * (coeff < 0 ? -coeff : coeff);
    }
  }
  return total;
}

Rational ChainWeighting::total() const {
  Rational t = 0;
  for (const auto& row : per_degree)
    for (const auto& w : row) t += w;
  return t;
}

void ChainWeighting::validate(const ChainComplex& complex) const {
  for (int k = 0; k <= complex.top_dimension(); ++k) {
    const auto& row = weights_of(*this, k);
    if (row.size() != complex.count(k)) {
      throw DomainError("weighting has " + std::to_string(row.size()) + " entries in degree " + std::to_string(k) +
                        ", the complex has " + std::to_string(complex.count(k)) + " cells");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] <= 0) throw DomainError("weight of cell " + std::to_string(i) + " in degree " + std::to_string(k) + " is not positive");
    }
  }
}

FillingSolver::FillingSolver(const ChainComplex& ambient, int k, const ChainWeighting& weights, std::size_t exact_limit)
    : k_(k), cells_(cells_in(ambient, k + 1)), exact_limit_(exact_limit) {
  if (k < 0 || k > ambient.top_dimension()) throw DomainError("filling degree outside the ambient complex");
  const auto& w = weights_of(weights, k + 1);
  if (w.size() != cells_) throw DomainError("weighting does not match the ambient in degree " + std::to_string(k + 1));
  ScaledWeights sw(w);
  scaled_ = sw.values;
  scale_ = sw.scale;
  reduction_.emplace(z2_boundary(ambient, k + 1));
  // Reduced echelon form, so that every basis vector owns a cell no other touches.
  std::vector<BitVector> basis = reduction_->kernel();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto pivot = *basis[i].highest();
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (j != i && basis[j].get(pivot)) basis[j] ^= basis[i];
  }
  std::sort(basis.begin(), basis.end(), [](const BitVector& a, const BitVector& b) { return *a.highest() < *b.highest(); });
  std::vector<std::optional<std::size_t>> last(cells_);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    kernel_.push_back(basis[i].support());
    for (auto c : kernel_.back()) last[c] = i;
  }
  settled_.resize(kernel_.size());
  for (std::size_t c = 0; c < cells_; ++c) {
    if (last[c]) {
      settled_[*last[c]].push_back(c);
    } else {
      settled_first_.push_back(c);
    }
  }
}

FillingSolver::Solution FillingSolver::solve(const BitVector& b) const {
  Solution s;
  std::optional<BitVector> x0;
  if (cells_ == 0) {
    if (b.any()) return s;
    x0 = BitVector(0);
  } else {
    x0 = reduction_->solve(b);
    if (!x0) return s;
  }
  std::vector<char> cur(cells_, 0);
  std::int64_t w = 0;
  for (auto i : x0->support()) {
    cur[i] = 1;
    w += scaled_[i];
  }
  auto toggle = [&](const std::vector<std::size_t>& support) {
    for (auto c : support) {
      if (cur[c]) {
        cur[c] = 0;
        w -= scaled_[c];
      } else {
        cur[c] = 1;
        w += scaled_[c];
      }
    }
  };
  bool improved = true;
  while (improved) {
    improved = false;
    for (const auto& support : kernel_) {
      std::int64_t delta = 0;
      for (auto c : support) delta += cur[c] ? -scaled_[c] : scaled_[c];
      if (delta < 0) {
        toggle(support);
        improved = true;
      }
    }
  }
  if (exact()) {
    // Branch and bound over the kernel coefficients, starting from x0. A cell's
    // value is final once the last basis vector touching it is decided; the
    // descent result above is the incumbent, replaced only by strictly lighter
    // solutions.
    auto best = cur;
    auto best_w = w;
    std::vector<char> x(cells_, 0);
    for (auto i : x0->support()) x[i] = 1;
    auto settled_weight = [&](const std::vector<std::size_t>& cells) {
      std::int64_t s = 0;
      for (auto c : cells)
        if (x[c]) s += scaled_[c];
      return s;
    };
    const std::size_t d = kernel_.size();
    auto search = [&](auto& self, std::size_t i, std::int64_t lower) -> void {
      if (lower >= best_w) return;
      if (i == d) {
        best_w = lower;
        best = x;
        return;
      }
      for (int choice = 0; choice < 2; ++choice) {
        if (choice) for (auto c : kernel_[i]) x[c] ^= 1;
        self(self, i + 1, lower + settled_weight(settled_[i]));
        if (choice) for (auto c : kernel_[i]) x[c] ^= 1;
      }
    };
    search(search, 0, settled_weight(settled_first_));
    cur = std::move(best);
    w = best_w;
  }
  s.solvable = true;
  s.x = BitVector(cells_);
  for (std::size_t i = 0; i < cells_; ++i)
    if (cur[i]) s.x.set(i);
  s.weight = Rational(w) / scale_;
  return s;
}

FillingResult min_filling(const ChainVector& b, const ChainComplex& ambient, const ChainWeighting& weights) {
  const int k = b.degree;
  if (k < 0 || k > ambient.top_dimension()) throw DomainError("min_filling: degree outside the ambient complex");
  const auto bits = bits_of(b, ambient.count(k));
  if (z2_boundary(ambient, k).apply(bits).any()) throw DomainError("min_filling: the chain is not a cycle");
  FillingSolver solver(ambient, k, weights);
  FillingResult r;
  r.solution_dimension = solver.solution_dimension();
  r.chain = ChainVector(k + 1, Ring::Z2);
  auto s = solver.solve(bits);
  if (!s.solvable) {
    r.note = "not a boundary: no filling exists";
    return r;
  }
  r.solvable = true;
  r.chain = chain_of(s.x, k + 1);
  r.weight = s.weight;
  r.exact = solver.exact();
  if (!r.exact) {
    r.note = "solution space of dimension " + std::to_string(r.solution_dimension) + " exceeds " +
             std::to_string(FillingSolver::kExactLimit) + "; best found by descent";
  }
  return r;
}

namespace {

// Fundamental cycles of a shortest-path forest of the 1-skeleton.
std::vector<BitVector> fundamental_cycles(const ChainComplex& c, const ScaledWeights& w) {
  const std::size_t nv = cells_in(c, 0);
  const std::size_t ne = cells_in(c, 1);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nv);  // (neighbour, edge)
  std::vector<std::pair<std::size_t, std::size_t>> ends(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    std::vector<std::size_t> vs;
    for (const auto& inc : c.boundary(1, e)) vs.push_back(inc.face);
    if (vs.size() != 2 || vs[0] == vs[1]) continue;
    ends[e] = {vs[0], vs[1]};
    adj[vs[0]].push_back({vs[1], e});
    adj[vs[1]].push_back({vs[0], e});
  }
  const auto none = std::numeric_limits<std::size_t>::max();
  std::vector<std::int64_t> dist(nv, std::numeric_limits<std::int64_t>::max());
  std::vector<std::size_t> parent_edge(nv, none);
  std::vector<char> done(nv, 0);
  for (std::size_t root = 0; root < nv; ++root) {
    if (done[root]) continue;
    using Item = std::pair<std::int64_t, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[root] = 0;
    pq.push({0, root});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      done[u] = 1;
      for (auto [v, e] : adj[u]) {
        auto nd = d + w.values[e];
        if (!done[v] && (nd < dist[v] || (nd == dist[v] && e < parent_edge[v]))) {
          dist[v] = nd;
          parent_edge[v] = e;
          pq.push({nd, v});
        }
      }
    }
  }
  auto path_to_root = [&](std::size_t v) {
    BitVector p(ne);
    while (parent_edge[v] != none) {
      auto e = parent_edge[v];
      p.flip(e);
      v = ends[e].first == v ? ends[e].second : ends[e].first;
    }
    return p;
  };
  std::vector<char> tree(ne, 0);
  for (auto e : parent_edge)
    if (e != none) tree[e] = 1;
  std::vector<BitVector> out;
  for (std::size_t e = 0; e < ne; ++e) {
    if (tree[e]) continue;
    BitVector cyc(ne);
    if (ends[e].first == ends[e].second) {
      // loops and degenerate edges are cycles on their own
      cyc.set(e);
    } else {
      cyc = path_to_root(ends[e].first);
      cyc ^= path_to_root(ends[e].second);
      cyc.flip(e);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

struct CyclePair {
  std::int64_t weight;
  std::optional<Rational> fill;
};

}  // namespace

FillingFunctionTable fh_table(const ChainComplex& ambient, int k, const ChainWeighting& weights, const FhOptions& options) {
  if (k < 0 || k > ambient.top_dimension()) throw DomainError("fh: degree outside the ambient complex");
  weights.validate(ambient);
  FillingFunctionTable t;
  t.k = k;
  const ScaledWeights cw(weights_of(weights, k));
  FillingSolver solver(ambient, k, weights);
  t.fillings_exact = solver.exact();
  if (!t.fillings_exact) {
    t.notices.push_back("fillings live in a coset of dimension " + std::to_string(solver.solution_dimension()) +
                        "; their volumes are upper bounds");
  }
  Z2Reduction cycles(z2_boundary(ambient, k));
  const auto& basis = cycles.kernel();
  t.cycle_space_dimension = basis.size();
  const bool small = basis.size() < 63 && (std::uint64_t{1} << basis.size()) <= options.max_exhaustive;
  t.exhaustive = options.mode != FhMode::Sampled && small;
  if (options.mode == FhMode::Exhaustive && !small) {
    t.notices.push_back("cycle space of dimension " + std::to_string(basis.size()) +
                        " is too large to enumerate; sampled instead");
  }

  std::vector<CyclePair> pairs;
  auto consider = [&](const BitVector& z) {
    auto s = solver.solve(z);
    pairs.push_back({cw.sum(z), s.solvable ? std::optional<Rational>(s.weight) : std::nullopt});
  };
  if (t.exhaustive) {
    BitVector cur(cells_in(ambient, k));
    const std::uint64_t total = std::uint64_t{1} << basis.size();
    for (std::uint64_t i = 1; i < total; ++i) {
      cur ^= basis[static_cast<std::size_t>(std::countr_zero(i))];
      consider(cur);
    }
  } else {
    std::vector<BitVector> pool(basis.begin(), basis.end());
    const auto up = z2_boundary(ambient, k + 1);
    for (const auto& col : up.cols)
      if (col.any()) pool.push_back(col);
    if (k == 1) {
      auto f = fundamental_cycles(ambient, cw);
      pool.insert(pool.end(), f.begin(), f.end());
    }
    std::set<std::vector<std::size_t>> seen;
    std::vector<BitVector> candidates;
    auto add = [&](const BitVector& z) {
      if (z.any() && seen.insert(z.support()).second) candidates.push_back(z);
    };
    for (const auto& z : pool) add(z);
    if (!pool.empty()) {
      std::mt19937_64 rng(options.seed);
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      std::uniform_int_distribution<int> terms(2, 4);
      for (std::size_t s = 0; s < options.samples; ++s) {
        BitVector z = pool[pick(rng)];
        for (int j = terms(rng); j > 1; --j) z ^= pool[pick(rng)];
        add(z);
      }
    }
    for (const auto& z : candidates) consider(z);
    t.notices.push_back("sampled " + std::to_string(candidates.size()) + " cycles: values are lower bounds");
  }
  t.candidates = pairs.size();

  std::sort(pairs.begin(), pairs.end(), [](const CyclePair& a, const CyclePair& b) { return a.weight < b.weight; });
  std::optional<Rational> sup = Rational(0);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!pairs[i].fill) {
      sup.reset();
    } else if (sup && *pairs[i].fill > *sup) {
      sup = pairs[i].fill;
    }
    if (i + 1 == pairs.size() || pairs[i + 1].weight != pairs[i].weight) {
      t.steps.push_back({cw.to_rational(pairs[i].weight), sup, i + 1});
    }
  }
  return t;
}

FillingFunctionTable fh_profile(const ChainComplex& ambient, int k, const std::vector<Rational>& grid,
                                const ChainWeighting& weights, const FhOptions& options) {
  for (const auto& v : grid)
    if (v < 0) throw DomainError("fh: grid values must be nonnegative");
  auto t = fh_table(ambient, k, weights, options);
  for (const auto& v : grid) {
    FhEntry e;
    e.v = v;
    e.exact = t.exhaustive && t.fillings_exact;
    e.value = Rational(0);
    auto it = std::upper_bound(t.steps.begin(), t.steps.end(), v, [](const Rational& x, const FhStep& s) { return x < s.weight; });
    if (it == t.steps.begin()) {
      e.notice = "no nonzero cycle of weight <= " + format_rational(v) + "; empty supremum reported as 0";
    } else {
      e.value = std::prev(it)->sup;
      e.cycles = std::prev(it)->cycles;
    }
    t.entries.push_back(std::move(e));
  }
  return t;
}

std::string to_string(FhStatus status) {
  switch (status) {
    case FhStatus::Exact: return "exact";
    case FhStatus::UpperBound: return "upper-bound";
    case FhStatus::LowerBound: return "lower-bound";
    case FhStatus::Approximate: return "approximate";
    case FhStatus::Extrapolated: return "extrapolated";
  }
  return "unknown";
}

FhValue fh_value(const FillingFunctionTable& table, const std::optional<Rational>& v) {
  FhValue out;
  if (!v) {
    out.value.reset();
    out.note = "infinite argument";
    return out;
  }
  if (*v < 0) throw DomainError("fh: negative argument");
  if (*v == 0) {
    out.value = Rational(0);
    return out;
  }
  if (!table.steps.empty() || table.entries.empty()) {
    if (table.exhaustive) {
      out.status = table.fillings_exact ? FhStatus::Exact : FhStatus::UpperBound;
    } else {
      out.status = table.fillings_exact ? FhStatus::LowerBound : FhStatus::Approximate;
    }
    auto it = std::upper_bound(table.steps.begin(), table.steps.end(), *v,
                               [](const Rational& x, const FhStep& s) { return x < s.weight; });
    if (it == table.steps.begin()) {
      out.value = Rational(0);
      out.note = "no nonzero cycle of weight <= " + format_rational(*v);
    } else {
      out.value = std::prev(it)->sup;
    }
    return out;
  }
  // Grid only: FH is nondecreasing, so the next grid value above bounds it.
  std::vector<const FhEntry*> sorted;
  for (const auto& e : table.entries) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](const FhEntry* a, const FhEntry* b) { return a->v < b->v; });
  auto it = std::lower_bound(sorted.begin(), sorted.end(), *v, [](const FhEntry* e, const Rational& x) { return e->v < x; });
  if (it != sorted.end()) {
    const bool hit = (*it)->v == *v;
    out.value = (*it)->value;
    if ((*it)->exact) {
      out.status = hit ? FhStatus::Exact : FhStatus::UpperBound;
    } else {
      out.status = hit ? FhStatus::LowerBound : FhStatus::Approximate;
    }
    if (!hit) out.note = "read at the grid point " + format_rational((*it)->v);
    return out;
  }
  const auto* last = sorted.back();
  out.value = last->value;
  if (!last->value && last->exact) {
    out.status = FhStatus::Exact;
    out.note = "infinite from " + format_rational(last->v) + " on";
  } else {
    out.status = FhStatus::Extrapolated;
    out.note = format_rational(*v) + " lies beyond the grid; last value " + format_rational(last->v) + " used";
  }
  return out;
}

FhValue fh_bar(int k, const std::optional<Rational>& v, const FillingFunctionTable& table) {
  if (k != table.k) throw DomainError("fh_bar: table is for degree " + std::to_string(table.k));
  if (!v) return fh_value(table, std::nullopt);
  return fh_value(table, Rational(2 * (k + 1)) * *v);
}

std::string canonical_text(const CellAssignment& assignment) {
  std::ostringstream out;
  for (const auto& [key, chain] : assignment) {
    out << key.first << ' ' << key.second << ':';
    for (const auto& [cell, coeff] : chain.coeffs) {
      out << ' ' << cell;
      if (coeff != 1) out << '*' << coeff;
    }
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::size_t> odd_faces(const ChainComplex& model, int k, std::size_t cell) {
  std::vector<std::size_t> out;
  if (k == 0) return out;
  for (const auto& [face, coeff] : model.boundary_coefficients(k, cell, Ring::Z2))
    if (coeff % 2 != 0) out.push_back(face);
  return out;
}

ChainVector facet_sum(const CellAssignment& f, int k, const std::vector<std::size_t>& facets) {
  ChainVector sum(k - 1, Ring::Z2);
  for (auto face : facets) sum = sum + mod2(f.at({k - 1, face}));
  return mod2(sum);
}

/** Shortest paths in the weighted 1-skeleton, cached per source. */
class PathFinder {
 public:
  PathFinder(const ChainComplex& c, const ChainWeighting& w) : c_(c), w_(weights_of(w, 1)) {
    const std::size_t nv = cells_in(c, 0);
    adj_.resize(nv);
    for (std::size_t e = 0; e < cells_in(c, 1); ++e) {
      std::vector<std::size_t> vs;
      for (const auto& inc : c.boundary(1, e)) vs.push_back(inc.face);
      if (vs.size() != 2 || vs[0] == vs[1]) continue;
      adj_[vs[0]].push_back({vs[1], e});
      adj_[vs[1]].push_back({vs[0], e});
    }
  }

  std::optional<ChainVector> path(std::size_t from, std::size_t to) {
    ChainVector p(1, Ring::Z2);
    if (from == to) return p;
    const auto& tree = tree_from(from);
    if (!tree[to]) return std::nullopt;
    auto v = to;
    while (v != from) {
      auto [u, e] = *tree[v];
      p.add(e, 1);
      v = u;
    }
    return p;
  }

 private:
  using Parent = std::optional<std::pair<std::size_t, std::size_t>>;  // (previous vertex, edge)

  const std::vector<Parent>& tree_from(std::size_t s) {
    auto it = trees_.find(s);
    if (it != trees_.end()) return it->second;
    const std::size_t nv = adj_.size();
    std::vector<std::optional<Rational>> dist(nv);
    std::vector<Parent> parent(nv);
    std::vector<char> done(nv, 0);
    using Item = std::pair<Rational, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = Rational(0);
    pq.push({Rational(0), s});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      done[u] = 1;
      for (auto [v, e] : adj_[u]) {
        if (done[v]) continue;
        Rational nd = d + w_[e];
        if (!dist[v] || nd < *dist[v] || (nd == *dist[v] && e < parent[v]->second)) {
          dist[v] = nd;
          parent[v] = {{u, e}};
          pq.push({nd, v});
        }
      }
    }
    parent[s] = {{s, 0}};
    return trees_.emplace(s, std::move(parent)).first->second;
  }

  const ChainComplex& c_;
  const std::vector<Rational>& w_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj_;
  std::map<std::size_t, std::vector<Parent>> trees_;
};

}  // namespace

RTransformResult r_transform(const ChainComplex& ambient, const ChainWeighting& weights, const GluedComplex& model,
                             const std::vector<std::size_t>& vertex_map, const Rational& delta,
                             const RTransformOptions& options, const CellAssignment* existing) {
  weights.validate(ambient);
  const auto& K = model.chains();
  const int dim = model.dimension();
  if (vertex_map.size() != model.cell_count(0)) {
    throw DomainError("r_transform: vertex map has " + std::to_string(vertex_map.size()) + " entries for " +
                      std::to_string(model.cell_count(0)) + " model vertices");
  }
  for (auto v : vertex_map)
    if (v >= cells_in(ambient, 0)) throw DomainError("r_transform: vertex image outside the ambient");
  if (delta < 0) throw DomainError("r_transform: negative edge bound");
  if (dim > ambient.top_dimension() + 1) throw DomainError("r_transform: model dimension exceeds the ambient by more than one");

  RTransformResult r;
  r.model_dimension = dim;
  r.delta = delta;
  r.epsilon = options.epsilon_fraction * weights.total();
  r.stage_bounds.assign(static_cast<std::size_t>(std::max(dim, 1) + 1), Rational(0));
  r.stage_status.assign(r.stage_bounds.size(), FhStatus::Exact);
  if (dim >= 1) r.stage_bounds[1] = delta;
  for (int j = 2; j <= dim; ++j) {
    auto table = fh_table(ambient, j - 1, weights, options.fh);
    auto v = fh_bar(j - 1, r.stage_bounds[static_cast<std::size_t>(j - 1)], table);
    r.stage_bounds[static_cast<std::size_t>(j)] = v.value;
    r.stage_status[static_cast<std::size_t>(j)] = v.status;
    if (v.status != FhStatus::Exact && v.status != FhStatus::UpperBound) r.bounds_certified = false;
  }

  auto supplied = [&](int k, std::size_t id) -> const ChainVector* {
    if (!existing) return nullptr;
    auto it = existing->find({k, id});
    return it == existing->end() ? nullptr : &it->second;
  };
  auto within = [&](int k, const Rational& vol) {
    const auto& b = r.stage_bounds[static_cast<std::size_t>(std::max(k, 1))];
    if (k == 0 || !b) return true;
    return k == 1 ? vol <= *b : vol <= *b + r.epsilon;
  };

  PathFinder paths(ambient, weights);
  std::vector<std::optional<FillingSolver>> solvers(static_cast<std::size_t>(dim + 1));
  for (int k = 0; k <= dim; ++k) {
    for (std::size_t id = 0; id < K.count(k); ++id) {
      CellReplacement cr;
      cr.dim = k;
      cr.cell = id;
      cr.facets = odd_faces(K, k, id);
      ChainVector expected_boundary(k - 1, Ring::Z2);
      if (k == 0) {
        ChainVector point(0, Ring::Z2);
        point.add(vertex_map[id], 1);
        cr.chain = point;
      } else {
        expected_boundary = facet_sum(r.assignment, k, cr.facets);
      }
      if (const auto* given = supplied(k, id)) {
        bool ok = given->degree == k;
        if (ok && k == 0) ok = mod2(*given) == cr.chain;
        if (ok && k > 0) ok = mod2(boundary_of(ambient, mod2(*given))) == expected_boundary && within(k, weights.weight(*given));
        if (ok) {
          cr.chain = *given;
          cr.kept = true;
        }
      }
      if (!cr.kept && k == 1) {
        std::vector<std::size_t> ends;
        for (const auto& inc : K.boundary(1, id)) ends.push_back(vertex_map[inc.face]);
        if (ends.size() != 2) throw DomainError("r_transform: model edge without two endpoints");
        auto p = paths.path(ends[0], ends[1]);
        if (!p) {
          r.failure = RTransformFailure{1, id, "stage 1: the endpoints of edge " + std::to_string(id) +
                                                   " map to different components of the ambient"};
          return r;
        }
        cr.chain = *p;
        if (weights.weight(cr.chain) > delta) {
          throw DomainError("r_transform: the image of edge " + std::to_string(id) + " has length " +
                            format_rational(weights.weight(cr.chain)) + " > delta = " + format_rational(delta));
        }
      } else if (!cr.kept && k >= 2) {
        auto& solver = solvers[static_cast<std::size_t>(k)];
        if (!solver) solver.emplace(ambient, k - 1, weights);
        auto s = solver->solve(bits_of(expected_boundary, ambient.count(k - 1)));
        if (!s.solvable) {
          r.failure = RTransformFailure{k, id, "stage " + std::to_string(k) + ": the image of the boundary of " +
                                                   std::to_string(k) + "-cell " + std::to_string(id) +
                                                   " bounds no chain in the ambient"};
          return r;
        }
        cr.chain = chain_of(s.x, k);
      }
      cr.volume = k == 0 ? Rational(0) : weights.weight(cr.chain);
      cr.within_bound = within(k, cr.volume);
      r.bounds_hold = r.bounds_hold && cr.within_bound;
      r.assignment[{k, id}] = cr.chain;
      r.cells.push_back(std::move(cr));
    }
  }
  r.output = ChainVector(dim, Ring::Z2);
  for (std::size_t id = 0; id < K.count(dim); ++id) r.output = mod2(r.output + mod2(r.assignment.at({dim, id})));
  r.boundary_commutes = commutes_with_boundary(r, ambient, model);
  return r;
}

bool commutes_with_boundary(const RTransformResult& result, const ChainComplex& ambient, const GluedComplex& model) {
  const auto& K = model.chains();
  for (const auto& [key, chain] : result.assignment) {
    const auto [k, id] = key;
    if (k == 0) continue;
    auto expected = facet_sum(result.assignment, k, odd_faces(K, k, id));
    if (mod2(boundary_of(ambient, mod2(chain))) != expected) return false;
  }
  return true;
}

TheoremBounds theorem_bounds(int n, int p, const Rational& fillrad, const std::map<int, FillingFunctionTable>& tables) {
  if (n < 1 || p < 1 || p > n) throw DomainError("theorem_bounds: need 1 <= p <= n");
  if (n > 12) throw DomainError("theorem_bounds: n > 12 is outside the enumerable range");
  if (fillrad < 0) throw DomainError("theorem_bounds: negative filling radius");
  TheoremBounds tb;
  tb.n = n;
  tb.p = p;
  tb.fillrad = fillrad;
  tb.face_count = (std::size_t{1} << (n - p + 1)) * binomial(n + 1, p);
  auto cube = Chart::single_cube(std::vector<AxisGrid>(static_cast<std::size_t>(n + 1), AxisGrid::coarse()));
  for (const auto& c : cube.cells) tb.enumerated_face_count += c.dimension() == p;
  if (tb.enumerated_face_count != tb.face_count) {
    throw DomainError("theorem_bounds: face count " + std::to_string(tb.face_count) + " disagrees with the " +
                      std::to_string(tb.enumerated_face_count) + " enumerated faces");
  }
  tb.prefactor = Rational(1) / Rational(tb.face_count);

  // Composes the table lookups; `arg(j, x)` is the argument handed to degree j.
  auto compose = [&](BoundValue& out, std::optional<Rational> x, bool bar, auto arg) {
    for (int j = 1; j < p; ++j) {
      auto it = tables.find(j);
      if (it == tables.end()) {
        out.available = false;
        out.partial = true;
        out.notes.push_back("no filling table for degree " + std::to_string(j));
        out.value.reset();
        return;
      }
      std::optional<Rational> a = x ? std::optional<Rational>(arg(j, *x)) : std::nullopt;
      auto v = bar ? fh_bar(j, a, it->second) : fh_value(it->second, a);
      out.statuses.push_back(v.status);
      if (v.status == FhStatus::Extrapolated || v.status == FhStatus::LowerBound || v.status == FhStatus::Approximate) {
        out.partial = true;
        out.notes.push_back("degree " + std::to_string(j) + ": " + to_string(v.status) + (v.note.empty() ? "" : ", " + v.note));
      }
      x = v.value;
    }
    out.value = x;
  };

  compose(tb.fr3, Rational(2) * fillrad, true, [](int, const Rational& x) { return x; });
  if (tb.fr3.available && tb.fr3.value) tb.fr3.value = *tb.fr3.value * tb.prefactor;

  const Rational simplex_count = Rational(binomial(n + 1, p));
  if (p == 1) {
    tb.improved.value = Rational(2) * fillrad / simplex_count;
    tb.improved.notes.push_back("empty composition");
  } else {
    compose(tb.improved, fillrad, false,
            [](int j, const Rational& x) { return j == 1 ? Rational(6) * x : Rational(j + 1) * x; });
    if (tb.improved.available && tb.improved.value) tb.improved.value = *tb.improved.value / simplex_count;
  }
  if (p == 1) tb.fr3.notes.push_back("empty composition");
  return tb;
}

}  // namespace sweepout
