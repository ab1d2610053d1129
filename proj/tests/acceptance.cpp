// Acceptance suite: one pass/fail line per criterion, each with its own oracle.
#include "sweepout/cube_decomposition.hpp"
#include "sweepout/filling_radius.hpp"
#include "sweepout/homological_filling.hpp"
#include "sweepout/pseudo_homology.hpp"
#include "sweepout/simplex_quotient.hpp"
#include "sweepout/starfish.hpp"
#include "sweepout/sweepout_engine.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace sweepout;
using namespace testing_support;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed check; the first few failures end up in the detail line.
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass || failures < 3) detail << " [failed: " << what << "]";
    pass = false;
    ++failures;
  }
  int failures = 0;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------- fixtures

FiniteMetricSpace discrete_metric(std::size_t k) {
  FiniteMetricSpace m;
  m.distances.assign(k, std::vector<Rational>(k, Rational(1)));
  for (std::size_t i = 0; i < k; ++i) m.distances[i][i] = 0;
  return m;
}

std::vector<int> identity_labels(int dim) {
  std::vector<int> l(std::size_t{1} << dim);
  for (std::size_t i = 0; i < l.size(); ++i) l[i] = static_cast<int>(i);
  return l;
}

FillingInput labeled_filling(int dim, const std::vector<std::vector<int>>& labels,
                             const std::vector<std::vector<std::size_t>>& images, FiniteMetricSpace metric) {
  FillingInput in;
  in.P = from_labeled_cubes(dim, labels);
  in.metric = std::move(metric);
  in.vertex_images = vertex_images_from_corners(in.P, images);
  return in;
}

FillingInput labeled_filling(int dim, const std::vector<std::vector<int>>& labels, FiniteMetricSpace metric) {
  std::vector<std::vector<std::size_t>> images;
  for (const auto& l : labels) images.push_back(std::vector<std::size_t>(l.begin(), l.end()));
  return labeled_filling(dim, labels, images, std::move(metric));
}

const std::vector<std::vector<int>> kTwoCubes{{0, 1, 2, 3, 4, 5, 6, 7}, {1, 8, 3, 9, 5, 10, 7, 11}};

ChainVector reduce(const ChainVector& c) {
  ChainVector out(c.degree, Ring::Z2);
  for (const auto& [cell, coeff] : c.coeffs)
    if (coeff % 2 != 0) out.add(cell, 1);
  return out;
}

std::string str(const Rational& r) { return format_rational(r); }

// ---------------------------------------------------------------- oracles

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Faces of [-1,1]^d as words over {-, +, *}; counts the words with exactly p stars.
std::size_t ternary_face_count(int d, int p) {
  std::size_t total = 1, count = 0;
  for (int i = 0; i < d; ++i) total *= 3;
  for (std::size_t w = 0; w < total; ++w) {
    int stars = 0;
    for (std::size_t v = w; v > 0; v /= 3) stars += v % 3 == 2;
    count += stars == p;
  }
  return count;
}

// Points of {0, +-x_1, ..., +-x_m}^(m+2) whose sorted absolute values are
// (0, 0, x_1, ..., x_m).
std::size_t sorted_preimages(const std::vector<Rational>& x) {
  const std::size_t d = x.size() + 2;
  std::vector<Rational> choices{0};
  for (const auto& v : x) {
    choices.push_back(v);
    choices.push_back(-v);
  }
  std::vector<Rational> want{0, 0};
  want.insert(want.end(), x.begin(), x.end());
  std::size_t count = 0;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    std::vector<Rational> a;
    for (auto i : idx) a.push_back(abs(choices[i]));
    std::sort(a.begin(), a.end());
    count += a == want;
    std::size_t k = 0;
    while (k < d && ++idx[k] == choices.size()) idx[k++] = 0;
    if (k == d) break;
  }
  return count;
}

std::vector<Rational> random_generic(std::mt19937& rng, int n) {
  while (true) {
    std::set<Rational> vals;
    while (static_cast<int>(vals.size()) < n - 1) vals.insert(random_rational(rng, 0, 1, 97));
    vals.erase(Rational(0));
    vals.erase(Rational(1));
    if (static_cast<int>(vals.size()) == n - 1) return {vals.begin(), vals.end()};
  }
}

// Dense Z2 rank.
std::size_t dense_rank(std::vector<std::vector<bool>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pick = rank;
    while (pick < rows.size() && !rows[pick][c]) ++pick;
    if (pick == rows.size()) continue;
    std::swap(rows[pick], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r][c])
        for (std::size_t j = 0; j < cols; ++j) rows[r][j] = rows[r][j] != rows[rank][j];
    ++rank;
  }
  return rank;
}

std::vector<std::vector<std::size_t>> flag_simplices(const FiniteMetricSpace& s, const Rational& t, int d) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (static_cast<int>(cur.size()) == d + 1) {
      out.push_back(cur);
      return;
    }
    for (std::size_t v = start; v < s.size(); ++v) {
      bool ok = true;
      for (auto u : cur) ok = ok && s(u, v) <= t;
      if (!ok) continue;
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::size_t flag_boundary_rank(const FiniteMetricSpace& s, const Rational& t, int d) {
  if (d <= 0) return 0;
  auto top = flag_simplices(s, t, d);
  auto low = flag_simplices(s, t, d - 1);
  if (top.empty() || low.empty()) return 0;
  std::vector<std::vector<bool>> rows(top.size(), std::vector<bool>(low.size(), false));
  for (std::size_t i = 0; i < top.size(); ++i)
    for (std::size_t drop = 0; drop < top[i].size(); ++drop) {
      auto f = top[i];
      f.erase(f.begin() + static_cast<std::ptrdiff_t>(drop));
      rows[i][static_cast<std::size_t>(std::lower_bound(low.begin(), low.end(), f) - low.begin())] = true;
    }
  return dense_rank(rows);
}

long long flag_betti(const FiniteMetricSpace& s, const Rational& t, int d) {
  return static_cast<long long>(flag_simplices(s, t, d).size()) - static_cast<long long>(flag_boundary_rank(s, t, d)) -
         static_cast<long long>(flag_boundary_rank(s, t, d + 1));
}

// First threshold at which a positive Betti number in degree d drops back to zero.
std::optional<Rational> flag_death(const FiniteMetricSpace& s, int d) {
  std::set<Rational> values;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) values.insert(s(i, j));
  bool alive = false;
  for (const auto& t : values) {
    const auto b = flag_betti(s, t, d);
    if (b > 0) alive = true;
    if (alive && b == 0) return t;
  }
  return std::nullopt;
}

// Minimum weight over every (k+1)-chain whose Z2 boundary is b.
std::optional<Rational> brute_min_filling(const ChainComplex& c, int k, const std::vector<int>& b,
                                          const ChainWeighting& w) {
  std::optional<Rational> best;
  const std::size_t m = c.count(k + 1);
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
    std::vector<int> parity(c.count(k), 0);
    Rational total = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (!((s >> j) & 1)) continue;
      total += w(k + 1, j);
      for (const auto& inc : c.boundary(k + 1, j)) parity[inc.face] ^= (inc.coeff % 2 != 0);
    }
    if (parity == b && (!best || total < *best)) best = total;
  }
  return best;
}

std::vector<int> parity_of(const ChainVector& chain, std::size_t size) {
  std::vector<int> p(size, 0);
  for (const auto& [cell, coeff] : chain.coeffs) p[cell] ^= (coeff % 2 != 0);
  return p;
}

// Vertices: 0 = +e1, 1 = -e1, 2 = +e2, 3 = -e2, 4 = +e3, 5 = -e3.
ChainComplex octahedron() {
  return ChainComplex::from_simplices(
      {{0, 2, 4}, {0, 2, 5}, {0, 3, 4}, {0, 3, 5}, {1, 2, 4}, {1, 2, 5}, {1, 3, 4}, {1, 3, 5}});
}

std::size_t edge_between(const ChainComplex& c, std::size_t a, std::size_t b) {
  for (std::size_t e = 0; e < c.count(1); ++e) {
    auto v = c.vertices(1, e);
    std::sort(v.begin(), v.end());
    if (v == std::vector<std::size_t>{std::min(a, b), std::max(a, b)}) return e;
  }
  throw std::logic_error("no such edge");
}

ChainVector z2_chain(int degree, const std::vector<std::size_t>& cells) {
  ChainVector c(degree, Ring::Z2);
  for (auto i : cells) c.add(i, 1);
  return c;
}

// Values of a filling function table in grid order; infinity compares above everything.
bool nondecreasing(const FillingFunctionTable& t) {
  for (std::size_t i = 1; i < t.entries.size(); ++i) {
    const auto& a = t.entries[i - 1].value;
    const auto& b = t.entries[i].value;
    if (!a && b) return false;
    if (a && b && *b < *a) return false;
  }
  return true;
}

// ---------------------------------------------------------------- criteria

void criterion_1(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  int cases = 0;
  for (int n = 1; n <= 4; ++n)
    for (int p = 1; p <= n; ++p) {
      const auto v = validate_Y(n, p, Rational(1, 2));
      o.require(v.passed(), "Y(n=" + std::to_string(n) + ", p=" + std::to_string(p) + ")");
      ++cases;
    }
  const double s = seconds_since(start);
  o.require(s < 60.0, "runtime >= 60 s");
  o.detail << cases << " (n, p) pairs validated";
}

void criterion_2(Outcome& o) {
  std::size_t fibers = 0;
  for (int n = 1; n <= 4; ++n)
    for (int p = 1; p <= n; ++p) {
      const std::size_t cap = static_cast<std::size_t>(n + 1) << n;
      std::size_t max_edges = 0, at_zero = 0;
      for (const auto& cell : decomposition_cells(n, p, Piece::Z)) {
        const auto f = theta_fiber_of_cell(cell, p, Rational(1, 2));
        const auto tag = "n=" + std::to_string(n) + " p=" + std::to_string(p);
        const auto m = recognize_cube_skeleton(f.complex, p);
        o.require(m.isomorphic && m.k == f.k, tag + ": not a cube skeleton");
        o.require(fiber_words(f) == cube_skeleton_words(f.k, p), tag + ": face words");
        // p-faces of the k-cube: choose the p free axes, sign the rest.
        o.require(f.complex.cell_count(p) == binomial(static_cast<std::size_t>(f.k), static_cast<std::size_t>(p)) *
                                                 (std::size_t{1} << (f.k - p)),
                  tag + ": p-face count");
        if (p == 1) {
          const auto edges = f.complex.cell_count(1);
          const bool zero = std::all_of(f.base.begin(), f.base.end(), [](const Rational& r) { return r == 0; });
          o.require(edges <= cap, tag + ": edge count above (n+1)2^n");
          o.require((edges == cap) == zero, tag + ": maximum away from z = 0");
          max_edges = std::max(max_edges, edges);
          at_zero += zero;
        }
        ++fibers;
      }
      if (p == 1) o.require(max_edges == cap && at_zero == 1, "n=" + std::to_string(n) + ": maximum not attained");
    }
  o.detail << fibers << " fibers checked";
}

void criterion_3(Outcome& o) {
  int cases = 0;
  for (int n = 1; n <= 5; ++n)
    for (int p = 1; p <= n; ++p) {
      const auto tb = theorem_bounds(n, p, Rational(0), {});
      const std::size_t formula = (std::size_t{1} << (n - p + 1)) * binomial(static_cast<std::size_t>(n + 1), static_cast<std::size_t>(p));
      const auto oracle = ternary_face_count(n + 1, p);
      const auto tag = "n=" + std::to_string(n) + " p=" + std::to_string(p);
      o.require(tb.enumerated_face_count == formula, tag + ": enumeration");
      o.require(tb.face_count == formula, tag + ": reported constant");
      o.require(oracle == formula, tag + ": word count");
      ++cases;
    }
  o.detail << cases << " (n, p) pairs";
}

void criterion_4(Outcome& o) {
  struct Case {
    std::string name;
    std::vector<std::vector<int>> labels;
    std::size_t points;
  };
  const char* sep = "";
  for (const auto& c : {Case{"C^3", {identity_labels(3)}, 8}, Case{"two cubes", kTwoCubes, 12}}) {
    const auto start = std::chrono::steady_clock::now();
    const auto b = build_bundle(labeled_filling(3, c.labels, discrete_metric(c.points)));
    o.require(b.n_report.is_pseudomanifold() && b.n_report.closed(), c.name + ": N not closed");
    const auto a = homology_audit(b);
    o.require(a.homologous && a.witness_verified, c.name + ": no homology witness");
    // Independent check of the witness: its boundary is the difference of the two cycles.
    o.require(reduce(boundary_of(b.Q.chains(), a.witness)) == reduce(a.n_cycle - a.boundary_cycle),
              c.name + ": witness boundary");
    o.require(reduce(a.n_cycle) == reduce(n_cycle_in_ambient(b)), c.name + ": N cycle");
    const auto w = measure_waist(b);
    o.require(w.certified_max == Rational((b.n + 1) << b.n) * b.delta, c.name + ": certified bound");
    o.require(w.waist_upper <= w.certified_max, c.name + ": waist above bound");
    if (c.labels.size() == 1) o.require(w.waist_upper == w.certified_max, c.name + ": equality not attained");
    const double s = seconds_since(start);
    o.require(s < 30.0, c.name + ": runtime >= 30 s");
    o.detail << sep << c.name << " waist " << str(w.waist_upper) << "/" << str(w.certified_max) << " (" << std::fixed;
    o.detail.precision(2);
    o.detail << s << " s)";
    sep = "; ";
  }
}

void criterion_5(Outcome& o) {
  const auto b = build_bundle(labeled_filling(3, {identity_labels(3)}, discrete_metric(8)));
  std::mt19937 rng(11);
  std::optional<std::size_t> count;
  HbarFiber first;
  for (int sample = 0; sample < 10; ++sample) {
    const auto x = sample == 0 ? default_simplex_sample(b.n) : random_generic(rng, b.n);
    const auto h = hbar_fiber(b, x);
    if (sample == 0) first = h;
    if (!count) count = h.enumerated_count;
    const auto tag = "sample " + std::to_string(sample);
    o.require(h.enumerated_count == *count, tag + ": count differs");
    o.require(h.all_simple && h.pairwise_disjoint, tag + ": loops not simple and disjoint");
    o.require(h.within_bound && h.loop_bound == 4 * b.delta && h.max_loop_length <= 4 * b.delta,
              tag + ": loop longer than 4 delta");
    // Oracle: preimages of x among sorted-absolute-value points, per cube and per boundary facet.
    std::size_t facet = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      auto rest = x;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
      facet += sorted_preimages(rest);
    }
    const std::size_t oracle = b.cube_count * sorted_preimages(x) + b.boundary_facets.size() * facet;
    o.require(h.enumerated_count == oracle, tag + ": enumeration != brute force " + std::to_string(oracle));
    std::set<PointKey> keys;
    for (const auto& br : h.branches) {
      const auto t = br.point(b, x);
      keys.insert(b.T.canonical_point(t.chart, t.coords));
      o.require(simplex_quotient(b, t).coords == x, tag + ": branch off its simplex point");
    }
    o.require(keys.size() == h.branches.size(), tag + ": repeated points of T");
  }
  o.detail << "enumerated " << first.enumerated_count << " loops per sample, formula " << first.formula_count
           << ", mismatch flag " << (first.count_mismatch ? "set" : "clear");
  o.require(first.count_mismatch == (BigInt(first.enumerated_count) != first.formula_count), "mismatch flag");
}

void criterion_6(Outcome& o) {
  struct Sample {
    int dim;
    std::vector<Rational> x0;
    std::string case_name;
  };
  const std::vector<Sample> samples{{3, {Rational(1)}, "facet"},
                                    {3, {Rational(0)}, "sign"},
                                    {4, {Rational(1, 3), Rational(1)}, "facet"},
                                    {4, {Rational(0), Rational(1, 2)}, "sign"},
                                    {4, {Rational(1, 2), Rational(1, 2)}, "isotropy"}};
  std::set<std::string> covered;
  for (const auto& s : samples) {
    const auto b = build_bundle(labeled_filling(s.dim, {identity_labels(s.dim)}, discrete_metric(std::size_t{1} << s.dim)));
    const auto cert = boundary_pairing(b, s.x0);
    const auto tag = "dim " + std::to_string(s.dim) + " " + s.case_name;
    o.require(std::find(cert.cases.begin(), cert.cases.end(), s.case_name) != cert.cases.end(), tag + ": case");
    covered.insert(cert.cases.begin(), cert.cases.end());
    o.require(!cert.clusters.empty(), tag + ": no limit loops");
    o.require(cert.zero_chain, tag + ": nonzero sum");
    // Independent sum over undirected edges, oriented from the smaller key.
    std::map<std::pair<PointKey, PointKey>, long long> sum;
    for (const auto& c : cert.clusters)
      for (const auto& e : c.limit_fiber.edges) {
        const bool forward = e.from_key < e.to_key;
        auto key = forward ? std::pair{e.from_key, e.to_key} : std::pair{e.to_key, e.from_key};
        sum[key] += forward ? e.sign : -e.sign;
      }
    o.require(std::all_of(sum.begin(), sum.end(), [](const auto& kv) { return kv.second == 0; }),
              tag + ": edge sum does not vanish");
  }
  o.detail << samples.size() << " samples, cases";
  for (const auto& c : covered) o.detail << " " << c;
}

void criterion_7(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t k : {6u, 9u, 12u})
    for (const Rational& L : {Rational(1), Rational(7, 3), Rational(12)}) {
      const auto m = FiniteMetricSpace::cycle_graph(k, L);
      const auto est = fillrad_estimate(m, 1);
      const auto death = flag_death(m, 1);
      const auto tag = "C" + std::to_string(k) + " L=" + str(L);
      o.require(est.value == L / 6, tag + ": estimate " + str(est.value));
      o.require(death && *death / 2 == L / 6, tag + ": Betti oracle");
    }
  const auto ico = fillrad_estimate(FiniteMetricSpace::spherical(icosahedron_vertices()), 2);
  const double want = 0.5 * std::acos(-1.0 / 3.0);
  const double got = to_double(ico.value);
  o.require(std::abs(got - want) <= 0.2 * want, "icosahedron outside 20%");
  const double s = seconds_since(start);
  o.require(s < 120.0, "runtime >= 120 s");
  o.detail << "cycle graphs L/6; icosahedron " << got << " vs " << want;
}

void criterion_8(Outcome& o) {
  auto check = [&](const std::string& name, const FiniteMetricSpace& m, const SweepoutMeasurements& meas, int degree) {
    const auto report = inequality_audit(m, meas, degree);
    for (const char* clause : {"diameter", "urysohn", "waist"}) {
      const auto* c = report.clause(clause);
      const bool ok = c && !c->skipped && c->passed;
      std::ostringstream what;
      what << name << " " << clause;
      if (c) what << " " << c->lhs << " > " << c->rhs;
      o.require(ok, what.str());
    }
  };
  // Circles: one square whose corners go to four points spread around C_k.
  for (std::size_t k : {6u, 9u, 12u}) {
    const auto m = FiniteMetricSpace::cycle_graph(k, Rational(12));
    std::vector<std::size_t> around;
    for (std::size_t i = 0; i < 4; ++i) around.push_back(i * k / 4);
    // Corner bits (00, 10, 01, 11) run around the square as 0, 1, 3, 2.
    const std::vector<std::size_t> images{around[0], around[1], around[3], around[2]};
    const auto b = build_bundle(labeled_filling(2, {{0, 1, 2, 3}}, {images}, m));
    check("C" + std::to_string(k), m, measurements(measure_waist(b)), 1);
  }
  // Octahedron: C^3 cut into eight cubes, each vertex sent to the nearest +-e_i.
  {
    const auto m = FiniteMetricSpace::spherical(octahedron_vertices());
    std::vector<std::vector<int>> labels;
    std::vector<std::vector<std::size_t>> images;
    auto nearest = [](int x, int y, int z) {
      const int c[3] = {x - 1, y - 1, z - 1};
      int axis = 0;
      for (int a = 1; a < 3; ++a)
        if (std::abs(c[a]) > std::abs(c[axis])) axis = a;
      return static_cast<std::size_t>(2 * axis + (c[axis] < 0));
    };
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          std::vector<int> l;
          std::vector<std::size_t> im;
          for (int bits = 0; bits < 8; ++bits) {
            const int x = i + (bits & 1), y = j + ((bits >> 1) & 1), z = k + ((bits >> 2) & 1);
            l.push_back(9 * x + 3 * y + z);
            im.push_back(nearest(x, y, z));
          }
          labels.push_back(l);
          images.push_back(im);
        }
    const auto b = build_bundle(labeled_filling(3, labels, images, m));
    check("octahedron", m, measurements(measure_waist(b)), 2);
  }
  {
    const auto s = make_starfish(Rational(6), Rational(1), 6, 3);
    check("starfish", s.metric, measurements(s), 2);
  }
  if (o.pass) o.detail << "all clauses hold on 3 circles, the octahedron and the starfish";
}

void criterion_9(Outcome& o) {
  std::mt19937 rng(5);
  int instances = 0, unsolvable = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::vector<std::size_t>> all;
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = a + 1; b < 6; ++b)
        for (std::size_t c = b + 1; c < 6; ++c) all.push_back({a, b, c});
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(5 + rng() % 8);
    const auto c = ChainComplex::from_simplices(all);
    ChainWeighting w;
    for (int k = 0; k <= c.top_dimension(); ++k) {
      std::vector<Rational> row;
      for (std::size_t i = 0; i < c.count(k); ++i) row.push_back(random_rational(rng, 1, 4, 6) + Rational(1, 7));
      w.per_degree.push_back(row);
    }
    // A boundary, plus a homology class half of the time.
    ChainVector top(2, Ring::Z2);
    for (std::size_t t = 0; t < c.count(2); ++t)
      if (rng() % 2) top.add(t, 1);
    auto b = reduce(boundary_of(c, top));
    const auto h1 = homology(c, 1, Ring::Z2);
    if (!h1.representatives.empty() && rng() % 2)
      b = reduce(b + h1.representatives[rng() % h1.representatives.size()]);
    const auto f = min_filling(b, c, w);
    if (f.solution_dimension > 12) continue;
    const auto oracle = brute_min_filling(c, 1, parity_of(b, c.count(1)), w);
    o.require(f.solvable == oracle.has_value(), "trial " + std::to_string(trial) + ": solvability");
    if (oracle) {
      o.require(f.exact && f.weight == *oracle, "trial " + std::to_string(trial) + ": weight");
      o.require(reduce(boundary_of(c, f.chain)) == b, "trial " + std::to_string(trial) + ": boundary");
    }
    unsolvable += !oracle;
    ++instances;
    const auto t = fh_profile(c, 1, {Rational(1), Rational(2), Rational(4), Rational(8), Rational(16)}, w);
    o.require(nondecreasing(t), "trial " + std::to_string(trial) + ": FH decreases");
  }

  const auto oct = octahedron();
  const auto w = ChainWeighting::unit(oct);
  const auto equator = z2_chain(1, {edge_between(oct, 0, 2), edge_between(oct, 2, 1), edge_between(oct, 1, 3),
                                    edge_between(oct, 3, 0)});
  const auto f = min_filling(equator, oct, w);
  o.require(f.solvable && f.exact && f.weight == 4, "octahedron equator");
  o.require(nondecreasing(fh_profile(oct, 1, {Rational(1), Rational(3), Rational(4), Rational(6), Rational(12)}, w)),
            "octahedron FH decreases");

  const auto ann = annulus(2);
  const auto& ac = ann.chains();
  std::vector<std::vector<std::size_t>> labels;
  for (const auto& sq : grid_squares(3, 2, [](int i, int j) { return (i % 3) * 3 + j; }))
    labels.push_back(std::vector<std::size_t>(sq.begin(), sq.end()));
  const auto label = vertex_images_from_corners(ann, labels);
  auto vertex = [&](std::size_t l) {
    return static_cast<std::size_t>(std::find(label.begin(), label.end(), l) - label.begin());
  };
  const auto core = z2_chain(1, {edge_between(ac, vertex(1), vertex(4)), edge_between(ac, vertex(4), vertex(7)),
                                 edge_between(ac, vertex(7), vertex(1))});
  o.require(!min_filling(core, ac, ChainWeighting::unit(ac)).solvable, "annulus core has a filling");
  const auto at = fh_profile(ac, 1, {Rational(3)}, ChainWeighting::unit(ac));
  o.require(at.entries.size() == 1 && !at.entries[0].value, "annulus FH(3) finite");
  o.detail << instances << " random instances (" << unsolvable << " unfillable), equator weight " << str(f.weight);
}

void criterion_10(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  auto amb_cube = glue({Chart::single_cube(std::vector<AxisGrid>(4, AxisGrid::coarse()))});
  const auto& chart = amb_cube.charts()[0];
  const auto top_cell =
      *std::find_if(chart.cells.begin(), chart.cells.end(), [](const CubicalCell& c) { return c.dimension() == 4; });
  std::vector<std::size_t> corner;
  for (const auto& v : corners(top_cell)) corner.push_back(amb_cube.require(v).id);
  const auto& A = amb_cube.chains();
  const auto w = ChainWeighting::unit(A);

  const int perm[4] = {2, 0, 3, 1};
  auto twisted = [&](std::size_t b) {
    std::size_t out = 0;
    for (int a = 0; a < 4; ++a)
      if ((b >> a) & 1) out |= std::size_t{1} << perm[a];
    return out ^ 2u;
  };
  auto collapsed = [&](std::size_t b) { return twisted(b & 7u); };
  int runs = 0;
  for (int variant = 0; variant < 2; ++variant) {
    std::map<std::vector<std::size_t>, std::string> seen;
    for (int dim : {2, 3, 4}) {
      const auto tag = "variant " + std::to_string(variant) + " dim " + std::to_string(dim);
      const auto labels = identity_labels(dim);
      const auto K = from_labeled_cubes(dim, {labels});
      const auto label = vertex_images_from_corners(K, {std::vector<std::size_t>(labels.begin(), labels.end())});
      std::vector<std::size_t> vm;
      for (auto l : label) vm.push_back(corner[variant == 0 ? twisted(l) : collapsed(l)]);
      const auto r = r_transform(A, w, K, vm, Rational(1));
      if (!r.ok()) {
        o.require(false, tag + ": " + r.failure->message);
        continue;
      }
      ++runs;
      // Triviality: a compliant assignment comes back byte for byte.
      const auto again = r_transform(A, w, K, vm, Rational(1), {}, &r.assignment);
      o.require(canonical_text(again.assignment) == canonical_text(r.assignment), tag + ": triviality");
      o.require(std::all_of(again.cells.begin(), again.cells.end(), [](const CellReplacement& c) { return c.kept; }),
                tag + ": cell replaced");
      // Coherence: cells with the same corner labels get the same chain in every model.
      for (const auto& [key, chain] : r.assignment) {
        std::vector<std::size_t> ls;
        for (auto v : K.chains().vertices(key.first, key.second)) ls.push_back(label[v]);
        std::sort(ls.begin(), ls.end());
        const auto text = canonical_text(CellAssignment{{{0, 0}, chain}});
        const auto it = seen.find(ls);
        o.require(it == seen.end() || it->second == text, tag + ": incoherent");
        seen[ls] = text;
      }
      // Boundary commutation, checked here directly: the boundary of each image is the sum of the facet images.
      for (const auto& [key, chain] : r.assignment) {
        if (key.first == 0) continue;
        ChainVector facets(key.first - 1, Ring::Z2);
        for (const auto& [face, coeff] : K.chains().boundary_coefficients(key.first, key.second, Ring::Z2))
          if (coeff % 2) facets = reduce(facets + r.assignment.at({key.first - 1, face}));
        o.require(reduce(boundary_of(A, chain)) == facets, tag + ": boundary");
      }
      o.require(r.boundary_commutes && commutes_with_boundary(r, A, K), tag + ": reported boundary check");
      o.require(r.bounds_certified && r.bounds_hold, tag + ": volume bounds");
      for (const auto& c : r.cells) {
        const auto& bound = r.stage_bounds[static_cast<std::size_t>(std::max(c.dim, 1))];
        if (c.dim > 0 && bound) o.require(c.volume <= *bound + r.epsilon, tag + ": cell above its bound");
      }
    }
  }
  const double s = seconds_since(start);
  o.require(s < 60.0, "runtime >= 60 s");
  o.detail << runs << " replacements on nested square, cube and 4-cube models";
}

void criterion_11(Outcome& o) {
  for (int m : {4, 6, 8}) {
    const auto h = hexapodize(make_starfish(Rational(6), Rational(1), m, 3));
    const auto tag = "m=" + std::to_string(m);
    o.require(h.all_cycles, tag + ": fiber not a cycle");
    o.require(to_double(h.length_ratio) <= 2.0 * 1.05, tag + ": ratio " + str(h.length_ratio));
    o.require(h.max_consecutive_difference <= 2 * h.max_loop_length, tag + ": jump");
    if (m == 6) o.detail << "ratio " << str(h.length_ratio) << " at m=6";
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"Y is a pseudomanifold in the cube boundary", criterion_1},
      {"theta fibers are cube skeleta", criterion_2},
      {"p-face count of the cube", criterion_3},
      {"sweepout bundles on one and two cubes", criterion_4},
      {"loops over generic simplex samples", criterion_5},
      {"boundary pairing cancels", criterion_6},
      {"filling radius of cycle graphs and the icosahedron", criterion_7},
      {"inequality audits", criterion_8},
      {"minimal fillings", criterion_9},
      {"replacement laws", criterion_10},
      {"hexapod sweepout", criterion_11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("[%s] %zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.str().c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
