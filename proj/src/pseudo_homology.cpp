#include "sweepout/pseudo_homology.hpp"

#include "sweepout/z2.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sweepout {

namespace {

Z2Matrix to_z2(const SparseMatrix& m) {
  Z2Matrix z(m.rows, m.cols);
  for (std::size_t j = 0; j < m.cols; ++j) {
    for (const auto& [row, v] : m.columns[j]) {
      if (v % 2 != 0) z.cols[j].set(row);
    }
  }
  return z;
}

BitVector to_bits(const ChainVector& c, std::size_t size) {
  BitVector b(size);
  for (const auto& [cell, v] : c.coeffs) {
    if (v % 2 != 0) b.set(cell);
  }
  return b;
}

ChainVector from_bits(const BitVector& b, int degree) {
  ChainVector c(degree, Ring::Z2);
  for (auto i : b.support()) c.add(i, 1);
  return c;
}

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in Smith normal form");
  return r;
}

long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in Smith normal form");
  return r;
}

int top_nonempty(const ChainComplex& cx) {
  int n = -1;
  for (int k = 0; k <= cx.top_dimension(); ++k) {
    if (cx.count(k) > 0) n = k;
  }
  return n;
}

}  // namespace

// ------------------------------------------------------------ pseudomanifold

PseudomanifoldReport check_pseudomanifold(const ChainComplex& cx) {
  PseudomanifoldReport r;
  const int n = top_nonempty(cx);
  r.dimension = n;
  r.boundary = ChainVector(std::max(n - 1, 0), Ring::Z2);
  if (n < 0) {
    r.notes.push_back("empty complex");
    return r;
  }
  const std::size_t tops = cx.count(n);

  // purity: every cell is a face of a top cell
  std::vector<std::vector<char>> reached(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) reached[static_cast<std::size_t>(k)].assign(cx.count(k), 0);
  std::fill(reached[static_cast<std::size_t>(n)].begin(), reached[static_cast<std::size_t>(n)].end(), 1);
  for (int k = n; k >= 1; --k) {
    for (std::size_t c = 0; c < cx.count(k); ++c) {
      if (!reached[static_cast<std::size_t>(k)][c]) continue;
      for (const auto& inc : cx.boundary(k, c)) reached[static_cast<std::size_t>(k - 1)][inc.face] = 1;
    }
  }
  r.pure = true;
  for (int k = 0; k < n && r.pure; ++k) {
    for (char flag : reached[static_cast<std::size_t>(k)]) {
      if (!flag) {
        r.pure = false;
        r.notes.push_back("a " + std::to_string(k) + "-cell is not a face of any top cell");
        break;
      }
    }
  }

  if (n == 0) {
    r.facet_incidence_ok = true;
    r.strongly_connected = tops == 1;
    r.orientable = true;
    r.orientation.assign(tops, 1);
    return r;
  }

  std::vector<std::vector<std::pair<std::size_t, int>>> cofaces(cx.count(n - 1));
  for (std::size_t c = 0; c < tops; ++c) {
    for (const auto& inc : cx.boundary(n, c)) cofaces[inc.face].push_back({c, inc.coeff});
  }
  r.facet_incidence_ok = true;
  for (std::size_t f = 0; f < cofaces.size(); ++f) {
    if (cofaces[f].size() > 2) {
      if (r.facet_incidence_ok) {
        r.notes.push_back("facet " + std::to_string(f) + " borders " + std::to_string(cofaces[f].size()) + " top cells");
      }
      r.facet_incidence_ok = false;
    }
    if (cofaces[f].size() == 1) r.boundary.add(f, 1);
  }

  // dual graph connectivity
  std::vector<std::size_t> parent(tops);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& cf : cofaces) {
    for (std::size_t i = 1; i < cf.size(); ++i) parent[root(cf[i].first)] = root(cf[0].first);
  }
  std::set<std::size_t> components;
  for (std::size_t c = 0; c < tops; ++c) components.insert(root(c));
  r.strongly_connected = components.size() == 1;
  if (!r.strongly_connected) r.notes.push_back("dual graph has " + std::to_string(components.size()) + " components");

  if (!r.facet_incidence_ok) return r;

  // orientation propagation: across a shared facet, o1*s1 + o2*s2 = 0
  std::vector<std::vector<std::pair<std::size_t, int>>> adj(tops);  // neighbor, required o_nb / o_self
  for (const auto& cf : cofaces) {
    if (cf.size() != 2) continue;
    const auto [a, sa] = cf[0];
    const auto [b, sb] = cf[1];
    const int rel = -sa * sb;  // o_b = rel * o_a
    adj[a].push_back({b, rel});
    if (a != b) adj[b].push_back({a, rel});
  }
  std::vector<int> orient(tops, 0);
  std::vector<std::size_t> tree_parent(tops, tops);
  r.orientable = true;
  for (std::size_t start = 0; start < tops && r.orientable; ++start) {
    if (orient[start]) continue;
    orient[start] = 1;
    std::deque<std::size_t> queue{start};
    while (!queue.empty() && r.orientable) {
      const auto a = queue.front();
      queue.pop_front();
      for (const auto& [b, rel] : adj[a]) {
        const int want = rel * orient[a];
        if (!orient[b]) {
          orient[b] = want;
          tree_parent[b] = a;
          queue.push_back(b);
        } else if (orient[b] != want) {
          r.orientable = false;
          // witness: tree paths from a and b to their common ancestor
          std::vector<std::size_t> pa{a};
          while (tree_parent[pa.back()] != tops) pa.push_back(tree_parent[pa.back()]);
          std::vector<std::size_t> pb{b};
          while (tree_parent[pb.back()] != tops) pb.push_back(tree_parent[pb.back()]);
          while (pa.size() > 1 && pb.size() > 1 && pa[pa.size() - 2] == pb[pb.size() - 2]) {
            pa.pop_back();
            pb.pop_back();
          }
          r.orientation_witness = pa;
          for (std::size_t i = pb.size() - 1; i-- > 0;) r.orientation_witness.push_back(pb[i]);
          if (a == b) r.orientation_witness = {a};
          break;
        }
      }
    }
  }
  if (r.orientable) r.orientation = orient;
  return r;
}

PseudomanifoldReport check_pseudomanifold(const GluedComplex& complex) { return check_pseudomanifold(complex.chains()); }

ChainVector fundamental_cycle(const ChainComplex& complex, Ring ring) {
  const int n = top_nonempty(complex);
  ChainVector c(std::max(n, 0), ring);
  if (n < 0) return c;
  if (ring == Ring::Z2) {
    for (std::size_t i = 0; i < complex.count(n); ++i) c.add(i, 1);
    return c;
  }
  auto report = check_pseudomanifold(complex);
  if (!report.orientable) throw DomainError("fundamental_cycle: complex is not orientable over Z");
  for (std::size_t i = 0; i < complex.count(n); ++i) c.add(i, report.orientation[i]);
  return c;
}

// ------------------------------------------------------------------ matrices

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_sparse(const SparseMatrix& s) {
  IntMatrix m(s.rows, s.cols);
  for (std::size_t j = 0; j < s.cols; ++j) {
    for (const auto& [row, v] : s.columns[j]) m.at(row, j) = v;
  }
  return m;
}

SmithForm smith_normal_form(const IntMatrix& a, bool track) {
  SmithForm f;
  f.D = a;
  IntMatrix& D = f.D;
  const std::size_t m = a.rows;
  const std::size_t n = a.cols;
  if (track) {
    f.U = IntMatrix::identity(m);
    f.V = IntMatrix::identity(n);
  }
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < n; ++c) std::swap(D.at(i, c), D.at(j, c));
    if (track) {
      for (std::size_t c = 0; c < m; ++c) std::swap(f.U.at(i, c), f.U.at(j, c));
    }
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < m; ++r) std::swap(D.at(r, i), D.at(r, j));
    if (track) {
      for (std::size_t r = 0; r < n; ++r) std::swap(f.V.at(r, i), f.V.at(r, j));
    }
  };
  // row_i += q * row_t
  auto add_row = [&](std::size_t i, std::size_t t, long long q) {
    for (std::size_t c = 0; c < n; ++c) D.at(i, c) = checked_add(D.at(i, c), checked_mul(q, D.at(t, c)));
    if (track) {
      for (std::size_t c = 0; c < m; ++c) f.U.at(i, c) = checked_add(f.U.at(i, c), checked_mul(q, f.U.at(t, c)));
    }
  };
  auto add_col = [&](std::size_t j, std::size_t t, long long q) {
    for (std::size_t r = 0; r < m; ++r) D.at(r, j) = checked_add(D.at(r, j), checked_mul(q, D.at(r, t)));
    if (track) {
      for (std::size_t r = 0; r < n; ++r) f.V.at(r, j) = checked_add(f.V.at(r, j), checked_mul(q, f.V.at(r, t)));
    }
  };
  auto absval = [](long long v) { return v < 0 ? -v : v; };

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    // smallest nonzero entry of the remaining block becomes the pivot
    std::size_t bi = m, bj = n;
    for (std::size_t i = t; i < m; ++i) {
      for (std::size_t j = t; j < n; ++j) {
        if (D.at(i, j) != 0 && (bi == m || absval(D.at(i, j)) < absval(D.at(bi, bj)))) {
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == m) break;
    swap_rows(t, bi);
    swap_cols(t, bj);
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D.at(i, t) == 0) continue;
        add_row(i, t, -(D.at(i, t) / D.at(t, t)));
        if (D.at(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D.at(t, j) == 0) continue;
        add_col(j, t, -(D.at(t, j) / D.at(t, t)));
        if (D.at(t, j) != 0) clean = false;
      }
      if (!clean) {
        std::size_t ri = t, cj = t;
        long long best = absval(D.at(t, t));
        for (std::size_t i = t + 1; i < m; ++i) {
          if (D.at(i, t) != 0 && absval(D.at(i, t)) < best) {
            best = absval(D.at(i, t));
            ri = i;
            cj = t;
          }
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (D.at(t, j) != 0 && absval(D.at(t, j)) < best) {
            best = absval(D.at(t, j));
            ri = t;
            cj = j;
          }
        }
        swap_rows(t, ri);
        swap_cols(t, cj);
        continue;
      }
      bool divisible = true;
      for (std::size_t i = t + 1; i < m && divisible; ++i) {
        for (std::size_t j = t + 1; j < n; ++j) {
          if (D.at(i, j) % D.at(t, t) != 0) {
            add_row(t, i, 1);
            divisible = false;
            break;
          }
        }
      }
      if (divisible) break;
    }
    if (D.at(t, t) < 0) {
      for (std::size_t c = 0; c < n; ++c) D.at(t, c) = -D.at(t, c);
      if (track) {
        for (std::size_t c = 0; c < m; ++c) f.U.at(t, c) = -f.U.at(t, c);
      }
    }
    f.diagonal.push_back(D.at(t, t));
  }
  return f;
}

// ------------------------------------------------------------------ homology

namespace {

using RatVec = std::vector<Rational>;

// Basis of the nullspace of a dense rational matrix given by columns.
std::vector<RatVec> rational_nullspace(const std::vector<RatVec>& columns, std::size_t rows) {
  const std::size_t n = columns.size();
  std::vector<RatVec> A(rows, RatVec(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < rows; ++i) A[i][j] = columns[j][i];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && A[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(A[p], A[r]);
    const Rational inv = 1 / A[r][c];
    for (auto& v : A[r]) v *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      const Rational f = A[i][c];
      for (std::size_t k = c; k < n; ++k) A[i][k] -= f * A[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<char> is_pivot(n, 0);
  for (auto c : pivot_col) is_pivot[c] = 1;
  std::vector<RatVec> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    RatVec v(n);
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -A[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

ChainVector integral_chain(const RatVec& v, int degree) {
  BigInt l = 1;
  for (const auto& x : v) {
    if (x != 0) l = boost::multiprecision::lcm(l, BigInt(boost::multiprecision::denominator(x)));
  }
  BigInt g = 0;
  std::vector<BigInt> ints;
  for (const auto& x : v) {
    Rational scaled = x * Rational(l);
    ints.push_back(boost::multiprecision::numerator(scaled));
    g = boost::multiprecision::gcd(g, ints.back());
  }
  ChainVector c(degree, Ring::Z);
  for (std::size_t i = 0; i < ints.size(); ++i) {
    if (ints[i] != 0) c.add(i, (ints[i] / g).convert_to<long long>());
  }
  return c;
}

}  // namespace

HomologyResult homology(const ChainComplex& complex, int k, Ring ring) {
  HomologyResult h;
  h.degree = k;
  h.ring = ring;
  const std::size_t nk = complex.count(k);
  if (k < 0 || nk == 0) return h;
  const auto dk = boundary_matrix(complex, k, ring);
  const auto dk1 = boundary_matrix(complex, k + 1, ring);
  if (ring == Ring::Z2) {
    Z2Reduction red(to_z2(dk));
    Z2Matrix stacked(nk, 0);
    const auto image = to_z2(dk1);
    for (const auto& col : image.cols) stacked.cols.push_back(col);
    const std::size_t image_cols = stacked.cols.size();
    for (const auto& z : red.kernel()) stacked.cols.push_back(z);
    Z2Reduction all(stacked);
    for (auto j : all.pivot_columns()) {
      if (j >= image_cols) h.representatives.push_back(from_bits(stacked.cols[j], k));
    }
    h.betti = static_cast<long long>(h.representatives.size());
    return h;
  }
  const auto snf_k = smith_normal_form(IntMatrix::from_sparse(dk), false);
  const auto snf_k1 = smith_normal_form(IntMatrix::from_sparse(dk1), false);
  h.betti = static_cast<long long>(nk) - static_cast<long long>(snf_k.diagonal.size()) -
            static_cast<long long>(snf_k1.diagonal.size());
  for (auto d : snf_k1.diagonal) {
    if (d > 1) h.torsion.push_back(d);
  }
  // free representatives: rational cycles independent modulo rational boundaries
  std::vector<RatVec> cols(nk, RatVec(dk.rows));
  for (std::size_t j = 0; j < nk; ++j) {
    for (const auto& [row, v] : dk.columns[j]) cols[j][row] = v;
  }
  auto kernel = rational_nullspace(cols, dk.rows);
  std::vector<RatVec> echelon;  // reduced spanning set, each with a recorded pivot
  std::vector<std::size_t> pivots;
  auto reduce_in = [&](RatVec v) -> bool {
    for (std::size_t i = 0; i < echelon.size(); ++i) {
      if (v[pivots[i]] != 0) {
        const Rational f = v[pivots[i]] / echelon[i][pivots[i]];
        for (std::size_t t = 0; t < v.size(); ++t) v[t] -= f * echelon[i][t];
      }
    }
    for (std::size_t t = 0; t < v.size(); ++t) {
      if (v[t] != 0) {
        echelon.push_back(v);
        pivots.push_back(t);
        return true;
      }
    }
    return false;
  };
  for (std::size_t j = 0; j < dk1.cols; ++j) {
    RatVec v(nk);
    for (const auto& [row, val] : dk1.columns[j]) v[row] = val;
    reduce_in(std::move(v));
  }
  for (const auto& z : kernel) {
    if (reduce_in(z)) h.representatives.push_back(integral_chain(z, k));
  }
  return h;
}

HomologousResult homologous(const ChainVector& a, const ChainVector& b, const ChainComplex& ambient) {
  if (a.degree != b.degree || a.ring != b.ring) throw DomainError("homologous: chains differ in degree or ring");
  for (const auto* c : {&a, &b}) {
    if (!boundary_of(ambient, *c).empty()) throw DomainError("homologous: input chain is not a cycle");
  }
  const int k = a.degree;
  HomologousResult r;
  r.witness = ChainVector(k + 1, a.ring);
  const ChainVector diff = a - b;
  if (diff.empty()) {
    r.homologous = true;
    return r;
  }
  const auto d = boundary_matrix(ambient, k + 1, a.ring);
  if (a.ring == Ring::Z2) {
    auto solved = z2_solve(to_z2(d), to_bits(diff, ambient.count(k)));
    r.homologous = solved.solvable;
    if (solved.solvable) {
      r.witness = from_bits(solved.solution, k + 1);
    } else {
      r.obstruction = from_bits(solved.obstruction, k);
      r.note = "a mod-2 cocycle vanishing on boundaries pairs to 1 with the difference";
    }
    return r;
  }
  const auto snf = smith_normal_form(IntMatrix::from_sparse(d), true);
  std::vector<long long> uc(d.rows, 0);
  for (std::size_t i = 0; i < d.rows; ++i) {
    long long acc = 0;
    for (const auto& [cell, v] : diff.coeffs) acc = checked_add(acc, checked_mul(snf.U.at(i, cell), v));
    uc[i] = acc;
  }
  std::vector<long long> y(d.cols, 0);
  for (std::size_t i = 0; i < d.rows; ++i) {
    const long long di = i < snf.diagonal.size() ? snf.diagonal[i] : 0;
    if (di == 0) {
      if (uc[i] != 0) {
        r.note = "difference has a nonzero component outside the image of the boundary over Q";
        break;
      }
    } else if (uc[i] % di != 0) {
      r.note = "difference is a torsion class: divisibility by invariant factor " + std::to_string(di) + " fails";
      break;
    } else {
      y[i] = uc[i] / di;
    }
  }
  if (!r.note.empty()) {
    // a mod-2 obstruction, when one exists, is a concrete certificate
    ChainVector a2(k, Ring::Z2);
    for (const auto& [c, v] : diff.coeffs) a2.add(c, v);
    auto solved = z2_solve(to_z2(boundary_matrix(ambient, k + 1, Ring::Z2)), to_bits(a2, ambient.count(k)));
    if (!solved.solvable) r.obstruction = from_bits(solved.obstruction, k);
    return r;
  }
  for (std::size_t j = 0; j < d.cols; ++j) {
    long long acc = 0;
    for (std::size_t t = 0; t < d.cols; ++t) acc = checked_add(acc, checked_mul(snf.V.at(j, t), y[t]));
    if (acc != 0) r.witness.add(j, acc);
  }
  r.homologous = true;
  if (boundary_of(ambient, r.witness) != diff) throw std::logic_error("homologous: integer witness failed verification");
  return r;
}

// -------------------------------------------------------------------- degree

DegreeResult degree(const ChainComplex& source, const ChainComplex& target, const std::vector<std::size_t>& vertex_map,
                    Ring ring, std::optional<std::size_t> regular_cell) {
  const int n = top_nonempty(source);
  if (n < 1 || top_nonempty(target) != n) throw DomainError("degree: source and target need equal positive dimension");
  if (vertex_map.size() != source.count(0)) throw DomainError("degree: vertex map must cover every source vertex");
  for (auto v : vertex_map) {
    if (v >= target.count(0)) throw DomainError("degree: vertex map points outside the target");
  }
  DegreeResult out;
  out.ring = ring;
  out.regular_cell = regular_cell.value_or(0);
  if (out.regular_cell >= target.count(n)) throw DomainError("degree: regular cell out of range");

  std::map<std::vector<std::size_t>, std::pair<int, std::size_t>> by_vertices;
  for (std::size_t v = 0; v < target.count(0); ++v) by_vertices[{v}] = {0, v};
  for (int k = 1; k <= n; ++k) {
    for (std::size_t c = 0; c < target.count(k); ++c) {
      auto vs = target.vertices(k, c);
      std::sort(vs.begin(), vs.end());
      by_vertices.emplace(vs, std::pair{k, c});
    }
  }
  std::vector<int> o_src(source.count(n), 1), o_tgt(target.count(n), 1);
  if (ring == Ring::Z) {
    auto rs = check_pseudomanifold(source);
    auto rt = check_pseudomanifold(target);
    if (!rs.orientable || !rt.orientable) throw DomainError("degree over Z needs orientable source and target");
    o_src = rs.orientation;
    o_tgt = rt.orientation;
  }
  long long total = 0;
  for (std::size_t c = 0; c < source.count(n); ++c) {
    const auto& vs = source.vertices(n, c);
    std::vector<std::size_t> image;
    for (auto v : vs) image.push_back(vertex_map[v]);
    std::vector<std::size_t> distinct = image;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    auto hit = by_vertices.find(distinct);
    if (hit == by_vertices.end()) {
      throw SubdivisionRequired("degree: top cell " + std::to_string(c) +
                                " maps onto a vertex set that is not a cell of the target; subdivide the source");
    }
    if (hit->second.first < n || hit->second.second != out.regular_cell) continue;
    const auto t = hit->second.second;
    const auto& tv = target.vertices(n, t);
    std::map<std::size_t, unsigned> pos;
    for (unsigned b = 0; b < tv.size(); ++b) pos[tv[b]] = b;
    const unsigned c0 = pos.at(image[0]);
    std::vector<int> sigma;
    for (int i = 0; i < n; ++i) {
      unsigned d = pos.at(image[1u << i]) ^ c0;
      if (std::popcount(d) != 1) throw SubdivisionRequired("degree: cell map is not a cube isometry; subdivide the source");
      sigma.push_back(std::countr_zero(d));
    }
    for (unsigned b = 0; b < image.size(); ++b) {
      unsigned expect = c0;
      for (int i = 0; i < n; ++i) {
        if (b >> i & 1u) expect ^= 1u << sigma[static_cast<std::size_t>(i)];
      }
      if (pos.at(image[b]) != expect) throw SubdivisionRequired("degree: cell map is not a cube isometry; subdivide the source");
    }
    int sign = (std::popcount(c0) % 2) ? -1 : 1;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      for (std::size_t j = i + 1; j < sigma.size(); ++j) {
        if (sigma[i] > sigma[j]) sign = -sign;
      }
    }
    ++out.preimage_cells;
    total += sign * o_src[c] * o_tgt[t];
  }
  out.degree = ring == Ring::Z2 ? ((total % 2) + 2) % 2 : total;
  return out;
}

}  // namespace sweepout
