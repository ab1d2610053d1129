#include "doctest.h"
#include "sweepout/cube_decomposition.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

using namespace sweepout;
using testing_support::random_rational;

namespace {

using Point = std::vector<Rational>;

const Rational kHalf(1, 2);

Point barycenter_on(const AxisGrid& grid, const CubicalCell& c) {
  Point x;
  for (const auto& [lo, hi] : c.spans) x.push_back((grid[lo] + grid[hi]) / 2);
  return x;
}

// Oracle for Y from its stratified description: the coordinates below eps all
// belong to the first p indices, and at least p+1 coordinates are at most eps.
bool y_strata(const Point& x, int p, const Rational& eps) {
  int below = 0;
  int equal = 0;
  for (const auto& v : x) {
    below += abs(v) < eps;
    equal += abs(v) == eps;
  }
  return below <= p && below + equal >= p + 1;
}

// X1 as the displayed set: some n-p+1 coordinates have |x| >= eps.
bool x1_display(const Point& x, int p, const Rational& eps) {
  int big = 0;
  for (const auto& v : x) big += abs(v) >= eps;
  return big >= static_cast<int>(x.size()) - p;
}

// X1 as described in words: at most p coordinates are smaller than eps.
bool x1_prose(const Point& x, int p, const Rational& eps) {
  int small = 0;
  for (const auto& v : x) small += abs(v) < eps;
  return small <= p;
}

std::set<CubicalCell> as_set(const std::vector<CubicalCell>& v) { return {v.begin(), v.end()}; }

template <class Pred>
std::set<CubicalCell> filter_eps_cells(int dim, const Rational& eps, Pred pred) {
  const AxisGrid g = AxisGrid::standard(eps);
  std::set<CubicalCell> out;
  for (const auto& c : eps_grid_cells(dim)) {
    if (pred(barycenter_on(g, c))) out.insert(c);
  }
  return out;
}

SignedPermutation random_signed_permutation(std::mt19937& rng, int dim) {
  SignedPermutation s;
  for (int i = 0; i < dim; ++i) s.perm.push_back(i);
  std::shuffle(s.perm.begin(), s.perm.end(), rng);
  for (int i = 0; i < dim; ++i) s.signs.push_back(rng() % 2 ? 1 : -1);
  return s;
}

// Points whose coordinates are drawn from a mix of special values and random
// rationals, so that boundary cases of the eps-thresholds are hit often.
Point random_point(std::mt19937& rng, int dim, const Rational& eps) {
  const std::vector<Rational> special{Rational(-1), -eps, Rational(0), eps, Rational(1)};
  Point x;
  for (int i = 0; i < dim; ++i) {
    if (rng() % 3 == 0) {
      x.push_back(special[rng() % special.size()]);
    } else {
      x.push_back(random_rational(rng, -1, 1, 24));
    }
  }
  return x;
}

}  // namespace

TEST_CASE("Z for n=2, p=1 is three segments through the origin") {
  const auto cells = decomposition_cells(2, 1, Piece::Z);
  const AxisGrid g = AxisGrid::standard(kHalf);
  // oracle: unit-grid cells whose barycenter has at least two zero coordinates
  std::size_t edges = 0;
  std::size_t vertices = 0;
  for (const auto& c : cells) {
    const auto x = barycenter_on(g, c);
    CHECK(std::count(x.begin(), x.end(), Rational(0)) >= 2);
    edges += c.dimension() == 1;
    vertices += c.dimension() == 0;
  }
  CHECK(edges == 6);
  CHECK(vertices == 7);
  CHECK(std::none_of(cells.begin(), cells.end(), [](const CubicalCell& c) { return c.dimension() > 1; }));
}

TEST_CASE("Y for n=2, p=1 has 24 top cells matching the stratified description") {
  const auto oracle = filter_eps_cells(3, kHalf, [](const Point& x) { return y_strata(x, 1, kHalf); });
  std::size_t top = 0;
  for (const auto& c : oracle) top += c.dimension() == 2;
  CHECK(top == 24);
  CHECK(as_set(decomposition_cells(2, 1, Piece::Y)) == oracle);
}

TEST_CASE("Y agrees with the stratified description for n <= 3") {
  for (int n = 1; n <= 3; ++n) {
    for (int p = 1; p <= n; ++p) {
      CAPTURE(n);
      CAPTURE(p);
      const auto oracle = filter_eps_cells(n + 1, kHalf, [p](const Point& x) { return y_strata(x, p, kHalf); });
      CHECK(as_set(decomposition_cells(n, p, Piece::Y)) == oracle);
    }
  }
}

TEST_CASE("X1 prose and display descriptions agree with the built cells") {
  for (int n = 1; n <= 4; ++n) {
    for (int p = 1; p <= n; ++p) {
      CAPTURE(n);
      CAPTURE(p);
      const auto prose = filter_eps_cells(n + 1, kHalf, [p](const Point& x) { return x1_prose(x, p, kHalf); });
      const auto display = filter_eps_cells(n + 1, kHalf, [p](const Point& x) { return x1_display(x, p, kHalf); });
      CHECK(prose == display);
      CHECK(as_set(decomposition_cells(n, p, Piece::X1)) == prose);
    }
  }
}

TEST_CASE("p = n: Z is the origin and X1 misses only the open central cube") {
  const auto z = decomposition_cells(3, 3, Piece::Z);
  REQUIRE(z.size() == 1);
  CHECK(z.front().spans == std::vector<std::pair<int, int>>(4, {2, 2}));

  auto expected = as_set(eps_grid_cells(4));
  expected.erase(CubicalCell{0, std::vector<std::pair<int, int>>(4, {1, 3})});
  CHECK(as_set(decomposition_cells(3, 3, Piece::X1)) == expected);
}

TEST_CASE("X1 and X2 cover the cube and meet in Y, cell by cell") {
  for (int n = 1; n <= 4; ++n) {
    for (int p = 1; p <= n; ++p) {
      CAPTURE(n);
      CAPTURE(p);
      const auto all = as_set(eps_grid_cells(n + 1));
      const auto x1 = as_set(decomposition_cells(n, p, Piece::X1));
      const auto x2 = as_set(decomposition_cells(n, p, Piece::X2));
      const auto y = as_set(decomposition_cells(n, p, Piece::Y));
      std::set<CubicalCell> uni;
      std::set<CubicalCell> inter;
      std::set_union(x1.begin(), x1.end(), x2.begin(), x2.end(), std::inserter(uni, uni.end()));
      std::set_intersection(x1.begin(), x1.end(), x2.begin(), x2.end(), std::inserter(inter, inter.end()));
      CHECK(uni == all);
      CHECK(inter == y);
    }
  }
}

TEST_CASE("Z lies in X2 and the skeleton lies in X1") {
  const AxisGrid g = AxisGrid::standard(kHalf);
  for (int n = 1; n <= 3; ++n) {
    for (int p = 1; p <= n; ++p) {
      const auto d = build_decomposition(n, p, kHalf);
      for (const auto& c : d.Z.charts().front().cells) {
        CHECK(in_X2(barycenter_on(g, c), p, kHalf));
        for (const auto& v : corners(c)) CHECK(in_X2(barycenter_on(g, v), p, kHalf));
      }
      for (const auto& c : d.skeleton.charts().front().cells) {
        CHECK(in_skeleton(barycenter_on(g, c), p));
        CHECK(in_X1(barycenter_on(g, c), p, kHalf));
      }
    }
  }
}

TEST_CASE("build_decomposition rejects bad parameters") {
  CHECK_THROWS_AS(build_decomposition(2, 0, kHalf), DomainError);
  CHECK_THROWS_AS(build_decomposition(2, 3, kHalf), DomainError);
  CHECK_THROWS_AS(build_decomposition(2, 1, Rational(0)), DomainError);
  CHECK_THROWS_AS(build_decomposition(2, 1, Rational(1)), DomainError);
}

TEST_CASE("profile maps") {
  // hand evaluation: lambda(t) = (t - eps)/(1 - eps) on [eps, 1], mu(t) = t/eps on [-eps, eps]
  CHECK(lambda(Rational(3, 4), kHalf) == kHalf);
  CHECK(mu(Rational(1, 4), kHalf) == kHalf);
  CHECK(lambda(kHalf, kHalf) == 0);
  CHECK(mu(kHalf, kHalf) == 1);
  const Rational eps(1, 3);
  CHECK(lambda(Rational(0), eps) == 0);
  CHECK(mu(Rational(1), eps) == 1);
  CHECK(lambda(Rational(1), eps) == 1);
  CHECK(lambda(Rational(-1), eps) == -1);
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto t = random_rational(rng, -1, 1, 60);
    CHECK(lambda(-t, eps) == -lambda(t, eps));
    CHECK(mu(-t, eps) == -mu(t, eps));
    const auto [l, m] = profile_maps(t, eps);
    CHECK(l == lambda(t, eps));
    CHECK(m == mu(t, eps));
    if (t != 0) CHECK(lambda(lambda_inverse(t, eps), eps) == t);
  }
  CHECK_THROWS_AS(profile_maps(Rational(3, 2), eps), DomainError);
  CHECK_THROWS_AS(lambda(Rational(-2), eps), DomainError);
}

TEST_CASE("theta") {
  CHECK(theta({Rational(1, 4), kHalf, Rational(3, 4)}, 1, kHalf) == Point{0, 0, kHalf});
  CHECK(theta({Rational(-1, 4), -kHalf, Rational(-3, 4)}, 1, kHalf) == Point{0, 0, -kHalf});
  // every coordinate within eps: Y needs one of them on the eps-sphere
  CHECK(theta({Rational(1, 4), kHalf, Rational(-1, 8)}, 2, kHalf) == Point{0, 0, 0});
  CHECK_THROWS_AS(theta({Rational(1), Rational(1), Rational(1)}, 1, kHalf), DomainError);
  CHECK_THROWS_AS(theta({Rational(0), Rational(0), Rational(1)}, 1, kHalf), DomainError);
}

TEST_CASE("theta takes values in Z") {
  std::mt19937 rng(11);
  int hits = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int p = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    const auto x = random_point(rng, n + 1, kHalf);
    if (!in_Y(x, p, kHalf)) continue;
    ++hits;
    CHECK(in_Z(theta(x, p, kHalf), p));
  }
  CHECK(hits > 100);
}

TEST_CASE("rho and rho_bar") {
  CHECK(rho({Rational(1), Rational(3, 4), Rational(1, 4)}, 1, kHalf) == Point{1, 1, kHalf});
  CHECK_THROWS_AS(rho({Rational(0), Rational(0), Rational(0)}, 1, kHalf), DomainError);
  for (int bits = 0; bits < 8; ++bits) {
    Point v;
    for (int i = 0; i < 3; ++i) v.push_back(Rational((bits >> i) & 1 ? 1 : -1));
    CHECK(rho(v, 1, kHalf) == v);
  }
  // generic interior point: only the middle piece of mu is onto (-1, 1), so the
  // unique preimage is eps * y
  const Point y{Rational(1, 3), Rational(-1, 5), Rational(2, 7)};
  const auto pre = rho_bar_preimages(y, kHalf);
  REQUIRE(pre.size() == 1);
  CHECK(pre.front() == Point{Rational(1, 6), Rational(-1, 10), Rational(1, 7)});
  CHECK(rho_bar(pre.front(), kHalf) == y);
  CHECK_THROWS_AS(rho_bar_preimages({Rational(1), Rational(0), Rational(0)}, kHalf), DomainError);
}

TEST_CASE("rho maps X1 into the skeleton") {
  std::mt19937 rng(13);
  int hits = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int p = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    const auto x = random_point(rng, n + 1, kHalf);
    if (!in_X1(x, p, kHalf)) continue;
    ++hits;
    CHECK(in_skeleton(rho(x, p, kHalf), p));
  }
  CHECK(hits > 100);
}

TEST_CASE("rho maps each skeleton cell onto itself") {
  std::mt19937 rng(17);
  for (int n = 1; n <= 3; ++n) {
    for (int p = 1; p <= n; ++p) {
      auto cube = glue({Chart::single_cube(std::vector<AxisGrid>(static_cast<std::size_t>(n + 1), AxisGrid::coarse()))});
      auto skel = skeleton(cube, p);
      const auto& chart = skel.charts().front();
      for (const auto& cell : chart.cells) {
        for (const auto& v : corners(cell)) CHECK(rho(chart.coordinates(v), p, kHalf) == chart.coordinates(v));
        // random points of the cell stay in the cell
        for (int t = 0; t < 5; ++t) {
          Point x;
          for (const auto& [lo, hi] : cell.spans) {
            x.push_back(lo == hi ? chart.grids[0][lo] : random_rational(rng, -1, 1, 16));
          }
          const auto y = rho(x, p, kHalf);
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (cell.spans[i].first == cell.spans[i].second) CHECK(y[i] == x[i]);
          }
        }
      }
    }
  }
}

TEST_CASE("theta and rho commute with signed permutations") {
  std::mt19937 rng(19);
  int theta_hits = 0;
  int rho_hits = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int p = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    const auto x = random_point(rng, n + 1, kHalf);
    const auto s = random_signed_permutation(rng, n + 1);
    if (in_Y(x, p, kHalf)) {
      ++theta_hits;
      CHECK(theta(s.apply(x), p, kHalf) == s.apply(theta(x, p, kHalf)));
    }
    if (in_X1(x, p, kHalf)) {
      ++rho_hits;
      CHECK(rho(s.apply(x), p, kHalf) == s.apply(rho(x, p, kHalf)));
    }
  }
  CHECK(theta_hits > 100);
  CHECK(rho_hits > 100);
}

TEST_CASE("big_theta") {
  // the level is the second smallest absolute coordinate, here 1/4
  const auto img = big_theta({Rational(1, 4), Rational(1, 8)}, 1);
  CHECK_FALSE(img.apex);
  CHECK(img.level == Rational(1, 4));
  CHECK(img.base == Point{0, 0});

  CHECK(big_theta({Rational(1), Rational(-1)}, 1).apex);
  const auto origin = big_theta({Rational(0), Rational(0)}, 1);
  CHECK_FALSE(origin.apex);
  CHECK(origin.level == 0);
  CHECK(origin.base == Point{0, 0});
  CHECK_THROWS_AS(big_theta({Rational(0), Rational(0)}, 2), DomainError);
}

TEST_CASE("big_theta lands in the fiber of theta at its level") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int p = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
    Point x;
    for (int i = 0; i < n; ++i) x.push_back(random_rational(rng, -1, 1, 12));
    const auto img = big_theta(x, p);
    if (img.apex || img.level == 0) continue;
    // n - 1 and p here refer to the decomposition of C^n
    CHECK(in_Y(x, p, img.level));
    CHECK(img.base == theta(x, p, img.level));
  }
}

TEST_CASE("theta fiber examples") {
  const auto square = theta_fiber({kHalf, Rational(0), Rational(0)}, 1, kHalf);
  CHECK(square.k == 2);
  CHECK(square.complex.cell_count(0) == 4);
  CHECK(square.complex.cell_count(1) == 4);
  CHECK(square.complex.dimension() == 1);

  const auto cube = theta_fiber({Rational(0), Rational(0), Rational(0)}, 1, kHalf);
  CHECK(cube.complex.cell_count(0) == 8);
  CHECK(cube.complex.cell_count(1) == 12);

  const auto surface = theta_fiber({Rational(0), Rational(0), Rational(0), kHalf}, 2, kHalf);
  CHECK(surface.complex.cell_count(2) == 6);
  CHECK(surface.complex.cell_count(1) == 12);
  CHECK(surface.complex.cell_count(0) == 8);

  CHECK_THROWS_AS(theta_fiber({kHalf, kHalf, Rational(0)}, 1, kHalf), DomainError);
}

TEST_CASE("theta fibers are cube skeleta over every cell of Z") {
  for (int n = 1; n <= 4; ++n) {
    for (int p = 1; p <= n; ++p) {
      for (const auto& cell : decomposition_cells(n, p, Piece::Z)) {
        CAPTURE(to_string(cell));
        const auto fiber = theta_fiber_of_cell(cell, p, kHalf);
        CHECK(fiber_words(fiber) == cube_skeleton_words(fiber.k, p));
        const auto match = recognize_cube_skeleton(fiber.complex, p);
        CHECK_MESSAGE(match.isomorphic, match.reason);
        CHECK(match.k == fiber.k);
      }
    }
  }
}

TEST_CASE("cube skeleton recognition rejects other complexes") {
  auto ring = testing_support::annulus(1);  // 6 vertices
  CHECK_FALSE(recognize_cube_skeleton(skeleton(ring, 1), 1).isomorphic);
  auto strip = testing_support::annulus(2);  // 9 vertices
  CHECK_FALSE(recognize_cube_skeleton(strip, 2).isomorphic);
  auto surface = from_labeled_cubes(2, testing_support::cube_surface_labels());
  CHECK(recognize_cube_skeleton(surface, 2).isomorphic);
  CHECK(recognize_cube_skeleton(surface, 2).k == 3);
  CHECK_FALSE(recognize_cube_skeleton(surface, 1).isomorphic);
}

TEST_CASE("theta fibers match the preimage of z inside Y") {
  // oracle: sample the cube on a grid containing all breakpoints and midpoints,
  // keep the points of Y mapping to z, and compare with the fiber cells
  for (int n = 1; n <= 3; ++n) {
    for (int p = 1; p <= n; ++p) {
      for (const auto& cell : decomposition_cells(n, p, Piece::Z)) {
        const auto fiber = theta_fiber_of_cell(cell, p, kHalf);
        const auto& z = fiber.base;
        const auto& chart = fiber.complex.charts().front();
        for (const auto& c : chart.cells) {
          const auto b = chart.barycenter(c);
          CHECK(in_Y(b, p, kHalf));
          CHECK(theta(b, p, kHalf) == z);
        }
        std::vector<Rational> axis{Rational(-1), -kHalf, Rational(0), kHalf, Rational(1)};
        for (const auto& v : z) {
          if (v != 0) {
            const Rational x = kHalf + kHalf * abs(v);
            axis.push_back(x);
            axis.push_back(-x);
          }
        }
        std::sort(axis.begin(), axis.end());
        axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
        std::vector<Rational> samples = axis;
        for (std::size_t i = 0; i + 1 < axis.size(); ++i) samples.push_back((axis[i] + axis[i + 1]) / 2);
        const int dim = n + 1;
        std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
        std::size_t found = 0;
        while (true) {
          Point x;
          for (auto i : idx) x.push_back(samples[i]);
          if (in_Y(x, p, kHalf) && theta(x, p, kHalf) == z) {
            ++found;
            bool covered = false;
            for (const auto& c : chart.cells) {
              bool inside = true;
              for (int a = 0; a < dim && inside; ++a) {
                const auto& g = chart.grids[static_cast<std::size_t>(a)];
                const auto [lo, hi] = c.spans[static_cast<std::size_t>(a)];
                inside = g[lo] <= x[static_cast<std::size_t>(a)] && x[static_cast<std::size_t>(a)] <= g[hi];
              }
              if (inside) {
                covered = true;
                break;
              }
            }
            CHECK(covered);
          }
          std::size_t i = 0;
          while (i < idx.size() && ++idx[i] == samples.size()) idx[i++] = 0;
          if (i == idx.size()) break;
        }
        CHECK(found > 0);
      }
    }
  }
}

TEST_CASE("p = 1 fibers have at most (n+1) 2^n edges, attained only at the origin") {
  for (int n = 1; n <= 4; ++n) {
    const std::size_t bound = static_cast<std::size_t>(n + 1) << n;
    for (const auto& cell : decomposition_cells(n, 1, Piece::Z)) {
      const auto fiber = theta_fiber_of_cell(cell, 1, kHalf);
      const auto edges = fiber.complex.cell_count(1);
      const bool origin = std::all_of(fiber.base.begin(), fiber.base.end(), [](const Rational& v) { return v == 0; });
      CHECK(edges <= bound);
      CHECK((edges == bound) == origin);
    }
  }
}

TEST_CASE("natural sweepout of the square") {
  const auto s = natural_sweepout(2, 1);
  CHECK(s.symmetric);
  std::size_t interior = 0;
  for (const auto& f : s.fibers) {
    if (f.cell.kind == ConeCell::Kind::Interior) {
      ++interior;
      CHECK(f.edge_count == 4);
      CHECK(f.cube_dimension == 2);
    }
    if (f.cell.kind == ConeCell::Kind::Apex) {
      CHECK(f.edge_count == 4);
      CHECK(f.shapes.size() == 8);
    }
  }
  CHECK(interior == 1);
}

TEST_CASE("natural sweepout of the 3-cube has cube-skeleton fibers") {
  const auto s = natural_sweepout(3, 1);
  CHECK(s.symmetric);
  for (const auto& f : s.fibers) {
    if (f.cell.kind != ConeCell::Kind::Interior) continue;
    CHECK(f.cube_dimension <= 3);
    CHECK(f.cube_dimension >= 2);
    const auto fiber = theta_fiber(f.sample.base, 1, s.level);
    CHECK(shapes_of(fiber.complex) == f.shapes);
    CHECK(recognize_cube_skeleton(fiber.complex, 1).isomorphic);
  }
  CHECK(natural_sweepout(4, 2).symmetric);
  CHECK_THROWS_AS(natural_sweepout(2, 2), DomainError);
}

TEST_CASE("symmetry check detects a broken family") {
  auto s = natural_sweepout(3, 1);
  const auto gens = cube_symmetry_generators(3);
  CHECK(gens.size() == 3);
  // a family that is not invariant: drop one interior shape
  for (auto& f : s.fibers) {
    if (f.cell.kind == ConeCell::Kind::Interior && !f.shapes.empty()) {
      f.shapes.erase(f.shapes.begin());
      break;
    }
  }
  bool broken = false;
  std::map<std::vector<Rational>, const NaturalFiber*> interior;
  for (const auto& f : s.fibers) {
    if (f.cell.kind == ConeCell::Kind::Interior) interior[f.sample.base] = &f;
  }
  for (const auto& g : gens) {
    for (const auto& [base, f] : interior) broken = broken || interior.at(g.apply(base))->shapes != g.apply(f->shapes);
  }
  CHECK(broken);
}

TEST_CASE("Y is a pseudomanifold with boundary on the cube boundary") {
  const auto v = validate_Y(2, 1, kHalf);
  CHECK(v.passed());
  CHECK(v.top_cells == 24);
  CHECK_FALSE(v.report.closed());

  // every 1-face of Y interior to C^3 borders exactly two 2-cells of Y
  const auto cells = as_set(decomposition_cells(2, 1, Piece::Y));
  std::map<CubicalCell, int> cofaces;
  for (const auto& c : cells) {
    if (c.dimension() != 2) continue;
    for (const auto& f : enumerate_faces(c, 1)) ++cofaces[f];
  }
  for (const auto& c : cells) {
    if (c.dimension() != 1) continue;
    const bool on_boundary = std::any_of(c.spans.begin(), c.spans.end(),
                                         [](auto s) { return s == std::pair{0, 0} || s == std::pair{4, 4}; });
    if (!on_boundary) CHECK(cofaces[c] == 2);
  }

  for (int n = 1; n <= 4; ++n) {
    for (int p = 1; p <= n; ++p) {
      CAPTURE(n);
      CAPTURE(p);
      CHECK(validate_Y(n, p, kHalf).passed());
    }
  }
}
