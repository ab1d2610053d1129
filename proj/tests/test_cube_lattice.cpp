#include "doctest.h"
#include "sweepout/cube_lattice.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace sweepout;

namespace {

CubicalCell cube_cell(int dim, int grid_size) {
  CubicalCell c;
  for (int i = 0; i < dim; ++i) c.spans.push_back({0, grid_size - 1});
  return c;
}

// Oracle: the faces of [-1,1]^d are words over {-, +, *}; count words with j stars.
std::size_t word_count(int d, int j) {
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= 3;
  std::size_t hits = 0;
  for (std::size_t w = 0; w < total; ++w) {
    std::size_t x = w;
    int stars = 0;
    for (int i = 0; i < d; ++i) {
      stars += x % 3 == 2;
      x /= 3;
    }
    hits += stars == j;
  }
  return hits;
}

// Boundary of the 3-cube: six squares with corners labelled by cube vertices.
std::vector<std::vector<int>> cube_surface_labels() {
  std::vector<std::vector<int>> faces;
  for (int a = 0; a < 3; ++a) {
    for (int s = 0; s < 2; ++s) {
      int b = a == 0 ? 1 : 0;
      int c = a == 2 ? 1 : 2;
      std::vector<int> labels;
      for (int u = 0; u < 4; ++u) labels.push_back((s << a) | ((u & 1) << b) | (((u >> 1) & 1) << c));
      faces.push_back(labels);
    }
  }
  return faces;
}

bool boundary_squares_vanish(const ChainComplex& cx, Ring ring) {
  for (int k = 2; k <= cx.top_dimension(); ++k) {
    auto prod = multiply(boundary_matrix(cx, k - 1, ring), boundary_matrix(cx, k, ring), ring);
    for (const auto& col : prod.columns) {
      if (!col.empty()) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("faces of a square and of the 3-cube") {
  auto square = cube_cell(2, 2);
  auto edges = enumerate_faces(square, 1);
  CHECK(edges.size() == 4);
  for (const auto& e : edges) CHECK(e.dimension() == 1);
  auto cube_edges = enumerate_faces(cube_cell(3, 2), 2);
  CHECK(cube_edges.size() == word_count(3, 1));
  CHECK(cube_edges.size() == 12);
  CubicalCell point{0, {{1, 1}, {0, 0}}};
  auto self = enumerate_faces(point, 0);
  REQUIRE(self.size() == 1);
  CHECK(self[0] == point);
  CHECK_THROWS_AS(enumerate_faces(square, 3), DomainError);
}

TEST_CASE("face counts of cubes up to dimension five") {
  for (int d = 0; d <= 5; ++d) {
    for (int j = 0; j <= d; ++j) {
      auto faces = enumerate_faces(cube_cell(d, 2), d - j);
      CHECK(faces.size() == word_count(d, j));
      CHECK(faces.size() == (std::size_t{1} << (d - j)) * binomial(d, j));
      std::set<CubicalCell> unique(faces.begin(), faces.end());
      CHECK(unique.size() == faces.size());
    }
  }
}

TEST_CASE("skeleta of standard cubes") {
  auto c3 = glue({Chart::single_cube(std::vector<AxisGrid>(3, AxisGrid::coarse()))});
  auto s1 = skeleton(c3, 1);
  CHECK(s1.cell_count(0) == 8);
  CHECK(s1.cell_count(1) == 12);
  CHECK(s1.dimension() == 1);
  auto s3 = skeleton(c3, 3);
  for (int k = 0; k <= 3; ++k) CHECK(s3.cell_count(k) == c3.cell_count(k));
  auto c4 = glue({Chart::single_cube(std::vector<AxisGrid>(4, AxisGrid::coarse()))});
  CHECK(skeleton(c4, 2).cell_count(2) == 24);
  CHECK_THROWS_AS(skeleton(c3, 4), DomainError);
}

TEST_CASE("boundary matrices") {
  auto square = glue({Chart::single_cube(std::vector<AxisGrid>(2, AxisGrid::coarse()))});
  auto d2 = boundary_matrix(square.chains(), 2, Ring::Z2);
  REQUIRE(d2.cols == 1);
  CHECK(d2.rows == 4);
  CHECK(d2.columns[0].size() == 4);
  for (const auto& [row, v] : d2.columns[0]) CHECK(v == 1);

  auto c3 = glue({Chart::subdivided(std::vector<AxisGrid>(3, AxisGrid::standard(Rational(1, 2))))});
  CHECK(boundary_squares_vanish(c3.chains(), Ring::Z));
  CHECK(boundary_squares_vanish(c3.chains(), Ring::Z2));

  auto cycle = ChainComplex::from_simplices({{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  auto d1 = boundary_matrix(cycle, 1, Ring::Z);
  CHECK(d1.cols == 4);
  for (const auto& col : d1.columns) {
    REQUIRE(col.size() == 2);
    long long sum = 0;
    std::multiset<long long> values;
    for (const auto& [row, v] : col) {
      sum += v;
      values.insert(v);
    }
    CHECK(sum == 0);
    CHECK(values == std::multiset<long long>{-1, 1});
  }
}

TEST_CASE("two squares glued along an edge") {
  std::vector<AxisGrid> g(2, AxisGrid::coarse());
  Identification id{0, 1, 1, 0, {0, 1}, {1, 1}};
  auto cx = glue({Chart::single_cube(g), Chart::single_cube(g)}, {id});
  CHECK(cx.cell_count(0) == 6);
  CHECK(cx.cell_count(1) == 7);
  CHECK(cx.cell_count(2) == 2);
  CHECK(cx.merged_cells() == 3);
  CHECK(boundary_squares_vanish(cx.chains(), Ring::Z));
}

TEST_CASE("cube surface has Euler characteristic two") {
  auto surface = from_labeled_cubes(2, cube_surface_labels());
  CHECK(surface.cell_count(0) == 8);
  CHECK(surface.cell_count(1) == 12);
  CHECK(surface.cell_count(2) == 6);
  CHECK(surface.euler_characteristic() == 2);
  CHECK(boundary_squares_vanish(surface.chains(), Ring::Z));
}

TEST_CASE("malformed identifications raise gluing errors") {
  std::vector<AxisGrid> g(2, AxisGrid::coarse());
  auto two = [&] { return std::vector<Chart>{Chart::single_cube(g), Chart::single_cube(g)}; };
  // normal axis 0 sent to tangent axis
  Identification bad_perm{0, 1, 1, 0, {1, 0}, {1, 1}};
  try {
    glue(two(), {bad_perm});
    FAIL("expected a gluing error");
  } catch (const GluingError& e) {
    CHECK(e.index == 0);
    CHECK(e.chart_a == 0);
    CHECK(e.facet_b == 0);
  }
  // grids differ along the tangent axis
  std::vector<AxisGrid> g2{AxisGrid::coarse(), AxisGrid::unit()};
  CHECK_THROWS_AS(glue({Chart::single_cube(g), Chart::single_cube(g2)}, {{0, 1, 1, 0, {0, 1}, {1, 1}}}), GluingError);
  // facet of a full square onto a facet of a lone edge chart is not bijective
  Chart partial = Chart::from_cells(g, {CubicalCell{0, {{0, 1}, {0, 0}}}});
  CHECK_THROWS_AS(glue({Chart::single_cube(g), partial}, {{0, 1, 1, 0, {0, 1}, {1, 1}}}), GluingError);
  // a facet glued onto itself reversed
  CHECK_THROWS_AS(glue({Chart::single_cube(g)}, {{0, 1, 0, 1, {0, 1}, {1, -1}}}), GluingError);
}

TEST_CASE("gluing is independent of identification order") {
  auto labels = cube_surface_labels();
  auto ids = labeled_identifications(2, labels);
  std::vector<Chart> charts(6, Chart::single_cube(std::vector<AxisGrid>(2, AxisGrid::coarse())));
  auto reference = glue(charts, ids);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(ids.begin(), ids.end(), rng);
    auto other = glue(charts, ids);
    for (int k = 0; k <= 2; ++k) {
      REQUIRE(other.cell_count(k) == reference.cell_count(k));
      for (std::size_t i = 0; i < reference.cell_count(k); ++i) CHECK(other.members(k, i) == reference.members(k, i));
    }
  }
}

TEST_CASE("canonical points agree across identified facets") {
  std::vector<AxisGrid> g(2, AxisGrid::coarse());
  Identification id{0, 1, 1, 0, {0, 1}, {1, 1}};
  auto cx = glue({Chart::single_cube(g), Chart::single_cube(g)}, {id});
  auto a = cx.canonical_point(0, {Rational(1), Rational(1, 3)});
  auto b = cx.canonical_point(1, {Rational(-1), Rational(1, 3)});
  CHECK(a == b);
  CHECK(a.chart == 0);
  CHECK(cx.canonical_point(1, {Rational(0), Rational(0)}).chart == 1);
}
