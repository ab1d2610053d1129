#include "sweepout/pseudo_homology.hpp"
#include "sweepout/starfish.hpp"

#include <doctest.h>

using namespace sweepout;

TEST_CASE("the starfish is a cubulated sphere") {
  for (int m : {4, 6, 8}) {
    auto s = make_starfish(Rational(6), Rational(1), m, 3);
    auto report = check_pseudomanifold(s.M);
    CHECK(report.is_pseudomanifold());
    CHECK(report.closed());
    CHECK(report.orientable);
    CHECK(s.M.euler_characteristic() == 2);
    CHECK_NOTHROW(s.metric.validate());
  }
  auto s = make_starfish(Rational(6), Rational(1), 6, 3);
  CHECK(s.metric.size() == 65u);
  CHECK(s.chord == 1);
  // Two adjacent ring vertices are one chord apart; a leg tip is a full leg
  // and a cap radius away from the base ring.
  CHECK(s.metric(s.vertex_index.at("l0.1.0"), s.vertex_index.at("l0.1.1")) == 1);
  CHECK(s.metric(s.vertex_index.at("N"), s.vertex_index.at("c0")) == 7);
}

TEST_CASE("tripod fibers: loops on the rays and a theta graph at the center") {
  auto s = make_starfish(Rational(6), Rational(1), 6, 3);
  auto deg = s.center.degrees();
  CHECK(deg.at("N") == 3);
  CHECK(deg.at("S") == 3);
  std::size_t branch_points = 0;
  for (const auto& [v, d] : deg) branch_points += d == 3;
  CHECK(branch_points == 2);
  CHECK_FALSE(s.center.is_cycle());
  CHECK(s.center.length() == 9);
  for (const auto& ray : s.rays) {
    for (const auto& f : ray) {
      if (f.arcs.empty()) {
        CHECK(f.isolated.size() == 1);
        continue;
      }
      CHECK(f.is_simple_loop());
    }
  }
  CHECK(s.max_loop_length == 6);
  CHECK(s.max_fiber_length == 9);
  // The ray limits cover each arc twice, the center once.
  CHECK(s.center_jump == 9);
}

TEST_CASE("fiber lengths scale with the tube radius") {
  auto a = make_starfish(Rational(6), Rational(1), 6, 3);
  auto b = make_starfish(Rational(6), Rational(1, 3), 6, 3);
  CHECK(b.max_loop_length * 3 == a.max_loop_length);
  CHECK(b.max_fiber_length * 3 == a.max_fiber_length);
}

TEST_CASE("the hexapod sweeps out by cycles at most twice as long") {
  for (int m : {4, 6, 8}) {
    auto s = make_starfish(Rational(6), Rational(1), m, 3);
    auto h = hexapodize(s);
    CHECK(h.all_cycles);
    CHECK(h.center.arcs.size() == 6u * static_cast<std::size_t>(m / 2));
    CHECK(h.center.degrees().at("N") == 6);
    CHECK(h.center.degrees().at("S") == 6);
    CHECK(h.length_ratio >= 1);
    CHECK(to_double(h.length_ratio) <= 2.0 * 1.05);
    CHECK(h.center_jump == 0);
    CHECK(h.max_consecutive_difference <= 2 * h.max_loop_length);
    for (std::size_t r = 3; r < 6; ++r) CHECK(h.center_shares[r].is_simple_loop());
    CHECK(h.circle.front().fiber.arcs.empty());
    CHECK(h.circle.back().fiber.arcs.empty());
    for (std::size_t k = 1; k < h.circle.size(); ++k) CHECK(h.circle[k - 1].t < h.circle[k].t);
  }
}

TEST_CASE("starfish parameters are validated") {
  CHECK_THROWS_AS(make_starfish(Rational(6), Rational(1), 3), DomainError);
  CHECK_THROWS_AS(make_starfish(Rational(6), Rational(1), 5), DomainError);
  CHECK_THROWS_AS(make_starfish(Rational(0), Rational(1), 6), DomainError);
  CHECK_THROWS_AS(make_starfish(Rational(6), Rational(1), 6, 0), DomainError);
  StarfishInstance empty;
  CHECK_THROWS_AS(hexapodize(empty), DomainError);
}

TEST_CASE("starfish measurements bound the filling radius") {
  auto s = make_starfish(Rational(6), Rational(1), 6, 3);
  auto meas = measurements(s);
  CHECK(meas.waist_upper == doctest::Approx(9.0));
  auto report = inequality_audit(s.metric, meas, 2);
  for (const auto& c : report.clauses) {
    CAPTURE(c.name);
    if (!c.skipped && !c.informational) CHECK(c.passed);
  }
}
