#pragma once

#include "sweepout/cube_lattice.hpp"
#include "sweepout/filling_radius.hpp"

#include <map>
#include <string>
#include <vector>

namespace sweepout {

/** An edge of a fiber; `site` identifies the segment of the surface it runs along. */
struct FiberArc {
  std::string from, to;
  std::string site;
  Rational length;
};

/**
 * A fiber of a map from the starfish to a tree, over parameter `param` of ray
 * `ray` ("center" for the central vertex).
 */
struct StarfishFiber {
  std::string ray;
  Rational param;
  std::vector<FiberArc> arcs;
  std::vector<std::string> isolated;  // vertices of point fibers

  Rational length() const;
  std::map<std::string, int> degrees() const;
  /// Every vertex has even degree (point fibers and the empty fiber count).
  bool is_cycle() const;
  /// Connected and every vertex of degree 2.
  bool is_simple_loop() const;
  std::size_t component_count() const;
};

/// Sum over sites of |multiplicity difference| times the site length.
Rational symmetric_difference_length(const StarfishFiber& a, const StarfishFiber& b);

/**
 * A cubulated sphere made of three tubes of `levels` rings of `resolution`
 * vertices, joined along a theta graph and capped off, with its graph metric
 * and the fibers of the map to the tripod.
 */
struct StarfishInstance {
  Rational leg_length;
  Rational tube_radius;
  int resolution = 0;
  int levels = 0;
  Rational chord;  // ring edge length
  GluedComplex M;
  FiniteMetricSpace metric;
  std::vector<std::string> vertex_names;  // metric point -> name
  std::map<std::string, std::size_t> vertex_index;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<Rational> edge_lengths;
  StarfishFiber center;
  std::vector<std::vector<StarfishFiber>> rays;  // per leg, outward; the first is the limit at the center
  Rational max_fiber_length;
  Rational max_loop_length;
  /// Length of the multiset difference between the center fiber and the
  /// union of the ray limits.
  Rational center_jump;
};

/// resolution: ring vertex count, even and at least 4; levels: rings per
/// leg, at least 1. Throws DomainError otherwise.
StarfishInstance make_starfish(const Rational& leg_length, const Rational& tube_radius, int resolution,
                               int levels = 3);

struct CircleSample {
  Rational t;
  StarfishFiber fiber;
};

/** The starfish swept out over a hexapod, and its composition with a circle map. */
struct HexapodSweepout {
  StarfishFiber center;                          // six arcs
  std::vector<std::vector<StarfishFiber>> rays;  // three legs, then three thin disks
  std::vector<StarfishFiber> center_shares;      // per ray: its part of the center fiber
  std::vector<CircleSample> circle;              // fibers over t in [0, 1]
  Rational max_fiber_length;
  Rational max_loop_length;
  Rational tripod_max_fiber_length;
  Rational length_ratio;  // hexapod max / tripod max
  bool all_cycles = false;
  Rational center_jump;
  Rational max_consecutive_difference;  // along each ray, starting at its center share
};

HexapodSweepout hexapodize(const StarfishInstance& starfish);

/// Waist and Urysohn width bounds read off the tripod fibers: the longest
/// fiber, and the largest fiber diameter plus twice the longest edge.
SweepoutMeasurements measurements(const StarfishInstance& starfish);

}  // namespace sweepout
