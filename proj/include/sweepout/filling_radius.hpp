#pragma once

#include "sweepout/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sweepout {

/**
 * A finite metric space given by its distance matrix. Volume and the
 * fundamental degree are optional metadata used by the audits.
 */
struct FiniteMetricSpace {
  std::vector<std::vector<Rational>> distances;
  std::optional<Rational> volume;
  std::optional<int> degree;

  std::size_t size() const { return distances.size(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return distances[i][j]; }
  Rational diameter() const;

  /// Throws DomainError naming the first violated axiom (shape, diagonal,
  /// sign, symmetry, triangle inequality).
  void validate() const;

  FiniteMetricSpace scaled(const Rational& factor) const;
  FiniteMetricSpace relabeled(const std::vector<std::size_t>& order) const;

  /// k equally spaced points on a circle with the given circumference,
  /// measured along the circle.
  static FiniteMetricSpace cycle_graph(std::size_t k, const Rational& circumference);
  /// Shortest-path metric of a connected weighted graph.
  static FiniteMetricSpace from_graph(std::size_t vertices,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                      const std::vector<Rational>& lengths);
  /// Great-circle distances between points of the unit sphere, rounded to
  /// rationals via their double values.
  static FiniteMetricSpace spherical(const std::vector<std::vector<double>>& unit_points);
};

/// The 12 vertices of a regular icosahedron, normalised to the unit sphere.
std::vector<std::vector<double>> icosahedron_vertices();
/// The 6 points +-e_i of the unit sphere in R^3, in the order e1,-e1,e2,-e2,e3,-e3.
std::vector<std::vector<double>> octahedron_vertices();

struct PersistencePair {
  int degree = 0;
  Rational birth;
  std::optional<Rational> death;  // nullopt for an essential class
  /// Cycle present at the birth threshold, as a list of simplices (sorted
  /// vertex lists) with Z2 coefficients.
  std::vector<std::vector<std::size_t>> representative;

  Rational persistence() const { return death ? *death - birth : Rational(-1); }
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest number of (max_degree+1)-simplices the reduction accepts.
inline constexpr std::size_t kRipsSimplexBudget = 5'000'000;

/**
 * Z2 persistence of the flag complex filtered by diameter. Simplices at equal
 * diameter are ordered by dimension, then lexicographically. Simplices above
 * the enclosing radius are never built: there the complex is a cone, so every
 * class except one component has died. Pairs with zero persistence are kept.
 */
std::vector<PersistencePair> rips_persistence(const FiniteMetricSpace& space, int max_degree);

struct FillRadEstimate {
  Rational value;  // death / 2
  int degree = 0;
  PersistencePair pair;
  std::string convention;
};

/// Half the death threshold of the most persistent class in the given degree
/// (default: the space's degree metadata). Throws DomainError when the degree
/// has no class.
FillRadEstimate fillrad_estimate(const FiniteMetricSpace& space, std::optional<int> degree = std::nullopt);

struct ReferenceConstants {
  int n = 0;
  double sphere_fillrad = 0.0;  // 0.5 * arccos(-1/(n+1)) for the unit sphere
  Rational c_n;                 // 1 / ((n+1) 2^(n+1))
};

ReferenceConstants reference_constants(int n);

/// Upper bounds for the waist and Urysohn width measured on an explicit
/// sweepout of the space.
struct SweepoutMeasurements {
  double waist_upper = 0.0;
  double urysohn_upper = 0.0;
  std::string source;
};

struct AuditClause {
  std::string name;
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool skipped = false;
  bool passed = false;
  bool informational = false;
  std::string notice;
};

struct AuditReport {
  FillRadEstimate estimate;
  std::vector<AuditClause> clauses;

  /// True when every non-skipped, non-informational clause passed.
  bool passed() const;
  const AuditClause* clause(const std::string& name) const;
};

AuditReport inequality_audit(const FiniteMetricSpace& space,
                             const std::optional<SweepoutMeasurements>& sweep = std::nullopt,
                             std::optional<int> degree = std::nullopt, double tolerance = 1e-9);

/// The same audit for an already computed estimate.
AuditReport inequality_audit(const FiniteMetricSpace& space, const FillRadEstimate& estimate,
                             const std::optional<SweepoutMeasurements>& sweep, double tolerance = 1e-9);

}  // namespace sweepout
