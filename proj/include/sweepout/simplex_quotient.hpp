#pragma once

#include "sweepout/sweepout_engine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sweepout {

/**
 * A point of the simplex 0 <= t_1 <= ... <= t_{n-1} <= 1, the quotient of T by
 * the signed permutations of the cube coordinates.
 */
struct SimplexQuotient {
  std::vector<Rational> coords;

  bool is_generic() const;
  bool on_boundary() const;
};

/// Sorted absolute values of a point of Z^{n-1} in C^{n+1}, minus two zeros.
SimplexQuotient simplex_quotient(const std::vector<Rational>& z_point);
/// The quotient of a point of T. A point of a boundary chart at level s
/// contributes 2s in place of its normal coordinate.
SimplexQuotient simplex_quotient(const SweepoutBundle& bundle, const TPoint& t);

/// (1/(n+3), ..., (n-1)/(n+3)).
std::vector<Rational> default_simplex_sample(int n);

/**
 * One preimage of the simplex under the quotient, as a rule assigning the
 * simplex coordinates to the axes of a chart of T. rank_axis[j] carries t_j;
 * for a boundary chart the rank holding the level axis gives s = t_j / 2.
 */
struct QuotientBranch {
  int t_chart = 0;
  bool boundary_piece = false;
  std::pair<int, int> zero_axes;
  std::vector<int> rank_axis;
  std::vector<int> signs;  // per axis, +-1 (ignored on zero axes and the level axis)

  TPoint point(const SweepoutBundle& bundle, const std::vector<Rational>& x) const;
};

std::vector<QuotientBranch> quotient_branches(const SweepoutBundle& bundle);

/**
 * The loop over a branch at simplex point `at`, oriented by the branch at the
 * generic point `orient_at`. Edge signs give the orientation of the fiber
 * induced by N and the simplex. Returns nullopt when the loop collapses to a
 * point (level zero).
 */
std::optional<FiberRecord> branch_loop(const SweepoutBundle& bundle, const QuotientBranch& branch,
                                       const std::vector<Rational>& at, const std::vector<Rational>& orient_at);

struct HbarFiber {
  std::vector<Rational> x;
  std::vector<QuotientBranch> branches;
  std::vector<FiberRecord> loops;
  std::size_t enumerated_count = 0;
  BigInt formula_count;  // 2^n (n+1)! |P| + 2^(n-1) n! |boundary P|
  bool count_mismatch = false;
  bool all_simple = false;
  bool pairwise_disjoint = false;
  Rational max_loop_length;
  Rational loop_bound;  // 4 delta
  bool within_bound = false;
};

/// Loops over a generic interior point of the simplex (pairwise distinct
/// coordinates in (0, 1)); others raise DomainError.
HbarFiber hbar_fiber(const SweepoutBundle& bundle, const std::vector<Rational>& x);

struct PairingCluster {
  std::vector<std::size_t> branch_indices;
  FiberRecord limit_fiber;  // signed edges of the limit loops in this cluster
  bool cancels = false;
};

struct PairingCertificate {
  std::vector<Rational> x0;
  std::vector<Rational> approach;
  std::vector<std::string> cases;  // "facet", "sign", "isotropy"
  std::size_t degenerate_branches = 0;
  std::vector<PairingCluster> clusters;
  bool zero_chain = false;  // the signed sum of all limit loops vanishes
};

/**
 * Limits of the loops over `approach` as it tends to the boundary point x0,
 * grouped into clusters of touching loops. Each cluster's signed edge sum must
 * vanish. The default approach moves 1/1000 of the way towards the default
 * sample. x0 off the simplex boundary raises DomainError.
 */
PairingCertificate boundary_pairing(const SweepoutBundle& bundle, const std::vector<Rational>& x0,
                                    const std::optional<std::vector<Rational>>& approach = std::nullopt);

/// The signed sum of the edges as a chain: (from, to, midpoint) key with
/// coefficients, with segments stored in a canonical direction.
std::map<std::vector<PointKey>, long long> signed_edge_chain(const FiberRecord& fiber);

/**
 * Collar of a limit fiber: every edge [a, b] becomes [a, a_s] and [b_s, b]
 * with a_s = s a + (1 - s) m for the midpoint m. Requires a vanishing signed
 * edge sum.
 */
FiberRecord collar_extend(const FiberRecord& fiber, const Rational& s);

}  // namespace sweepout
