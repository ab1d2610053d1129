#pragma once

#include "sweepout/cube_lattice.hpp"
#include "sweepout/pseudo_homology.hpp"

#include <set>
#include <string>
#include <vector>

namespace sweepout {

enum class Piece { Z, X1, X2, Y, Skeleton };

std::string piece_name(Piece piece);

/**
 * The decomposition of C^{n+1} into the tubes X1 (around the p-skeleton) and
 * X2 (around the dual complex Z), meeting along Y. All five pieces live in
 * one chart on the grid {-1, -eps, 0, eps, 1}. X1, X2, Y and the skeleton
 * use the eps-hyperplanes only (so [-eps, eps] is a single span); Z uses the
 * hyperplanes {-1, 0, 1}.
 */
struct DecompositionSet {
  int n = 0;
  int p = 0;
  Rational eps;
  GluedComplex Z, X1, X2, Y, skeleton;

  const GluedComplex& piece(Piece which) const;
};

/// Cells of one piece as chart cells over the standard grid of C^{n+1}.
std::vector<CubicalCell> decomposition_cells(int n, int p, Piece piece);

/// All cells of C^{n+1} cut by the eps-hyperplanes (no hyperplane at 0).
std::vector<CubicalCell> eps_grid_cells(int dim);

DecompositionSet build_decomposition(int n, int p, const Rational& eps);

// Cell-level predicates for one axis span on the standard grid.
bool span_at_least_eps(std::pair<int, int> span);
bool span_at_most_eps(std::pair<int, int> span);

Rational lambda(const Rational& t, const Rational& eps);
/// Inverse of lambda away from zero; z must be nonzero.
Rational lambda_inverse(const Rational& z, const Rational& eps);
Rational mu(const Rational& t, const Rational& eps);
std::pair<Rational, Rational> profile_maps(const Rational& t, const Rational& eps);

// Pointwise membership for x in C^{dim}; p is the codimension parameter.
bool in_X1(const std::vector<Rational>& x, int p, const Rational& eps);
bool in_X2(const std::vector<Rational>& x, int p, const Rational& eps);
bool in_Y(const std::vector<Rational>& x, int p, const Rational& eps);
bool in_Z(const std::vector<Rational>& x, int p);
bool in_skeleton(const std::vector<Rational>& x, int p);

std::vector<Rational> theta(const std::vector<Rational>& x, int p, const Rational& eps);
std::vector<Rational> rho(const std::vector<Rational>& x, int p, const Rational& eps);
std::vector<Rational> rho_bar(const std::vector<Rational>& x, const Rational& eps);
/// All preimages of y under rho_bar when y has every coordinate in (-1, 1);
/// otherwise the preimage is not a finite set and a DomainError is thrown.
std::vector<std::vector<Rational>> rho_bar_preimages(const std::vector<Rational>& y, const Rational& eps);

/** A fiber of theta as a single-chart cubical complex on a refined grid. */
struct FiberComplex {
  std::vector<Rational> base;
  std::vector<int> zero_axes;
  int k = 0;
  Rational eps;
  GluedComplex complex;
};

FiberComplex theta_fiber(const std::vector<Rational>& z, int p, const Rational& eps);
/// Fiber over the barycenter of a cell of Z (a chart cell on the standard grid).
FiberComplex theta_fiber_of_cell(const CubicalCell& z_cell, int p, const Rational& eps);

/// Words over {-, +, *} along the zero axes, one per fiber cell.
std::set<std::string> fiber_words(const FiberComplex& fiber);
/// Words of length k with at most p stars: the p-skeleton of the k-cube.
std::set<std::string> cube_skeleton_words(int k, int p);

struct CubeSkeletonMatch {
  bool isomorphic = false;
  int k = -1;
  std::string reason;
};

/// Decides whether the complex is isomorphic to the p-skeleton of some cube by
/// recognising its 1-skeleton as a hypercube graph and matching every cell to
/// a subcube.
CubeSkeletonMatch recognize_cube_skeleton(const GluedComplex& complex, int p);

/** Image of big_theta in the cone over Z^{n-p-1}. */
struct ConeImage {
  bool apex = false;
  std::vector<Rational> base;
  Rational level;
  bool operator==(const ConeImage&) const = default;
};

/// Level = (p+1)-th smallest absolute coordinate; level 1 is the apex.
ConeImage big_theta(const std::vector<Rational>& x, int p);

/// A cell as the set of coordinates of its corners; independent of grids.
using CellShape = std::set<std::vector<Rational>>;
using ShapeSet = std::set<CellShape>;

ShapeSet shapes_of(const GluedComplex& complex);

struct ConeCell {
  enum class Kind { Bottom, Interior, Apex };
  Kind kind = Kind::Interior;
  CubicalCell base_cell;  // cell of Z^{n-p-1} in C^n, unused for the apex
  auto operator<=>(const ConeCell&) const = default;
};

struct NaturalFiber {
  ConeCell cell;
  ConeImage sample;
  ShapeSet shapes;
  int cube_dimension = 0;  // k for interior fibers
  std::size_t edge_count = 0;
};

struct NaturalSweepout {
  int n = 0;
  int p = 0;
  Rational level;
  std::vector<NaturalFiber> fibers;
  bool symmetric = false;
  std::vector<std::string> symmetry_failures;
};

/// Fibers of big_theta over every cell of the cone, sampled at `level` for
/// interior cells, plus the generator symmetry check.
NaturalSweepout natural_sweepout(int n, int p, const Rational& level = Rational(1, 2));

struct YValidation {
  int n = 0;
  int p = 0;
  PseudomanifoldReport report;
  bool boundary_in_cube_boundary = false;
  std::size_t top_cells = 0;
  double seconds = 0.0;

  bool passed() const { return report.is_pseudomanifold() && boundary_in_cube_boundary; }
};

/// Runs the pseudomanifold checks on Y and confirms that its boundary lies on
/// the boundary of the cube.
YValidation validate_Y(int n, int p, const Rational& eps);

/// Signed coordinate permutation: y[perm[i]] = signs[i] * x[i].
struct SignedPermutation {
  std::vector<int> perm;
  std::vector<int> signs;
  std::vector<Rational> apply(const std::vector<Rational>& x) const;
  CellShape apply(const CellShape& shape) const;
  ShapeSet apply(const ShapeSet& shapes) const;
};

/// Adjacent transpositions and the sign flip of the first coordinate.
std::vector<SignedPermutation> cube_symmetry_generators(int dim);

}  // namespace sweepout
