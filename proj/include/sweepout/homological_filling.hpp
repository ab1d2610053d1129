#pragma once

#include "sweepout/cube_lattice.hpp"
#include "sweepout/z2.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sweepout {

/** Positive volume of every cell, per degree. */
struct ChainWeighting {
  std::vector<std::vector<Rational>> per_degree;

  static ChainWeighting unit(const ChainComplex& complex);
  /// Euclidean box volume of each cell's representative in its chart.
  static ChainWeighting from_geometry(const GluedComplex& complex);

  const Rational& operator()(int k, std::size_t cell) const;
  /// Sum over the support for Z2 chains, weighted l1 norm for integer chains.
  Rational weight(const ChainVector& chain) const;
  Rational total() const;
  /// Throws DomainError unless every cell has a strictly positive weight.
  void validate(const ChainComplex& complex) const;
};

struct FillingResult {
  bool solvable = false;  // false: no filling exists (infinite filling volume)
  ChainVector chain;
  Rational weight;
  bool exact = false;
  std::size_t solution_dimension = 0;
  std::string note;
};

/**
 * Minimum-weight Z2 solutions of boundary(x) = b for k-cycles b, with the
 * elimination of the (k+1)-boundary map done once.
 */
class FillingSolver {
 public:
  static constexpr std::size_t kExactLimit = 24;

  FillingSolver(const ChainComplex& ambient, int k, const ChainWeighting& weights,
                std::size_t exact_limit = kExactLimit);

  int degree() const { return k_; }
  /// Dimension of the space of (k+1)-cycles, i.e. of every solution coset.
  std::size_t solution_dimension() const { return kernel_.size(); }
  bool exact() const { return kernel_.size() <= exact_limit_; }

  struct Solution {
    bool solvable = false;
    BitVector x;
    Rational weight;
  };
  /// b must be a k-cycle given as a bit vector over the k-cells.
  Solution solve(const BitVector& b) const;

 private:
  int k_ = 0;
  std::size_t cells_ = 0;
  std::size_t exact_limit_ = kExactLimit;
  std::optional<Z2Reduction> reduction_;
  std::vector<std::vector<std::size_t>> kernel_;  // supports of a reduced echelon basis
  std::vector<std::size_t> settled_first_;         // cells no basis vector touches
  std::vector<std::vector<std::size_t>> settled_;  // per basis vector: cells it touches last
  std::vector<std::int64_t> scaled_;              // weights times `scale_`
  Rational scale_ = 1;
};

/// Throws DomainError when b is not a Z2 cycle.
FillingResult min_filling(const ChainVector& b, const ChainComplex& ambient, const ChainWeighting& weights);

enum class FhMode { Auto, Exhaustive, Sampled };

struct FhOptions {
  FhMode mode = FhMode::Auto;
  std::size_t max_exhaustive = 10000;  // cycles
  std::size_t samples = 4096;          // random combinations in sampled mode
  std::uint64_t seed = 1;
};

/** FH_k is constant between consecutive cycle weights; `sup` is nullopt for infinity. */
struct FhStep {
  Rational weight;
  std::optional<Rational> sup;
  std::size_t cycles = 0;  // nonzero cycles of weight <= `weight`
};

struct FhEntry {
  Rational v;
  std::optional<Rational> value;  // nullopt: infinite
  bool exact = false;
  std::size_t cycles = 0;  // nonzero cycles of weight <= v considered
  std::string notice;
};

struct FillingFunctionTable {
  int k = 0;
  bool exhaustive = false;
  bool fillings_exact = true;
  std::size_t cycle_space_dimension = 0;
  std::size_t candidates = 0;
  std::vector<FhStep> steps;  // empty for tables read back from a report
  std::vector<FhEntry> entries;
  std::vector<std::string> notices;
};

/// Step function of FH_k from enumerated or sampled nonzero k-cycles.
FillingFunctionTable fh_table(const ChainComplex& ambient, int k, const ChainWeighting& weights,
                              const FhOptions& options = {});
/// fh_table evaluated on a grid of weights.
FillingFunctionTable fh_profile(const ChainComplex& ambient, int k, const std::vector<Rational>& grid,
                                const ChainWeighting& weights, const FhOptions& options = {});

enum class FhStatus { Exact, UpperBound, LowerBound, Approximate, Extrapolated };
std::string to_string(FhStatus status);

struct FhValue {
  std::optional<Rational> value;  // nullopt: infinite
  FhStatus status = FhStatus::Exact;
  std::string note;

  bool infinite() const { return !value.has_value(); }
};

/// FH_k(v) read from a table; v = nullopt stands for infinity.
FhValue fh_value(const FillingFunctionTable& table, const std::optional<Rational>& v);
/// FH_k(2(k+1) v).
FhValue fh_bar(int k, const std::optional<Rational>& v, const FillingFunctionTable& table);

using CellAssignment = std::map<std::pair<int, std::size_t>, ChainVector>;

/// One line per cell, "dim id: c1 c2 ...", in cell order.
std::string canonical_text(const CellAssignment& assignment);

struct CellReplacement {
  int dim = 0;
  std::size_t cell = 0;
  ChainVector chain;  // in the ambient, degree dim
  Rational volume;
  std::vector<std::size_t> facets;  // model (dim-1)-cells whose images sum to the boundary
  bool kept = false;                // taken unchanged from the supplied assignment
  bool within_bound = true;
};

struct RTransformFailure {
  int stage = 0;  // dimension of the cells being filled
  std::size_t cell = 0;
  std::string message;
};

struct RTransformOptions {
  FhOptions fh{FhMode::Auto, std::size_t{1} << 18, 4096, 1};
  /// Relative slack added to every volume bound, times the total ambient weight.
  Rational epsilon_fraction = Rational(1, 1000000);
};

struct RTransformResult {
  int model_dimension = 0;
  Rational delta;
  Rational epsilon;
  /// Per dimension j: the composite filling bound for j-cells (nullopt: infinite).
  std::vector<std::optional<Rational>> stage_bounds;
  std::vector<FhStatus> stage_status;
  CellAssignment assignment;
  std::vector<CellReplacement> cells;
  ChainVector output;  // sum of the images of the top cells
  std::optional<RTransformFailure> failure;
  bool bounds_hold = true;
  bool bounds_certified = true;  // every stage bound is exact or an upper bound
  bool boundary_commutes = true;

  bool ok() const { return !failure; }
};

/**
 * Replaces every cell of the cubical model by a chain of the ambient: vertices
 * by their images, edges by shortest paths, and each j-cube by a minimal
 * filling of the sum of its facet images. Cells of `existing` whose chain has
 * the right boundary and respects the stage bound are kept as given.
 */
RTransformResult r_transform(const ChainComplex& ambient, const ChainWeighting& weights, const GluedComplex& model,
                             const std::vector<std::size_t>& vertex_map, const Rational& delta,
                             const RTransformOptions& options = {}, const CellAssignment* existing = nullptr);

/// True when boundary(F(C)) equals the sum of F over the facets of C for every cell.
bool commutes_with_boundary(const RTransformResult& result, const ChainComplex& ambient, const GluedComplex& model);

struct BoundValue {
  std::optional<Rational> value;  // nullopt: infinite
  bool available = true;
  bool partial = false;
  std::vector<FhStatus> statuses;
  std::vector<std::string> notes;
};

struct TheoremBounds {
  int n = 0;
  int p = 0;
  Rational fillrad;
  std::size_t face_count = 0;             // 2^(n-p+1) C(n+1,p)
  std::size_t enumerated_face_count = 0;  // p-faces of the (n+1)-cube
  Rational prefactor;                     // 1 / face_count
  BoundValue fr3;
  BoundValue improved;
};

/**
 * Evaluates the cubical bound 1/k FHbar_{p-1} o ... o FHbar_1(2 FillRad) and the
 * simplicial one C(n+1,p)^-1 FH_{p-1}(p FH_{p-2}(... FH_2(3 FH_1(6 FillRad)))). For
 * p = 1 both compositions are empty. Tables are indexed by degree; missing
 * degrees give a partial result.
 */
TheoremBounds theorem_bounds(int n, int p, const Rational& fillrad, const std::map<int, FillingFunctionTable>& tables);

}  // namespace sweepout
