#pragma once

#include "sweepout/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sweepout {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by glue() when an identification is malformed; carries the index of
/// the offending identification and the two (chart, facet) endpoints.
class GluingError : public std::runtime_error {
 public:
  GluingError(std::size_t index, int chart_a, int facet_a, int chart_b, int facet_b,
              const std::string& reason);
  std::size_t index;
  int chart_a, facet_a, chart_b, facet_b;
};

enum class Ring { Z, Z2 };

std::string ring_name(Ring ring);

/** Strictly increasing breakpoints along one axis. */
class AxisGrid {
 public:
  AxisGrid() = default;
  explicit AxisGrid(std::vector<Rational> points);

  /// {-1, -eps, 0, eps, 1}; eps must lie strictly between 0 and 1.
  static AxisGrid standard(const Rational& eps);
  /// {-1, 0, 1}
  static AxisGrid unit();
  /// {-1, 1}
  static AxisGrid coarse();

  int size() const { return static_cast<int>(points_.size()); }
  const Rational& operator[](int i) const { return points_.at(static_cast<std::size_t>(i)); }
  const std::vector<Rational>& points() const { return points_; }
  std::optional<int> index_of(const Rational& value) const;
  bool is_symmetric() const;
  bool contains_standard_points() const;
  /// Negated and re-sorted breakpoints.
  AxisGrid reflected() const;

  bool operator==(const AxisGrid& other) const { return points_ == other.points_; }

 private:
  std::vector<Rational> points_;
};

/**
 * A cube cell inside one chart. Each axis carries a span of grid indices
 * (lo, hi) with lo <= hi; lo == hi is a degenerate (point) interval. Spans may
 * skip grid points, so [-eps, eps] on the standard grid is the span (1, 3).
 */
struct CubicalCell {
  int chart = 0;
  std::vector<std::pair<int, int>> spans;

  int dimension() const;
  int ambient_dimension() const { return static_cast<int>(spans.size()); }
  std::vector<int> free_axes() const;

  auto operator<=>(const CubicalCell&) const = default;
  bool operator==(const CubicalCell&) const = default;
};

std::string to_string(const CubicalCell& cell);

/// All faces of codimension `codim`; there are 2^codim * C(dim, codim) of them.
std::vector<CubicalCell> enumerate_faces(const CubicalCell& cell, int codim);

struct SignedFace {
  CubicalCell face;
  int incidence;
};

/// Codimension-one faces with the incidence numbers of the fixed orientation
/// convention: (-1)^(free axes before i) times -1 at lo, +1 at hi.
std::vector<SignedFace> signed_facets(const CubicalCell& cell);

/// Corner vertices ordered by bit pattern over the free axes (bit j set = hi
/// endpoint of the j-th free axis).
std::vector<CubicalCell> corners(const CubicalCell& cell);

std::vector<CubicalCell> close_under_faces(std::vector<CubicalCell> cells);

/** Per-axis grids plus a face-closed cell set. */
struct Chart {
  std::vector<AxisGrid> grids;
  std::vector<CubicalCell> cells;  // sorted, unique, face-closed

  int dimension() const { return static_cast<int>(grids.size()); }
  bool contains(const CubicalCell& cell) const;
  std::vector<Rational> coordinates(const CubicalCell& vertex) const;
  /// Midpoint of each span, exact.
  std::vector<Rational> barycenter(const CubicalCell& cell) const;

  /// The single cube spanning the whole grid together with its faces.
  static Chart single_cube(std::vector<AxisGrid> grids);
  /// Every elementary cell of the grid.
  static Chart subdivided(std::vector<AxisGrid> grids);
  /// Face closure of the given top cells.
  static Chart from_cells(std::vector<AxisGrid> grids, std::vector<CubicalCell> cells);
};

/**
 * Pastes facet `facet_a` of chart `chart_a` onto facet `facet_b` of chart
 * `chart_b`. Facet 2i is x_i = min, facet 2i+1 is x_i = max. Tangent axis i is
 * sent to axis perm[i] with coordinate multiplied by signs[i]; perm must send
 * the normal axis of the first facet to the normal axis of the second.
 */
struct Identification {
  int chart_a = 0;
  int facet_a = 0;
  int chart_b = 0;
  int facet_b = 0;
  std::vector<int> perm;
  std::vector<int> signs;
};

struct Incidence {
  std::size_t face;
  int coeff;
};

/**
 * Abstract finite chain complex: per-dimension cell counts, boundary
 * incidence lists (possibly with repeated faces) and optional vertex lists.
 */
class ChainComplex {
 public:
  ChainComplex() = default;
  explicit ChainComplex(int top_dimension);

  int top_dimension() const { return static_cast<int>(counts_.size()) - 1; }
  std::size_t count(int k) const;
  std::size_t total_cells() const;

  /// Boundary incidences of the k-cell `cell`; empty for k = 0.
  const std::vector<Incidence>& boundary(int k, std::size_t cell) const;
  /// Merged boundary coefficients over the ring (zero entries dropped).
  std::map<std::size_t, long long> boundary_coefficients(int k, std::size_t cell, Ring ring) const;
  const std::vector<std::size_t>& vertices(int k, std::size_t cell) const;

  std::size_t add_cell(int k, std::vector<Incidence> boundary, std::vector<std::size_t> vertices = {});

  /// Simplicial complex generated by the given simplices (vertex lists), with
  /// the alternating-sum boundary over sorted vertex order.
  static ChainComplex from_simplices(const std::vector<std::vector<std::size_t>>& simplices);

 private:
  std::vector<std::size_t> counts_;
  std::vector<std::vector<std::vector<Incidence>>> boundary_;
  std::vector<std::vector<std::vector<std::size_t>>> vertices_;
};

/** Sparse chain of fixed degree; zero coefficients are never stored. */
struct ChainVector {
  int degree = 0;
  Ring ring = Ring::Z2;
  std::map<std::size_t, long long> coeffs;

  ChainVector() = default;
  ChainVector(int degree, Ring ring) : degree(degree), ring(ring) {}

  void add(std::size_t cell, long long coeff);
  bool empty() const { return coeffs.empty(); }
  std::size_t support_size() const { return coeffs.size(); }
  ChainVector operator+(const ChainVector& other) const;
  ChainVector operator-(const ChainVector& other) const;
  ChainVector negated() const;
  bool operator==(const ChainVector& other) const;
};

ChainVector boundary_of(const ChainComplex& complex, const ChainVector& chain);

struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::map<std::size_t, long long>> columns;
};

/// Matrix of the boundary map from k-chains to (k-1)-chains.
SparseMatrix boundary_matrix(const ChainComplex& complex, int k, Ring ring);

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b, Ring ring);

struct PointKey {
  int chart = 0;
  std::vector<Rational> coords;
  auto operator<=>(const PointKey&) const = default;
  bool operator==(const PointKey&) const = default;
};

std::string to_string(const PointKey& key);

struct CellRef {
  int dim = 0;
  std::size_t id = 0;
  int orientation = 1;  // chart cell orientation relative to the class orientation
};

class GluedComplex {
 public:
  const std::vector<Chart>& charts() const { return charts_; }
  const std::vector<Identification>& identifications() const { return identifications_; }
  int dimension() const { return chains_.top_dimension(); }
  std::size_t cell_count(int k) const { return chains_.count(k); }
  const ChainComplex& chains() const { return chains_; }

  /// Lexicographically smallest chart cell of the class.
  const CubicalCell& representative(int k, std::size_t id) const;
  const std::vector<CubicalCell>& members(int k, std::size_t id) const;
  std::optional<CellRef> find(const CubicalCell& cell) const;
  CellRef require(const CubicalCell& cell) const;

  /// Number of chart cells absorbed into another class by identifications.
  std::size_t merged_cells() const { return merged_; }

  /// Smallest (chart, coordinates) reachable from the point through the
  /// identifications. Points equal in the quotient get equal keys.
  PointKey canonical_point(int chart, const std::vector<Rational>& coords) const;

  int euler_characteristic() const;

  friend GluedComplex glue(std::vector<Chart> charts, std::vector<Identification> identifications);

 private:
  std::vector<Chart> charts_;
  std::vector<Identification> identifications_;
  ChainComplex chains_;
  std::vector<std::vector<CubicalCell>> representatives_;
  std::vector<std::vector<std::vector<CubicalCell>>> members_;
  std::map<CubicalCell, CellRef> lookup_;
  std::size_t merged_ = 0;
};

/// Builds the quotient complex. Throws GluingError naming the offending
/// identification when it is not a grid-compatible bijection of facets.
GluedComplex glue(std::vector<Chart> charts, std::vector<Identification> identifications = {});

/// Subcomplex of all cells of dimension <= p.
GluedComplex skeleton(const GluedComplex& complex, int p);

/// Coordinates of chart point `coords` after applying identification
/// `ident` (forward direction, first facet onto second).
std::vector<Rational> apply_identification(const Identification& ident,
                                           const std::vector<AxisGrid>& target_grids,
                                           const std::vector<Rational>& coords);

/**
 * Glues unit cubes [-1,1]^dim whose corners carry labels; cube c lists
 * 2^dim labels indexed by corner bits (bit i set = x_i = +1). Facets with
 * equal label sets are identified by the signed permutation matching labels.
 */
GluedComplex from_labeled_cubes(int dim, const std::vector<std::vector<int>>& corner_labels);

/// Identifications that from_labeled_cubes would use.
std::vector<Identification> labeled_identifications(int dim,
                                                    const std::vector<std::vector<int>>& corner_labels);

std::size_t binomial(int n, int k);

}  // namespace sweepout
