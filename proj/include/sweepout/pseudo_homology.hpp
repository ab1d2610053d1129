#pragma once

#include "sweepout/cube_lattice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sweepout {

/**
 * Result of checking the pseudomanifold axioms on the top dimension of a
 * complex. The boundary is the set of codimension-one cells with exactly one
 * top-dimensional coface.
 */
struct PseudomanifoldReport {
  int dimension = -1;
  bool pure = false;
  bool facet_incidence_ok = false;
  bool strongly_connected = false;
  bool orientable = false;
  ChainVector boundary;                        // Z2 chain of boundary facets
  std::vector<int> orientation;                // per top cell when orientable
  std::vector<std::size_t> orientation_witness;  // cycle of top cells forcing a contradiction
  std::vector<std::string> notes;

  bool is_pseudomanifold() const { return pure && facet_incidence_ok && strongly_connected; }
  bool closed() const { return boundary.empty(); }
};

PseudomanifoldReport check_pseudomanifold(const ChainComplex& complex);
PseudomanifoldReport check_pseudomanifold(const GluedComplex& complex);

/// Sum of the top cells, with orientation signs over Z (requires orientability).
ChainVector fundamental_cycle(const ChainComplex& complex, Ring ring);

struct HomologyResult {
  int degree = 0;
  Ring ring = Ring::Z2;
  long long betti = 0;
  std::vector<long long> torsion;  // invariant factors > 1, integers only
  std::vector<ChainVector> representatives;
};

HomologyResult homology(const ChainComplex& complex, int k, Ring ring);

/** Dense integer matrix with overflow-checked Smith normal form. */
struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<long long> data;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
  long long& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  long long at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_sparse(const SparseMatrix& m);
};

struct SmithForm {
  IntMatrix D;  // diagonal, D = U * A * V
  IntMatrix U;
  IntMatrix V;
  std::vector<long long> diagonal;  // nonzero invariant factors in order
};

/// Throws std::overflow_error when an intermediate entry leaves int64.
SmithForm smith_normal_form(const IntMatrix& a, bool track_transforms);

struct HomologousResult {
  bool homologous = false;
  ChainVector witness;      // x with boundary(x) = a - b
  ChainVector obstruction;  // Z2 cocycle pairing to 1 with a - b, when available
  std::string note;
};

/// Decides whether two cycles of equal degree differ by a boundary.
HomologousResult homologous(const ChainVector& a, const ChainVector& b, const ChainComplex& ambient);

class SubdivisionRequired : public DomainError {
 public:
  using DomainError::DomainError;
};

struct DegreeResult {
  long long degree = 0;
  Ring ring = Ring::Z2;
  std::size_t regular_cell = 0;
  std::size_t preimage_cells = 0;
};

/**
 * Degree of a cellular map between closed pseudomanifolds of equal dimension,
 * given by its action on vertices. Top cells whose image has fewer distinct
 * vertices count zero; a top cell whose vertex image is not the vertex set of
 * a cell raises SubdivisionRequired.
 */
DegreeResult degree(const ChainComplex& source, const ChainComplex& target,
                    const std::vector<std::size_t>& vertex_map, Ring ring,
                    std::optional<std::size_t> regular_cell = std::nullopt);

}  // namespace sweepout
