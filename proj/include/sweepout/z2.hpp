#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace sweepout {

/** Packed vector over the field with two elements. */
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true) {
    if (value) {
      words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    } else {
      words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  BitVector& operator^=(const BitVector& other);
  bool any() const;
  std::size_t count() const;
  /// Index of the highest set bit, if any.
  std::optional<std::size_t> highest() const;
  bool dot(const BitVector& other) const;
  std::vector<std::size_t> support() const;
  bool operator==(const BitVector& other) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/** Column-major matrix over Z2. */
struct Z2Matrix {
  std::size_t rows = 0;
  std::vector<BitVector> cols;

  Z2Matrix() = default;
  Z2Matrix(std::size_t rows, std::size_t cols) : rows(rows), cols(cols, BitVector(rows)) {}
  std::size_t num_cols() const { return cols.size(); }
  Z2Matrix transpose() const;
  BitVector apply(const BitVector& x) const;
};

/**
 * Column reduction with tracking of the original columns combined into each
 * reduced column. Pivots are the highest set bit of each reduced column.
 */
class Z2Reduction {
 public:
  explicit Z2Reduction(const Z2Matrix& matrix);

  std::size_t rank() const { return pivot_cols_.size(); }
  /// Combinations of original columns that sum to zero.
  const std::vector<BitVector>& kernel() const { return kernel_; }
  /// Original columns that contributed a new pivot, in order.
  const std::vector<std::size_t>& pivot_columns() const { return pivot_cols_; }
  /// x with A x = b, or nullopt when b is outside the column space.
  std::optional<BitVector> solve(const BitVector& b) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BitVector> reduced_;
  std::vector<BitVector> combos_;
  std::vector<std::optional<std::size_t>> pivot_owner_;  // per row
  std::vector<std::size_t> pivot_cols_;
  std::vector<BitVector> kernel_;
};

std::size_t z2_rank(const Z2Matrix& matrix);

struct Z2SolveResult {
  bool solvable = false;
  BitVector solution;    // A x = b when solvable
  BitVector obstruction; // c with c A = 0 and c . b = 1 otherwise
};

Z2SolveResult z2_solve(const Z2Matrix& matrix, const BitVector& b);

}  // namespace sweepout
