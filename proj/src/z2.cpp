#include "sweepout/z2.hpp"

#include <bit>
#include <stdexcept>

namespace sweepout {

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.size_ != size_) throw std::invalid_argument("bit vector size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

bool BitVector::any() const {
  for (auto w : words_) {
    if (w) return true;
  }
  return false;
}

std::size_t BitVector::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::optional<std::size_t> BitVector::highest() const {
  for (std::size_t i = words_.size(); i-- > 0;) {
    if (words_[i]) return i * 64 + 63 - static_cast<std::size_t>(std::countl_zero(words_[i]));
  }
  return std::nullopt;
}

bool BitVector::dot(const BitVector& other) const {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & other.words_[i];
  return std::popcount(acc) % 2 == 1;
}

std::vector<std::size_t> BitVector::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w) {
      out.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

Z2Matrix Z2Matrix::transpose() const {
  Z2Matrix t(cols.size(), rows);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (auto i : cols[j].support()) t.cols[i].set(j);
  }
  return t;
}

BitVector Z2Matrix::apply(const BitVector& x) const {
  BitVector out(rows);
  for (auto j : x.support()) out ^= cols[j];
  return out;
}

Z2Reduction::Z2Reduction(const Z2Matrix& matrix)
    : rows_(matrix.rows), cols_(matrix.num_cols()), pivot_owner_(matrix.rows) {
  reduced_.reserve(cols_);
  combos_.reserve(cols_);
  for (std::size_t j = 0; j < cols_; ++j) {
    BitVector col = matrix.cols[j];
    BitVector combo(cols_);
    combo.set(j);
    while (auto top = col.highest()) {
      auto owner = pivot_owner_[*top];
      if (!owner) break;
      col ^= reduced_[*owner];
      combo ^= combos_[*owner];
    }
    if (auto top = col.highest()) {
      pivot_owner_[*top] = reduced_.size();
      pivot_cols_.push_back(j);
      reduced_.push_back(std::move(col));
      combos_.push_back(std::move(combo));
    } else {
      kernel_.push_back(std::move(combo));
    }
  }
}

std::optional<BitVector> Z2Reduction::solve(const BitVector& b) const {
  if (b.size() != rows_) throw std::invalid_argument("right-hand side has the wrong length");
  BitVector residue = b;
  BitVector x(cols_);
  while (auto top = residue.highest()) {
    auto owner = pivot_owner_[*top];
    if (!owner) return std::nullopt;
    residue ^= reduced_[*owner];
    x ^= combos_[*owner];
  }
  return x;
}

std::size_t z2_rank(const Z2Matrix& matrix) { return Z2Reduction(matrix).rank(); }

Z2SolveResult z2_solve(const Z2Matrix& matrix, const BitVector& b) {
  Z2SolveResult result;
  Z2Reduction red(matrix);
  if (auto x = red.solve(b)) {
    result.solvable = true;
    result.solution = std::move(*x);
    return result;
  }
  // the left kernel of A is orthogonal to the column space, so some member pairs to 1 with b
  Z2Reduction left(matrix.transpose());
  for (const auto& c : left.kernel()) {
    if (c.dot(b)) {
      result.obstruction = c;
      return result;
    }
  }
  throw std::logic_error("z2_solve: no obstruction found for an unsolvable system");
}

}  // namespace sweepout
