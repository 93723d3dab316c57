#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "dslpn/bitvec.hpp"

namespace dslpn {

// Dense GF(2) matrix stored row-major, one BitVec per row.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);
  static BitMatrix fromRows(std::vector<BitVec> rows);
  // Each string is one row, e.g. {"110", "011"}.
  static BitMatrix fromStrings(const std::vector<std::string_view>& rows);
  static BitMatrix fromColumns(std::size_t rows, const std::vector<BitVec>& columns);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  const BitVec& row(std::size_t i) const { return rows_[i]; }
  BitVec& row(std::size_t i) { return rows_[i]; }
  const std::vector<BitVec>& rowVectors() const { return rows_; }

  bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool v = true) { rows_[r].set(c, v); }

  BitVec column(std::size_t j) const;
  BitMatrix transpose() const;
  BitMatrix selectColumns(const std::vector<std::size_t>& cols) const;
  BitMatrix selectRows(const std::vector<std::size_t>& rows) const;

  // A * x for a column vector x of length cols().
  BitVec mulVec(const BitVec& x) const;
  // s * A for a row vector s of length rows(): XOR of the rows selected by s.
  BitVec leftMulVec(const BitVec& s) const;

  bool isZero() const;
  friend bool operator==(const BitMatrix& a, const BitMatrix& b) = default;
  BitMatrix& operator^=(const BitMatrix& other);
  friend BitMatrix operator^(BitMatrix a, const BitMatrix& b) { return a ^= b; }

 private:
  std::size_t cols_ = 0;
  std::vector<BitVec> rows_;
};

}  // namespace dslpn
