#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dslpn/bitmatrix.hpp"
#include "dslpn/bitvec.hpp"

namespace dslpn {

// Column-k-sparse GF(2) matrix: every column holds exactly k distinct row
// indices, kept sorted.
class SparseMatrix {
 public:
  using Index = std::uint32_t;

  SparseMatrix() = default;
  // Sorts each column; throws DomainError on a wrong count, a duplicate or an
  // out-of-range index.
  SparseMatrix(std::size_t rows, std::size_t k, std::vector<std::vector<Index>> columns);

  // Inverse of densify(). Every column of `dense` must have the same weight.
  static SparseMatrix fromDense(const BitMatrix& dense);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }
  std::size_t k() const { return k_; }
  std::span<const Index> column(std::size_t j) const { return columns_[j]; }
  const std::vector<std::vector<Index>>& columns() const { return columns_; }

  BitVec denseColumn(std::size_t j) const;
  BitMatrix densify() const;

  // M * x: XOR of the columns selected by x.
  BitVec mulVec(const BitVec& x) const;

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t k_ = 0;
  std::vector<std::vector<Index>> columns_;
};

// T * M for dense T (r x n) and sparse M (n x m); column j of the result is
// the XOR of the k columns of T indexed by column j of M.
BitMatrix mulDenseSparse(const BitMatrix& t, const SparseMatrix& m);

}  // namespace dslpn
