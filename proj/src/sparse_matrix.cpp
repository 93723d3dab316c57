#include "dslpn/sparse_matrix.hpp"

#include <algorithm>
#include <string>

#include "dslpn/errors.hpp"

namespace dslpn {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t k, std::vector<std::vector<Index>> columns)
    : rows_(rows), k_(k), columns_(std::move(columns)) {
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    auto& col = columns_[j];
    require(col.size() == k_, "sparse column " + std::to_string(j) + " must have exactly k entries");
    std::sort(col.begin(), col.end());
    require(std::adjacent_find(col.begin(), col.end()) == col.end(),
            "sparse column " + std::to_string(j) + " has a duplicate row index");
    require(col.empty() || col.back() < rows_, "sparse column " + std::to_string(j) + " has a row index >= rows");
  }
}

SparseMatrix SparseMatrix::fromDense(const BitMatrix& dense) {
  const BitMatrix t = dense.transpose();
  std::vector<std::vector<Index>> cols(dense.cols());
  for (std::size_t j = 0; j < dense.cols(); ++j) {
    for (std::size_t i : t.row(j).support()) cols[j].push_back(static_cast<Index>(i));
  }
  const std::size_t k = cols.empty() ? 0 : cols.front().size();
  return SparseMatrix(dense.rows(), k, std::move(cols));
}

BitVec SparseMatrix::denseColumn(std::size_t j) const {
  BitVec c(rows_);
  for (Index i : columns_[j]) c.set(i);
  return c;
}

BitMatrix SparseMatrix::densify() const {
  BitMatrix d(rows_, cols());
  for (std::size_t j = 0; j < cols(); ++j) {
    for (Index i : columns_[j]) d.set(i, j);
  }
  return d;
}

BitVec SparseMatrix::mulVec(const BitVec& x) const {
  requireDims(x.size() == cols(), "mulSparseVec: vector length must equal column count");
  BitVec y(rows_);
  for (std::size_t j : x.support()) {
    for (Index i : columns_[j]) y.flip(i);
  }
  return y;
}

BitMatrix mulDenseSparse(const BitMatrix& t, const SparseMatrix& m) {
  requireDims(t.cols() == m.rows(), "dense*sparse: inner dimensions differ");
  BitMatrix out(t.rows(), m.cols());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const BitVec& trow = t.row(r);
    BitVec& orow = out.row(r);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      bool bit = false;
      for (auto i : m.column(j)) bit ^= trow.get(i);
      if (bit) orow.set(j);
    }
  }
  return out;
}

}  // namespace dslpn
