#include "dslpn/bitmatrix.hpp"

#include <algorithm>

#include "dslpn/errors.hpp"

namespace dslpn {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVec(cols)) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BitMatrix BitMatrix::fromRows(std::vector<BitVec> rows) {
  BitMatrix m;
  m.cols_ = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) requireDims(r.size() == m.cols_, "fromRows: ragged rows");
  m.rows_ = std::move(rows);
  return m;
}

BitMatrix BitMatrix::fromStrings(const std::vector<std::string_view>& rows) {
  std::vector<BitVec> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(BitVec::fromString(r));
  return fromRows(std::move(out));
}

BitMatrix BitMatrix::fromColumns(std::size_t rows, const std::vector<BitVec>& columns) {
  BitMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    requireDims(columns[j].size() == rows, "fromColumns: column length mismatch");
    for (std::size_t i : columns[j].support()) m.set(i, j);
  }
  return m;
}

BitVec BitMatrix::column(std::size_t j) const {
  requireDims(j < cols_, "column index out of range");
  BitVec c(rows());
  for (std::size_t i = 0; i < rows(); ++i) {
    if (rows_[i].get(j)) c.set(i);
  }
  return c;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j : rows_[i].support()) t.set(j, i);
  }
  return t;
}

BitMatrix BitMatrix::selectColumns(const std::vector<std::size_t>& cols) const {
  BitMatrix out(rows(), cols.size());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      requireDims(cols[c] < cols_, "selectColumns: index out of range");
      if (rows_[i].get(cols[c])) out.set(i, c);
    }
  }
  return out;
}

BitMatrix BitMatrix::selectRows(const std::vector<std::size_t>& rows) const {
  std::vector<BitVec> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) {
    requireDims(r < this->rows(), "selectRows: index out of range");
    out.push_back(rows_[r]);
  }
  BitMatrix m = fromRows(std::move(out));
  m.cols_ = cols_;
  return m;
}

BitVec BitMatrix::mulVec(const BitVec& x) const {
  requireDims(x.size() == cols_, "mulVec: vector length must equal column count");
  BitVec y(rows());
  for (std::size_t i = 0; i < rows(); ++i) {
    if (rows_[i].dot(x)) y.set(i);
  }
  return y;
}

BitVec BitMatrix::leftMulVec(const BitVec& s) const {
  requireDims(s.size() == rows(), "leftMulVec: vector length must equal row count");
  BitVec y(cols_);
  for (std::size_t i : s.support()) y ^= rows_[i];
  return y;
}

bool BitMatrix::isZero() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const BitVec& r) { return r.isZero(); });
}

BitMatrix& BitMatrix::operator^=(const BitMatrix& other) {
  requireDims(rows() == other.rows() && cols_ == other.cols_, "matrix xor: shape mismatch");
  for (std::size_t i = 0; i < rows(); ++i) rows_[i] ^= other.rows_[i];
  return *this;
}

}  // namespace dslpn
