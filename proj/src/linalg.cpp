#include "dslpn/linalg.hpp"

#include <bit>
#include <utility>

#include "dslpn/errors.hpp"

namespace dslpn {

BitMatrix mul(const BitMatrix& a, const BitMatrix& b) {
  requireDims(a.cols() == b.rows(), "mul: A.cols must equal B.rows");
  BitMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    BitVec& acc = out.row(i);
    for (std::size_t j : a.row(i).support()) acc ^= b.row(j);
  }
  return out;
}

Echelon reducedEchelon(BitMatrix a) {
  Echelon e;
  std::size_t pivotRow = 0;
  for (std::size_t c = 0; c < a.cols() && pivotRow < a.rows(); ++c) {
    std::size_t sel = pivotRow;
    while (sel < a.rows() && !a.get(sel, c)) ++sel;
    if (sel == a.rows()) continue;
    if (sel != pivotRow) std::swap(a.row(sel), a.row(pivotRow));
    const BitVec pivot = a.row(pivotRow);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r != pivotRow && a.get(r, c)) a.row(r) ^= pivot;
    }
    e.pivotColumns.push_back(c);
    ++pivotRow;
  }
  e.reduced = std::move(a);
  return e;
}

std::size_t rank(const BitMatrix& a) {
  // Forward elimination only; cheaper than the full reduced form.
  BitMatrix m = a;
  std::size_t pivotRow = 0;
  for (std::size_t c = 0; c < m.cols() && pivotRow < m.rows(); ++c) {
    std::size_t sel = pivotRow;
    while (sel < m.rows() && !m.get(sel, c)) ++sel;
    if (sel == m.rows()) continue;
    if (sel != pivotRow) std::swap(m.row(sel), m.row(pivotRow));
    for (std::size_t r = pivotRow + 1; r < m.rows(); ++r) {
      if (m.get(r, c)) m.row(r) ^= m.row(pivotRow);
    }
    ++pivotRow;
  }
  return pivotRow;
}

std::vector<BitVec> kernelBasis(const BitMatrix& a) {
  const Echelon e = reducedEchelon(a);
  std::vector<bool> isPivot(a.cols(), false);
  for (std::size_t c : e.pivotColumns) isPivot[c] = true;

  std::vector<BitVec> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (isPivot[f]) continue;
    BitVec x(a.cols());
    x.set(f);
    for (std::size_t i = 0; i < e.pivotColumns.size(); ++i) {
      if (e.reduced.get(i, f)) x.set(e.pivotColumns[i]);
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<BitMatrix> invert(const BitMatrix& a) {
  requireDims(a.rows() == a.cols(), "invert: matrix must be square");
  const std::size_t n = a.rows();
  BitMatrix m = a;
  BitMatrix inv = BitMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = c;
    while (sel < n && !m.get(sel, c)) ++sel;
    if (sel == n) return std::nullopt;
    if (sel != c) {
      std::swap(m.row(sel), m.row(c));
      std::swap(inv.row(sel), inv.row(c));
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r != c && m.get(r, c)) {
        m.row(r) ^= m.row(c);
        inv.row(r) ^= inv.row(c);
      }
    }
  }
  return inv;
}

std::optional<BitVec> solve(const BitMatrix& a, const BitVec& y) {
  requireDims(y.size() == a.rows(), "solve: y length must equal A.rows");
  BitMatrix m = a;
  BitVec rhs = y;
  std::size_t pivotRow = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < m.cols() && pivotRow < m.rows(); ++c) {
    std::size_t sel = pivotRow;
    while (sel < m.rows() && !m.get(sel, c)) ++sel;
    if (sel == m.rows()) continue;
    if (sel != pivotRow) {
      std::swap(m.row(sel), m.row(pivotRow));
      const bool t = rhs.get(sel);
      rhs.set(sel, rhs.get(pivotRow));
      rhs.set(pivotRow, t);
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r != pivotRow && m.get(r, c)) {
        m.row(r) ^= m.row(pivotRow);
        if (rhs.get(pivotRow)) rhs.flip(r);
      }
    }
    pivots.push_back(c);
    ++pivotRow;
  }
  for (std::size_t r = pivotRow; r < m.rows(); ++r) {
    if (rhs.get(r)) return std::nullopt;
  }
  BitVec x(a.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) x.set(pivots[i], rhs.get(i));
  return x;
}

std::vector<BitVec> spanOf(const std::vector<BitVec>& basis, std::size_t len) {
  require(basis.size() < 31, "spanOf: basis too large to enumerate");
  const std::size_t count = std::size_t{1} << basis.size();
  std::vector<BitVec> out;
  out.reserve(count);
  BitVec cur(len);
  out.push_back(cur);
  for (std::size_t g = 1; g < count; ++g) {
    cur ^= basis[static_cast<std::size_t>(std::countr_zero(g))];
    out.push_back(cur);
  }
  return out;
}

}  // namespace dslpn
