#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dslpn/bitmatrix.hpp"
#include "dslpn/bitvec.hpp"

namespace dslpn {

// A * B over GF(2), accumulated as XOR of the rows of B selected by each row of A.
BitMatrix mul(const BitMatrix& a, const BitMatrix& b);

std::size_t rank(const BitMatrix& a);

// Reduced row echelon form. Pivot rule: in each column, the first row at or
// below the current pivot row with a one.
struct Echelon {
  BitMatrix reduced;
  std::vector<std::size_t> pivotColumns;  // ascending; pivotColumns[i] is the pivot of row i
};
Echelon reducedEchelon(BitMatrix a);

// Basis of {x : A x = 0}, one vector per free column in increasing column order.
std::vector<BitVec> kernelBasis(const BitMatrix& a);

// Inverse of a square matrix, or nullopt when it is singular. Non-square input
// throws DimensionError.
std::optional<BitMatrix> invert(const BitMatrix& a);

// Some x with A x = y, or nullopt when y is outside the column span.
std::optional<BitVec> solve(const BitMatrix& a, const BitVec& y);

// All 2^|basis| linear combinations of `basis` (including zero), in Gray-code
// order. Intended for small spans only.
std::vector<BitVec> spanOf(const std::vector<BitVec>& basis, std::size_t len);

}  // namespace dslpn
