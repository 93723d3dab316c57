#pragma once

#include <cstddef>
#include <optional>

#include "dslpn/bitmatrix.hpp"
#include "dslpn/bitvec.hpp"
#include "dslpn/sparse_matrix.hpp"

namespace dslpn {

// Minimum weight of a nonzero x with M x = 0, searched up to wMax.
struct DualDistance {
  std::optional<std::size_t> d;  // nullopt means "> wMax"
  BitVec witness;                // length M.cols, weight d; empty when d is absent
};

// Exact search by increasing weight. Weight w is found by enumerating the
// leading w-1 (w <= 3) or w-2 (w >= 4) indices in lexicographic order and
// looking the remaining one or two columns up in a hash table, so the cost
// per weight is about C(m, w-2). Stops at rank(M)+1, where a dependency is
// guaranteed, and returns at once when M has full column rank.
DualDistance dualDistance(const BitMatrix& m, std::size_t wMax);
DualDistance dualDistance(const SparseMatrix& m, std::size_t wMax);

}  // namespace dslpn
