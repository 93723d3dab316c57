#pragma once

#include <cstddef>

#include "dslpn/bitmatrix.hpp"
#include "dslpn/bitvec.hpp"
#include "dslpn/rng.hpp"
#include "dslpn/sparse_matrix.hpp"

namespace dslpn {

BitVec uniformVec(std::size_t len, Rng& rng);
BitMatrix uniformMatrix(std::size_t rows, std::size_t cols, Rng& rng);
// i.i.d. bits with Pr[1] = eps; eps in [0, 1].
BitVec bernoulliVec(double eps, std::size_t len, Rng& rng);
BitMatrix bernoulliMatrix(double eps, std::size_t rows, std::size_t cols, Rng& rng);

// Each column an independent uniform k-subset of [n] (Floyd's algorithm).
// Duplicate columns are allowed.
SparseMatrix uniformSparse(std::size_t n, std::size_t m, std::size_t k, Rng& rng);

// Rejection-sampled stand-in for a good sparse distribution: accepted samples
// have dual distance >= d, checked exactly.
struct GoodDistSpec {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  std::size_t d = 3;
  std::size_t maxRejects = 1000;
};

// Throws RejectionExhausted after maxRejects rejected samples.
SparseMatrix goodSparse(const GoodDistSpec& spec, Rng& rng);

struct DenseSparse {
  BitMatrix A;
  BitMatrix T;
  SparseMatrix M;
};

// T uniform (alpha*n x n), M from goodSparse, A = T*M. alpha*n must be an
// integer in [1, n].
DenseSparse denseSparseMatrix(std::size_t n, std::size_t m, std::size_t k, double alpha, const GoodDistSpec& spec,
                              Rng& rng);

// b = s*A + e with s uniform and e ~ Ber(eps)^m.
BitVec lpnSample(const BitMatrix& a, double eps, Rng& rng);

}  // namespace dslpn
