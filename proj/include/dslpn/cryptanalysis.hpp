#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dslpn/bitmatrix.hpp"
#include "dslpn/bitvec.hpp"
#include "dslpn/rng.hpp"
#include "dslpn/sparse_matrix.hpp"

namespace dslpn {

// Bias = Pr[<b, v> = 0] - 1/2 over LPN samples b = sA + e.
struct LinearTestResult {
  BitVec testVector;
  bool inKernel = false;
  double analyticBias = 0;  // (1-2eps)^wt(v)/2 in the kernel, else 0
  double empiricalBias = 0;
  double stdErr = 0;
  std::size_t trials = 0;
};

// Fresh lpnSample per trial; trials are split into blocks of 1024 with child
// RNG streams, so the result does not depend on `workers`.
LinearTestResult biasOf(const BitMatrix& A, const BitVec& v, double eps, std::size_t trials, Rng& rng,
                        std::size_t workers = 1);

struct DualDistanceStats {
  std::size_t trials = 0;
  std::size_t hits = 0;        // dd <= wMax
  double frequency = 0;
  double stdErr = 0;
  double birthdayFloor = 0;    // Pr[two equal columns], exact product
  double predictedOrder = 0;   // (k / n^delta)^(k-2)
  std::size_t wMax = 0;        // floor(c * n^delta), at least 2
};

// Fresh uniformSparse(n, m, k) per trial.
DualDistanceStats dualDistanceStats(std::size_t n, std::size_t m, std::size_t k, double delta, double c,
                                    std::size_t trials, Rng& rng, std::size_t workers = 1);

struct AttackReport {
  std::vector<std::size_t> subsetS;
  std::vector<std::size_t> columnsFound;  // columns with support inside S
  std::optional<BitVec> dependency;       // A v = 0, support in columnsFound
  std::size_t subsetsTried = 0;
  bool duplicate = false;                 // dependency is a repeated column
  bool success = false;
  std::optional<bool> guess;              // <b, dependency> when b is given
};

// Random row subsets S of size tSize; T = columns whose support lies in S. A
// repeated column gives a weight-2 dependency at once; otherwise the first
// kernel basis vector of A restricted to T is taken once |T| > |S|. The
// dependency is re-checked against A before it is reported.
AttackReport sparseAttack(const BitMatrix& A, const std::optional<BitVec>& b, std::size_t tSize,
                          std::size_t maxSubsets, Rng& rng);
AttackReport sparseAttack(const SparseMatrix& M, const std::optional<BitVec>& b, std::size_t tSize,
                          std::size_t maxSubsets, Rng& rng);

struct UnmaskResult {
  bool success = false;
  std::size_t tries = 0;
  BitMatrix Z;          // rows found so far; rows(A) x rows(A) on success
  BitMatrix recovered;  // Z * A
};

// Looks for the rows z of T^-1: a random rows(A)-subset of columns that
// avoids the support of one row of M has a one-dimensional left kernel
// spanned by that z, and z A is sparse (weight <= 2 k m / rows). Success
// needs rows(A) independent such z and every column of Z A of weight k;
// while that fails the heaviest row is dropped and the search goes on.
UnmaskResult unmaskSquareT(const BitMatrix& A, std::size_t k, Rng& rng, std::size_t maxTries);

// Rows of both matrices compared as multisets.
bool equalUpToRowPermutation(const BitMatrix& a, const BitMatrix& b);

enum class DistinguishStrategy { kBestKernelVector, kSparseAttackPipeline };

struct DistinguishConfig {
  std::size_t n = 64;
  std::size_t m = 16384;
  std::size_t k = 3;
  double alpha = 1;  // 1: A = M (plain Sparse LPN); otherwise A = T M with T (alpha n x n)
  double eps = 0;
  std::size_t tSize = 8;       // sparse attack subset size
  std::size_t maxSubsets = 50;
  std::size_t wMax = 3;        // kernel-vector search bound
  std::size_t instances = 100;
  std::size_t samplesPerInstance = 100;
};

struct AdvantageEstimate {
  std::size_t trials = 0;  // LPN draws (as many uniform draws)
  std::size_t instancesWithVector = 0;
  double acceptLpn = 0;      // Pr[guess LPN | LPN]
  double acceptUniform = 0;  // Pr[guess LPN | uniform]
  double advantage = 0;
  double stdErr = 0;
  double predicted = 0;  // mean over instances of (1-2eps)^wt(v)/2, 0 without v
};

// Per instance: sample A, run the strategy on A once, then classify fresh
// LPN and uniform b by <b, v> = 0 (a fair coin when no v was found).
AdvantageEstimate distinguishDenseSparse(const DistinguishConfig& config, DistinguishStrategy strategy, Rng& rng,
                                         std::size_t workers = 1);

}  // namespace dslpn
