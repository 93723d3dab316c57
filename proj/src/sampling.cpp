#include "dslpn/sampling.hpp"

#include <cmath>
#include <string>

#include "dslpn/dual_distance.hpp"
#include "dslpn/errors.hpp"

namespace dslpn {

BitVec uniformVec(std::size_t len, Rng& rng) {
  BitVec v(len);
  for (auto& w : v.mutableWords()) w = rng.nextU64();
  v.clearTail();
  return v;
}

BitMatrix uniformMatrix(std::size_t rows, std::size_t cols, Rng& rng) {
  BitMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) a.row(i) = uniformVec(cols, rng);
  return a;
}

BitVec bernoulliVec(double eps, std::size_t len, Rng& rng) {
  require(eps >= 0.0 && eps <= 1.0, "bernoulliVec: eps must lie in [0, 1]");
  BitVec v(len);
  if (eps == 0.0) return v;
  if (eps == 1.0) return BitVec::ones(len);
  const std::uint64_t threshold = bernoulliThreshold(eps);
  for (std::size_t i = 0; i < len; ++i) {
    if (rng.nextU64() < threshold) v.set(i);
  }
  return v;
}

BitMatrix bernoulliMatrix(double eps, std::size_t rows, std::size_t cols, Rng& rng) {
  BitMatrix e(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) e.row(i) = bernoulliVec(eps, cols, rng);
  return e;
}

SparseMatrix uniformSparse(std::size_t n, std::size_t m, std::size_t k, Rng& rng) {
  require(k <= n, "uniformSparse: k must not exceed n");
  require(m >= 1, "uniformSparse: m must be at least 1");
  std::vector<std::vector<SparseMatrix::Index>> cols(m);
  for (auto& col : cols) {
    col.reserve(k);
    // Floyd: for j = n-k .. n-1 pick t in [0, j]; take t unless already taken, else j.
    for (std::size_t j = n - k; j < n; ++j) {
      const auto t = static_cast<SparseMatrix::Index>(rng.uniformBelow(j + 1));
      bool taken = false;
      for (auto c : col) taken |= (c == t);
      col.push_back(taken ? static_cast<SparseMatrix::Index>(j) : t);
    }
  }
  return SparseMatrix(n, k, std::move(cols));
}

SparseMatrix goodSparse(const GoodDistSpec& spec, Rng& rng) {
  require(spec.d >= 1, "goodSparse: d must be at least 1");
  require(spec.maxRejects >= 1, "goodSparse: maxRejects must be at least 1");
  for (std::size_t attempt = 0; attempt < spec.maxRejects; ++attempt) {
    SparseMatrix m = uniformSparse(spec.n, spec.m, spec.k, rng);
    if (spec.d == 1 || !dualDistance(m, spec.d - 1).d) return m;
  }
  throw RejectionExhausted("goodSparse: no sample with dual distance >= " + std::to_string(spec.d) + " in " +
                           std::to_string(spec.maxRejects) + " attempts (n=" + std::to_string(spec.n) +
                           ", m=" + std::to_string(spec.m) + ", k=" + std::to_string(spec.k) + ")");
}

DenseSparse denseSparseMatrix(std::size_t n, std::size_t m, std::size_t k, double alpha, const GoodDistSpec& spec,
                              Rng& rng) {
  require(spec.n == n && spec.m == m && spec.k == k, "denseSparseMatrix: spec dimensions differ from (n, m, k)");
  const double rowsReal = alpha * static_cast<double>(n);
  require(rowsReal >= 1.0 && rowsReal <= static_cast<double>(n) && std::floor(rowsReal) == rowsReal,
          "denseSparseMatrix: alpha*n must be an integer in [1, n]");
  DenseSparse out;
  out.T = uniformMatrix(static_cast<std::size_t>(rowsReal), n, rng);
  out.M = goodSparse(spec, rng);
  out.A = mulDenseSparse(out.T, out.M);
  return out;
}

BitVec lpnSample(const BitMatrix& a, double eps, Rng& rng) {
  const BitVec s = uniformVec(a.rows(), rng);
  BitVec b = a.leftMulVec(s);
  b ^= bernoulliVec(eps, a.cols(), rng);
  return b;
}

}  // namespace dslpn
