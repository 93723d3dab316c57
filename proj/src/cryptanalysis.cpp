#include "dslpn/cryptanalysis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dslpn/dual_distance.hpp"
#include "dslpn/errors.hpp"
#include "dslpn/linalg.hpp"
#include "dslpn/parallel.hpp"
#include "dslpn/sampling.hpp"

namespace dslpn {

namespace {

constexpr std::size_t kBlock = 1024;

// Fresh base stream for one call, so repeated calls with the same rng differ.
Rng forkStream(Rng& rng) { return rng.child(rng.nextU64()); }

// Uniform size-t subset of [n], sorted (Floyd).
std::vector<std::size_t> randomSubset(std::size_t n, std::size_t t, Rng& rng) {
  std::vector<std::size_t> out;
  out.reserve(t);
  for (std::size_t j = n - t; j < n; ++j) {
    const std::size_t v = rng.uniformBelow(j + 1);
    if (std::find(out.begin(), out.end(), v) == out.end())
      out.push_back(v);
    else
      out.push_back(j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double stderrOf(double p, double n) { return n > 0 ? std::sqrt(p * (1 - p) / n) : 0; }

}  // namespace

LinearTestResult biasOf(const BitMatrix& A, const BitVec& v, double eps, std::size_t trials, Rng& rng,
                        std::size_t workers) {
  requireDims(v.size() == A.cols(), "biasOf: test vector length must equal A.cols");
  require(!v.isZero(), "biasOf: test vector must be nonzero");
  require(eps >= 0 && eps <= 0.5, "biasOf: eps must lie in [0, 1/2]");
  LinearTestResult r;
  r.testVector = v;
  r.trials = trials;
  r.inKernel = A.mulVec(v).isZero();
  r.analyticBias = r.inKernel ? std::pow(1 - 2 * eps, double(v.weight())) / 2 : 0.0;
  const Rng base = forkStream(rng);
  const std::size_t blocks = (trials + kBlock - 1) / kBlock;
  auto zeros = parallelMap(blocks, workers, [&](std::size_t b) {
    Rng local = base.child(b);
    std::size_t z = 0;
    for (std::size_t i = b * kBlock; i < std::min(trials, (b + 1) * kBlock); ++i) z += !lpnSample(A, eps, local).dot(v);
    return z;
  });
  std::size_t total = 0;
  for (auto z : zeros) total += z;
  if (trials > 0) {
    const double p = double(total) / double(trials);
    r.empiricalBias = p - 0.5;
    r.stdErr = stderrOf(p, double(trials));
  }
  return r;
}

DualDistanceStats dualDistanceStats(std::size_t n, std::size_t m, std::size_t k, double delta, double c,
                                    std::size_t trials, Rng& rng, std::size_t workers) {
  require(k >= 2 && k <= n, "dualDistanceStats: need 2 <= k <= n");
  require(m >= 2, "dualDistanceStats: need m >= 2");
  DualDistanceStats s;
  s.trials = trials;
  const double nd = std::pow(double(n), delta);
  s.wMax = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(c * nd)));
  s.predictedOrder = std::pow(double(k) / nd, double(k) - 2);
  // 1 - prod_{i<m} (1 - i/C(n,k)).
  const double cols = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(double(n - k) + 1.0));
  double logNone = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (double(i) >= cols) {
      logNone = -INFINITY;
      break;
    }
    logNone += std::log1p(-double(i) / cols);
  }
  s.birthdayFloor = 1 - std::exp(logNone);
  const Rng base = forkStream(rng);
  auto hits = parallelMap(trials, workers, [&](std::size_t i) {
    Rng local = base.child(i);
    return dualDistance(uniformSparse(n, m, k, local), s.wMax).d.has_value() ? 1 : 0;
  });
  for (int h : hits) s.hits += h;
  if (trials > 0) {
    s.frequency = double(s.hits) / double(trials);
    s.stdErr = stderrOf(s.frequency, double(trials));
  }
  return s;
}

AttackReport sparseAttack(const BitMatrix& A, const std::optional<BitVec>& b, std::size_t tSize,
                          std::size_t maxSubsets, Rng& rng) {
  require(tSize >= 1 && tSize <= A.rows(), "sparseAttack: subset size must lie in [1, rows]");
  if (b) requireDims(b->size() == A.cols(), "sparseAttack: b length must equal A.cols");
  const BitMatrix cols = A.transpose();
  AttackReport r;
  for (r.subsetsTried = 1; r.subsetsTried <= maxSubsets; ++r.subsetsTried) {
    r.subsetS = randomSubset(A.rows(), tSize, rng);
    BitVec mask(A.rows());
    for (auto i : r.subsetS) mask.set(i);
    r.columnsFound.clear();
    std::unordered_map<BitVec, std::size_t, BitVecHash> seen;
    std::optional<BitVec> dep;
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const BitVec& col = cols.row(j);
      if (!((col & mask) == col)) continue;
      r.columnsFound.push_back(j);
      if (dep) continue;
      auto [it, fresh] = seen.emplace(col, j);
      if (!fresh) {
        dep = BitVec::unit(A.cols(), it->second) ^ BitVec::unit(A.cols(), j);
        r.duplicate = true;
      }
    }
    if (!dep && r.columnsFound.size() > tSize) {
      const auto basis = kernelBasis(A.selectColumns(r.columnsFound));
      if (!basis.empty()) {
        dep = BitVec(A.cols());
        for (auto i : basis.front().support()) dep->set(r.columnsFound[i]);
      }
    }
    if (dep) {
      if (!A.mulVec(*dep).isZero()) throw Error("sparseAttack: dependency failed verification");
      r.dependency = std::move(dep);
      r.success = true;
      if (b) r.guess = b->dot(*r.dependency);
      return r;
    }
    r.duplicate = false;
  }
  r.subsetsTried = maxSubsets;
  return r;
}

AttackReport sparseAttack(const SparseMatrix& M, const std::optional<BitVec>& b, std::size_t tSize,
                          std::size_t maxSubsets, Rng& rng) {
  return sparseAttack(M.densify(), b, tSize, maxSubsets, rng);
}

UnmaskResult unmaskSquareT(const BitMatrix& A, std::size_t k, Rng& rng, std::size_t maxTries) {
  const std::size_t r = A.rows(), m = A.cols();
  require(r >= 1 && m >= r, "unmaskSquareT: need cols >= rows >= 1");
  const std::size_t threshold = 2 * k * m / r;
  const BitMatrix cols = A.transpose();
  UnmaskResult out;
  std::vector<BitVec> zs, found;
  auto consistent = [&] {
    const BitMatrix rows = BitMatrix::fromRows(found);
    for (std::size_t j = 0; j < m; ++j)
      if (rows.column(j).weight() != k) return false;
    return true;
  };
  for (out.tries = 1; out.tries <= maxTries; ++out.tries) {
    std::vector<BitVec> pick;
    for (auto j : randomSubset(m, r, rng)) pick.push_back(cols.row(j));
    const auto basis = kernelBasis(BitMatrix::fromRows(std::move(pick)));
    if (basis.size() != 1) continue;
    const BitVec row = A.leftMulVec(basis.front());
    if (row.isZero() || row.weight() > threshold) continue;
    if (std::find(found.begin(), found.end(), row) != found.end()) continue;
    std::vector<BitVec> trial = zs;
    trial.push_back(basis.front());
    if (rank(BitMatrix::fromRows(trial)) != trial.size()) continue;
    zs = std::move(trial);
    found.push_back(row);
    if (zs.size() < r) continue;
    if (consistent()) {
      out.success = true;
      break;
    }
    // A sum of two sparse rows can pass the weight threshold; drop the
    // heaviest row and keep searching.
    const auto worst = std::max_element(found.begin(), found.end(),
                                        [](const BitVec& a, const BitVec& b) { return a.weight() < b.weight(); }) -
                       found.begin();
    zs.erase(zs.begin() + worst);
    found.erase(found.begin() + worst);
  }
  out.tries = std::min(out.tries, maxTries);
  out.Z = zs.empty() ? BitMatrix(0, r) : BitMatrix::fromRows(zs);
  out.recovered = found.empty() ? BitMatrix(0, m) : BitMatrix::fromRows(found);
  return out;
}

bool equalUpToRowPermutation(const BitMatrix& a, const BitMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  auto ra = a.rowVectors(), rb = b.rowVectors();
  std::sort(ra.begin(), ra.end());
  std::sort(rb.begin(), rb.end());
  return ra == rb;
}

AdvantageEstimate distinguishDenseSparse(const DistinguishConfig& c, DistinguishStrategy strategy, Rng& rng,
                                         std::size_t workers) {
  require(c.eps >= 0 && c.eps <= 0.5, "distinguishDenseSparse: eps must lie in [0, 1/2]");
  struct Counts {
    std::size_t lpn = 0, uni = 0;
    bool vector = false;
    double predicted = 0;
  };
  const Rng base = forkStream(rng);
  auto counts = parallelMap(c.instances, workers, [&](std::size_t i) {
    Rng local = base.child(i);
    BitMatrix A;
    if (c.alpha == 1.0) {
      A = uniformSparse(c.n, c.m, c.k, local).densify();
    } else {
      A = denseSparseMatrix(c.n, c.m, c.k, c.alpha, GoodDistSpec{c.n, c.m, c.k, 1, 1}, local).A;
    }
    std::optional<BitVec> v;
    if (strategy == DistinguishStrategy::kSparseAttackPipeline) {
      v = sparseAttack(A, std::nullopt, std::min(c.tSize, A.rows()), c.maxSubsets, local).dependency;
    } else {
      DualDistance dd = dualDistance(A, c.wMax);
      if (dd.d) v = dd.witness;
    }
    Counts out;
    out.vector = v.has_value();
    if (v) out.predicted = std::pow(1 - 2 * c.eps, double(v->weight())) / 2;
    for (std::size_t s = 0; s < c.samplesPerInstance; ++s) {
      const BitVec lpn = lpnSample(A, c.eps, local);
      out.lpn += v ? !lpn.dot(*v) : local.nextBit();
      const BitVec uni = uniformVec(c.m, local);
      out.uni += v ? !uni.dot(*v) : local.nextBit();
    }
    return out;
  });
  AdvantageEstimate e;
  e.trials = c.instances * c.samplesPerInstance;
  std::size_t lpn = 0, uni = 0;
  for (const auto& ct : counts) {
    lpn += ct.lpn;
    uni += ct.uni;
    e.instancesWithVector += ct.vector;
    e.predicted += ct.predicted;
  }
  if (c.instances > 0) e.predicted /= double(c.instances);
  if (e.trials > 0) {
    e.acceptLpn = double(lpn) / double(e.trials);
    e.acceptUniform = double(uni) / double(e.trials);
    e.advantage = e.acceptLpn - e.acceptUniform;
    e.stdErr = std::sqrt(e.acceptLpn * (1 - e.acceptLpn) / double(e.trials) +
                         e.acceptUniform * (1 - e.acceptUniform) / double(e.trials));
  }
  return e;
}

}  // namespace dslpn
