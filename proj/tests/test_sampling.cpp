#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "dslpn/dual_distance.hpp"
#include "dslpn/errors.hpp"
#include "dslpn/linalg.hpp"
#include "dslpn/parallel.hpp"
#include "dslpn/sampling.hpp"
#include "oracles.hpp"

using namespace dslpn;

namespace {
Rng testRng(std::uint64_t stream) { return Rng(Seed::fromHex("5a3"), stream); }
}  // namespace

TEST(Rng, Deterministic) {
  Rng a(Seed::fromHex("DEADBEEF"), 7), b(Seed::fromHex("deadbeef"), 7), c(Seed::fromHex("DEADBEEF"), 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.nextU64();
    EXPECT_EQ(x, b.nextU64());
    differs |= x != c.nextU64();
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(Seed::fromHex("DEADBEEF").bytes[31], 0xef);
  EXPECT_EQ(Seed::fromHex("DEADBEEF").bytes[28], 0xde);
  EXPECT_THROW(Seed::fromHex("xyz"), Error);
}

TEST(Rng, KnownChaChaBlock) {
  // All-zero key and nonce: first ChaCha20 keystream bytes are 76 b8 e0 ad a0 f1 3d 90.
  Rng r(Seed{}, 0);
  EXPECT_EQ(r.nextU64(), 0x903df1a0ade0b876ULL);
}

TEST(Rng, ChildrenIndependentOfWorkers) {
  Rng master = testRng(0);
  auto one = parallelMap(64, 1, [&](std::size_t i) { return master.child(i).nextU64(); });
  auto four = parallelMap(64, 4, [&](std::size_t i) { return master.child(i).nextU64(); });
  EXPECT_EQ(one, four);
  EXPECT_EQ(std::set<std::uint64_t>(one.begin(), one.end()).size(), 64u);
}

TEST(Rng, UniformBelowRange) {
  Rng r = testRng(1);
  std::vector<int> counts(6, 0);
  for (int i = 0; i < 60000; ++i) ++counts[r.uniformBelow(6)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 4 * std::sqrt(60000 * (1.0 / 6) * (5.0 / 6)));
}

TEST(Bernoulli, Extremes) {
  Rng r = testRng(2);
  EXPECT_TRUE(bernoulliVec(0.0, 1000, r).isZero());
  EXPECT_EQ(bernoulliVec(1.0, 1000, r).weight(), 1000u);
  EXPECT_THROW(bernoulliVec(1.5, 10, r), DomainError);
  EXPECT_THROW(bernoulliVec(-0.1, 10, r), DomainError);
}

TEST(Bernoulli, WeightWithinThreeSigma) {
  Rng r = testRng(3);
  const double sigma = std::sqrt(1e5 * 0.1 * 0.9);
  EXPECT_NEAR(sigma, 94.87, 0.01);
  EXPECT_NEAR(static_cast<double>(bernoulliVec(0.1, 100000, r).weight()), 10000.0, 3 * sigma);
}

TEST(UniformSparse, Basics) {
  Rng r = testRng(4);
  SparseMatrix full = uniformSparse(5, 10, 5, r);
  for (std::size_t j = 0; j < 10; ++j) EXPECT_EQ(full.denseColumn(j), BitVec::ones(5));
  EXPECT_THROW(uniformSparse(3, 4, 4, r), DomainError);
}

TEST(UniformSparse, UnitMarginalChiSquare) {
  Rng r = testRng(5);
  SparseMatrix m = uniformSparse(4, 10000, 1, r);
  std::vector<double> counts(4, 0);
  for (std::size_t j = 0; j < m.cols(); ++j) counts[m.column(j)[0]] += 1;
  double chi2 = 0;
  for (double c : counts) chi2 += (c - 2500) * (c - 2500) / 2500;
  // 3 degrees of freedom; 16.27 is the 0.999 quantile.
  EXPECT_LT(chi2, 16.27);
}

TEST(UniformSparse, DuplicateColumnBirthday) {
  // n=16, k=3, m=200: Pr[some duplicate] ~= 1 - exp(-C(200,2)/C(16,3)), which
  // is essentially 1; use m=12 so the estimate is informative.
  const std::size_t n = 16, k = 3, m = 12, trials = 4000;
  const double expected = 1 - std::exp(-oracle::binomial(m, 2) / oracle::binomial(n, k));
  Rng r = testRng(6);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    SparseMatrix s = uniformSparse(n, m, k, r);
    std::set<std::vector<SparseMatrix::Index>> seen(s.columns().begin(), s.columns().end());
    hits += seen.size() < m;
  }
  const double freq = static_cast<double>(hits) / trials;
  const double sigma = std::sqrt(expected * (1 - expected) / trials);
  EXPECT_NEAR(freq, expected, 4 * sigma + 0.01);
  Rng r2 = testRng(7);
  std::size_t hits200 = 0;
  for (int t = 0; t < 20; ++t) {
    SparseMatrix s = uniformSparse(16, 200, 3, r2);
    std::set<std::vector<SparseMatrix::Index>> seen(s.columns().begin(), s.columns().end());
    hits200 += seen.size() < 200;
  }
  EXPECT_EQ(hits200, 20u);
}

TEST(DualDistance, Trivial) {
  BitMatrix a = BitMatrix::fromStrings({"1101", "0110", "1011"});
  a.set(0, 3, true);
  a.set(1, 3, false);
  a.set(2, 3, true);  // column 3 == column 0
  auto dd = dualDistance(a, 5);
  ASSERT_TRUE(dd.d.has_value());
  EXPECT_EQ(*dd.d, 2u);
  EXPECT_EQ(dd.witness, BitVec::fromString("1001"));
  EXPECT_FALSE(dualDistance(BitMatrix::identity(10), 9).d.has_value());
}

TEST(DualDistance, MatchesExhaustiveOracle) {
  Rng r = testRng(8);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 10 + r.uniformBelow(6), m = 12 + r.uniformBelow(9);
    SparseMatrix s = uniformSparse(n, m, 3, r);
    BitMatrix d = s.densify();
    auto fast = dualDistance(s, m);
    auto slow = oracle::minKernelWeight(d, m);
    ASSERT_EQ(fast.d, slow);
    if (fast.d) {
      EXPECT_EQ(fast.witness.weight(), *fast.d);
      EXPECT_TRUE(s.mulVec(fast.witness).isZero());
      // Cross-check against the full kernel span.
      auto span = spanOf(kernelBasis(d), m);
      std::size_t best = m + 1;
      for (const auto& v : span)
        if (!v.isZero()) best = std::min(best, v.weight());
      EXPECT_EQ(best, *fast.d);
    }
  }
}

TEST(DualDistance, DeskSizeAgainstOracle) {
  // n=24, m=80, k=3 is too large for span enumeration; compare with the
  // bounded subset oracle up to weight 4.
  Rng r = testRng(9);
  for (int trial = 0; trial < 3; ++trial) {
    SparseMatrix s = uniformSparse(24, 80, 3, r);
    auto fast = dualDistance(s, 4);
    auto slow = oracle::minKernelWeight(s.densify(), 4);
    EXPECT_EQ(fast.d, slow);
  }
}

TEST(GoodSparse, Bounds) {
  Rng r = testRng(10);
  SparseMatrix any = goodSparse({32, 40, 4, 1, 1}, r);
  EXPECT_EQ(any.cols(), 40u);

  SparseMatrix d3 = goodSparse({32, 40, 4, 3, 100}, r);
  std::set<std::vector<SparseMatrix::Index>> seen(d3.columns().begin(), d3.columns().end());
  EXPECT_EQ(seen.size(), 40u);

  SparseMatrix d4 = goodSparse({32, 40, 4, 4, 100}, r);
  EXPECT_FALSE(oracle::minKernelWeight(d4.densify(), 3).has_value());

  EXPECT_THROW(goodSparse({6, 40, 2, 4, 3}, r), RejectionExhausted);
}

TEST(DenseSparse, Structure) {
  Rng r = testRng(11);
  GoodDistSpec spec{32, 64, 4, 3, 100};
  DenseSparse ds = denseSparseMatrix(32, 64, 4, 0.5, spec, r);
  EXPECT_EQ(ds.T.rows(), 16u);
  EXPECT_EQ(ds.A, mul(ds.T, ds.M.densify()));
  for (std::size_t j = 0; j < 64; ++j) EXPECT_EQ(ds.A.column(j), ds.T.mulVec(ds.M.denseColumn(j)));

  EXPECT_FALSE(dualDistance(ds.M, 2).d.has_value());
}

namespace {
// Weight-2 vectors in ker(A) that are not in ker(M).
std::size_t spuriousPairs(const DenseSparse& ds) {
  std::size_t count = 0;
  oracle::forEachSubset(ds.A.cols(), 2, [&](const std::vector<std::size_t>& s) {
    BitVec v(ds.A.cols());
    for (auto j : s) v.set(j);
    count += ds.A.mulVec(v).isZero() && !ds.M.mulVec(v).isZero();
    return false;
  });
  return count;
}
}  // namespace

TEST(DenseSparse, LowWeightKernelComparison) {
  Rng r = testRng(13);
  GoodDistSpec spec{32, 64, 4, 3, 100};
  // Invertible square T: ker(A) = ker(M) exactly.
  for (int trial = 0; trial < 5; ++trial) {
    DenseSparse sq = denseSparseMatrix(32, 64, 4, 1.0, spec, r);
    if (rank(sq.T) != 32) continue;
    EXPECT_EQ(rank(sq.A), rank(sq.M.densify()));
    EXPECT_EQ(spuriousPairs(sq), 0u);
  }
  // Compressing T: a pair is spurious only when T kills M*v, which has
  // probability 2^-16 per pair, so about 20 * C(64,2) / 2^16 = 0.62 in total.
  std::size_t spurious = 0;
  for (int trial = 0; trial < 20; ++trial) spurious += spuriousPairs(denseSparseMatrix(32, 64, 4, 0.5, spec, r));
  EXPECT_LE(spurious, 5u);
}

TEST(DenseSparse, RejectsFractionalRows) {
  Rng r = testRng(14);
  GoodDistSpec spec{32, 64, 4, 3, 100};
  EXPECT_THROW(denseSparseMatrix(32, 64, 4, 0.3, spec, r), DomainError);
}

TEST(Lpn, Samples) {
  Rng r = testRng(12);
  BitMatrix id = BitMatrix::identity(16);
  // eps = 0, A = I: b = s, so b is uniform; check bit balance.
  std::size_t ones = 0;
  for (int i = 0; i < 2000; ++i) ones += lpnSample(id, 0.0, r).weight();
  EXPECT_NEAR(ones / 32000.0, 0.5, 4 * std::sqrt(0.25 / 32000));

  // Columns 0..3 of A sum to zero, so v = 111100 is a weight-4 kernel vector
  // and Pr[<b,v> = 0] = 1/2 + 0.9^4/2.
  BitMatrix a = BitMatrix::fromStrings({"110011", "011010", "001101"});
  BitVec v = BitVec::fromString("111100");
  ASSERT_TRUE(a.mulVec(v).isZero());
  const double expected = 0.5 + std::pow(0.9, 4) / 2;
  const int trials = 100000;
  int zeros = 0;
  for (int i = 0; i < trials; ++i) zeros += !lpnSample(a, 0.05, r).dot(v);
  EXPECT_NEAR(zeros / static_cast<double>(trials), expected, 3 * std::sqrt(expected * (1 - expected) / trials));
  EXPECT_NEAR(expected, 0.82805, 1e-5);
}
