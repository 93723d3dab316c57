#include <gtest/gtest.h>

#include <cmath>

#include "dslpn/cryptanalysis.hpp"
#include "dslpn/errors.hpp"
#include "dslpn/linalg.hpp"
#include "dslpn/sampling.hpp"
#include "oracles.hpp"

using namespace dslpn;

namespace {

Rng testRng(std::uint64_t stream) { return Rng(Seed::fromHex("c7a"), stream); }

// A (8 x 16) with a planted weight-w kernel vector on columns 0..w-1.
std::pair<BitMatrix, BitVec> plantedKernel(std::size_t w, Rng& rng) {
  BitMatrix a = uniformMatrix(8, 16, rng);
  BitVec sum(8);
  for (std::size_t j = 0; j + 1 < w; ++j) sum ^= a.column(j);
  for (std::size_t i = 0; i < 8; ++i) a.set(i, w - 1, sum.get(i));
  BitVec v(16);
  for (std::size_t j = 0; j < w; ++j) v.set(j);
  return {a, v};
}

}  // namespace

TEST(Bias, Gates) {
  Rng rng = testRng(1);
  auto [a, v] = plantedKernel(4, rng);
  ASSERT_TRUE(a.mulVec(v).isZero());
  LinearTestResult r = biasOf(a, v, 0.05, 100000, rng);
  EXPECT_TRUE(r.inKernel);
  EXPECT_NEAR(r.analyticBias, 0.32805, 1e-12);
  EXPECT_NEAR(r.empiricalBias, r.analyticBias, 4 * r.stdErr);

  EXPECT_EQ(biasOf(a, v, 0.5, 1000, rng).analyticBias, 0.0);

  BitVec off = v;
  off.flip(9);
  while (a.mulVec(off).isZero()) off.flip(10);
  LinearTestResult z = biasOf(a, off, 0.05, 100000, rng);
  EXPECT_FALSE(z.inKernel);
  EXPECT_EQ(z.analyticBias, 0.0);
  EXPECT_NEAR(z.empiricalBias, 0.0, 4 * z.stdErr);

  EXPECT_THROW(biasOf(a, BitVec(16), 0.1, 10, rng), DomainError);
  EXPECT_THROW(biasOf(a, BitVec(15), 0.1, 10, rng), DimensionError);
}

TEST(Bias, RandomConfigsAndWorkers) {
  Rng rng = testRng(2);
  for (int i = 0; i < 20; ++i) {
    const std::size_t w = 1 + rng.uniformBelow(8);
    const double eps = 0.02 + 0.2 * rng.uniform01();
    auto [a, v] = plantedKernel(w, rng);
    LinearTestResult r = biasOf(a, v, eps, 20000, rng);
    EXPECT_NEAR(r.analyticBias, std::pow(1 - 2 * eps, double(w)) / 2, 1e-12);
    EXPECT_NEAR(r.empiricalBias, r.analyticBias, 4 * r.stdErr) << w << " " << eps;
  }
  auto [a, v] = plantedKernel(3, rng);
  Rng r1 = testRng(3), r4 = testRng(3);
  EXPECT_EQ(biasOf(a, v, 0.1, 5000, r1, 1).empiricalBias, biasOf(a, v, 0.1, 5000, r4, 4).empiricalBias);
}

TEST(DualDistanceStats, BirthdayFloorAndLemmaOrder) {
  Rng rng = testRng(4);
  DualDistanceStats k2 = dualDistanceStats(20, 8, 2, 0.5, 1, 50, rng);
  EXPECT_EQ(k2.predictedOrder, 1.0);
  // n=64, k=4, m = n^(1+delta) = 512, wMax = 2: exactly the duplicate event.
  DualDistanceStats s = dualDistanceStats(64, 512, 4, 0.5, 0.25, 400, rng);
  EXPECT_EQ(s.wMax, 2u);
  const double pairs = oracle::binomial(512, 2) / oracle::binomial(64, 4);
  EXPECT_NEAR(s.birthdayFloor, 1 - std::exp(-pairs), 0.01);
  EXPECT_GT(s.frequency, s.birthdayFloor / 10);
  EXPECT_LT(s.frequency, s.birthdayFloor * 10);
  EXPECT_NEAR(s.frequency, s.birthdayFloor, 4 * std::sqrt(s.birthdayFloor * (1 - s.birthdayFloor) / 400));
}

TEST(SparseAttack, PlantedDuplicate) {
  SparseMatrix m(6, 3, {{0, 1, 2}, {3, 4, 5}, {0, 1, 2}});
  Rng rng = testRng(5);
  AttackReport r = sparseAttack(m, BitVec::fromString("101"), 6, 1, rng);
  ASSERT_TRUE(r.success);
  EXPECT_TRUE(r.duplicate);
  EXPECT_EQ(*r.dependency, BitVec::fromString("101"));
  EXPECT_EQ(r.guess, false);
  // No subset of size 2 contains a column.
  AttackReport none = sparseAttack(m, std::nullopt, 2, 5, rng);
  EXPECT_FALSE(none.success);
  EXPECT_EQ(none.subsetsTried, 5u);
}

TEST(SparseAttack, CompressionRegimeAndSubsetStatistics) {
  const std::size_t n = 64, k = 3, m = 16384, t = 8, trials = 40;
  Rng rng = testRng(6);
  std::size_t found = 0;
  double sumT = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    SparseMatrix M = uniformSparse(n, m, k, rng);
    AttackReport first = sparseAttack(M, std::nullopt, t, 1, rng);
    sumT += double(first.columnsFound.size());
    AttackReport r = sparseAttack(M, std::nullopt, t, 50, rng);
    if (!r.success) continue;
    ++found;
    EXPECT_TRUE(M.mulVec(*r.dependency).isZero());
    EXPECT_LE(r.dependency->weight(), t + 1);
    for (auto j : r.dependency->support())
      EXPECT_TRUE(std::binary_search(r.columnsFound.begin(), r.columnsFound.end(), j));
  }
  EXPECT_GE(found, trials * 9 / 10);
  // E|T| = m C(t,k)/C(n,k); |T| is binomial.
  const double p = oracle::binomial(t, k) / oracle::binomial(n, k);
  const double mean = double(m) * p, sd = std::sqrt(double(m) * p * (1 - p) / trials);
  EXPECT_NEAR(sumT / trials, mean, 4 * sd);
}

TEST(Distinguisher, SparseVersusDenseSparse) {
  DistinguishConfig c;
  c.eps = 1.0 / 64;
  c.instances = 20;
  c.samplesPerInstance = 100;
  Rng rng = testRng(7);
  AdvantageEstimate sparse = distinguishDenseSparse(c, DistinguishStrategy::kSparseAttackPipeline, rng);
  EXPECT_GE(sparse.instancesWithVector, 18u);
  EXPECT_GT(sparse.advantage, 4 * sparse.stdErr);
  EXPECT_NEAR(sparse.advantage, sparse.predicted, 4 * sparse.stdErr);

  c.alpha = 0.5;
  AdvantageEstimate ds = distinguishDenseSparse(c, DistinguishStrategy::kSparseAttackPipeline, rng);
  EXPECT_EQ(ds.instancesWithVector, 0u);
  EXPECT_NEAR(ds.advantage, 0, 4 * ds.stdErr);

  c.alpha = 1;
  c.eps = 0.5;
  AdvantageEstimate flat = distinguishDenseSparse(c, DistinguishStrategy::kSparseAttackPipeline, rng);
  EXPECT_NEAR(flat.advantage, 0, 4 * flat.stdErr);
}

TEST(Distinguisher, BestKernelVectorSmall) {
  DistinguishConfig c;
  c.n = 16;
  c.m = 200;
  c.k = 3;
  c.eps = 0.05;
  c.wMax = 4;
  c.instances = 10;
  c.samplesPerInstance = 400;
  Rng rng = testRng(8);
  AdvantageEstimate e = distinguishDenseSparse(c, DistinguishStrategy::kBestKernelVector, rng);
  EXPECT_EQ(e.instancesWithVector, 10u);
  EXPECT_NEAR(e.advantage, e.predicted, 4 * e.stdErr);
}

TEST(Unmask, IdentityT) {
  Rng rng = testRng(9);
  SparseMatrix M = uniformSparse(32, 512, 3, rng);
  UnmaskResult r = unmaskSquareT(M.densify(), 3, rng, 20000);
  ASSERT_TRUE(r.success);
  EXPECT_TRUE(equalUpToRowPermutation(r.Z, BitMatrix::identity(32)));
  EXPECT_TRUE(equalUpToRowPermutation(r.recovered, M.densify()));
}

TEST(Unmask, SquareVersusCompressing) {
  Rng rng = testRng(10);
  GoodDistSpec spec{32, 512, 3, 1, 1};
  int ok = 0, tried = 0;
  for (int i = 0; i < 5; ++i) {
    DenseSparse ds = denseSparseMatrix(32, 512, 3, 1.0, spec, rng);
    if (rank(ds.T) != 32) continue;
    ++tried;
    UnmaskResult r = unmaskSquareT(ds.A, 3, rng, 20000);
    if (r.success && equalUpToRowPermutation(r.recovered, ds.M.densify())) ++ok;
    if (r.success) EXPECT_EQ(mul(r.Z, ds.A), r.recovered);
  }
  EXPECT_GE(ok, tried - 1);
  EXPECT_GT(tried, 0);
  for (int i = 0; i < 3; ++i) {
    DenseSparse ds = denseSparseMatrix(32, 512, 3, 0.5, spec, rng);
    EXPECT_FALSE(unmaskSquareT(ds.A, 3, rng, 2000).success);
  }
}
