#include <gtest/gtest.h>

#include <cmath>

#include "dslpn/errors.hpp"
#include "dslpn/params.hpp"
#include "oracles.hpp"

using namespace dslpn;
using namespace dslpn::params;

TEST(Rational, Parse) {
  EXPECT_EQ(parseRational("3/2"), Rational(3, 2));
  EXPECT_EQ(parseRational("1.25"), Rational(5, 4));
  EXPECT_EQ(parseRational("7"), Rational(7));
  EXPECT_EQ(toString(Rational(6, 4)), "3/2");
  EXPECT_THROW(parseRational("1/0"), Error);
  EXPECT_THROW(parseRational("x"), Error);
  EXPECT_EQ(ceilRational(Rational(7, 2)), 4);
  EXPECT_EQ(ceilRational(Rational(8, 2)), 4);
}

TEST(Entropy, RoundTrip) {
  EXPECT_DOUBLE_EQ(entropy(0.5), 1.0);
  for (double y : {0.01, 0.1, 0.3, 0.5, 0.9, 0.999}) {
    const double x = entropyInv(y);
    EXPECT_LE(x, 0.5);
    EXPECT_NEAR(entropy(x), y, 1e-9);
  }
  EXPECT_EQ(entropyInv(1.0), 0.5);
  EXPECT_THROW(entropy(0.0), DomainError);
  EXPECT_THROW(entropyInv(0.0), DomainError);
}

TEST(Balls, SmallExamples) {
  BallSizes b = hammingBallSizes(4, 2);
  EXPECT_EQ(b.atMost, 11);
  EXPECT_EQ(b.exact, 6);
  EXPECT_EQ(b.regular, 4);
  EXPECT_EQ(hammingBallSizes(5, 0).regular, 1);
  EXPECT_THROW(hammingBallSizes(5, 2), DomainError);
  EXPECT_THROW(hammingBallSizes(3, 4), DomainError);
  EXPECT_EQ(ballAtMost(10, 20), 1024);
}

TEST(Balls, Sandwich) {
  // (n/w)^w <= C(n,w) <= |B<=(n,w)| <= (en/w)^w for n=30, w=6.
  BallSizes b = hammingBallSizes(30, 6);
  EXPECT_EQ(b.exact, 593775);
  EXPECT_EQ(b.regular, 15625);
  EXPECT_LE(b.regular, b.exact);
  EXPECT_LE(b.exact, b.atMost);
  EXPECT_LT(b.atMost.convert_to<double>(), std::pow(std::exp(1.0) * 30 / 6, 6));
  double sum = 0;
  for (int i = 0; i <= 6; ++i) sum += oracle::binomial(30, i);
  EXPECT_EQ(b.atMost.convert_to<double>(), sum);
}

TEST(Regime, MinDelta) {
  EXPECT_EQ(minDelta(6, 2), Rational(9, 11));
  EXPECT_EQ(minDelta(3, 1), Rational(3, 4));
  // D -> 1 from above approaches 3/4 for k=3.
  EXPECT_NEAR(toDouble(minDelta(3, Rational(1000001, 1000000))), 0.75, 1e-6);
  EXPECT_THROW(minDelta(2, 3), DomainError);
}

TEST(Regime, MinM) {
  // delta = 10/11 at k=6, D=2: exponent 1 + 11/11 = 2.
  for (std::uint64_t n : {64, 100, 4096}) EXPECT_EQ(minM(n, 6, 2, Rational(10, 11)), BigInt(n) * n);
  // Non-integral exponent: smallest m with m^2 >= n^3.
  EXPECT_EQ(minM(8, 3, 2, Rational(9, 10)), 23);  // 8^1.5 = 22.6
}

TEST(Regime, CompressionExamples) {
  const std::uint64_t n = 4096;
  CompressionCheck ok = checkCompression({6, 2, n, std::uint64_t{1} << 24, 2048});
  EXPECT_TRUE(ok.pass);
  EXPECT_EQ(ok.s, 13u);
  EXPECT_GT(ok.margin, 0);
  EXPECT_TRUE(ok.deltaAboveMin);
  EXPECT_TRUE(ok.meetsMinM);

  // m^2 >= n^k.
  CompressionCheck cap = checkCompression({3, 2, 64, std::uint64_t{1} << 20, 1024});
  EXPECT_FALSE(cap.pass);
  EXPECT_EQ(cap.reason, CompressionFailure::kSampleCap);

  CompressionCheck degen = checkCompression({6, 2, n, 2048, 2048});
  EXPECT_EQ(degen.reason, CompressionFailure::kDegenerate);
  EXPECT_EQ(checkCompression({6, 2, n, 3 * 2048, 2048}).reason, CompressionFailure::kDegenerate);

  // Ball too large: t=10, m=40 at n=64, k=6.
  CompressionCheck ball = checkCompression({6, 2, 64, 40, 10});
  EXPECT_EQ(ball.reason, CompressionFailure::kBallInequality);
  EXPECT_LT(ball.margin, 0);
}

TEST(Regime, ExactBallMatchesDouble) {
  // Compare the exact ball test with a log-domain estimate away from the boundary.
  for (std::uint64_t n : {16, 24, 32})
    for (std::uint64_t t = 2; t < n; ++t)
      for (unsigned s = 1; s < 6; ++s) {
        CompressionRegime r{3, Rational(3, 2), n, t << s, t};
        CompressionCheck c = checkCompression(r);
        if (c.reason == CompressionFailure::kSampleCap) continue;
        const double lhs = double(t * s), rhs = 1.5 * log2Big(ballAtMost(n, 3 * t));
        if (std::abs(lhs - rhs) > 1e-6) EXPECT_EQ(c.pass, lhs > rhs) << n << " " << t << " " << s;
      }
}

TEST(Regime, FindRegimeMinimal) {
  RegimeSearch q;
  q.k = 6;
  q.D = 3;
  q.n = 64;
  q.maxM = std::uint64_t{1} << 14;
  q.maxDupPairs = 3;
  auto r = findRegime(q);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->t, 48u);
  EXPECT_EQ(r->m, 12288u);
  // No smaller t works: every t < 48 either fails delta or has no s.
  for (std::uint64_t t = 1; t < 48; ++t)
    for (unsigned s = 1; (t << s) <= q.maxM; ++s) {
      CompressionRegime c{6, 3, 64, t << s, t};
      CompressionCheck chk = checkCompression(c);
      EXPECT_FALSE(chk.pass && chk.deltaAboveMin && chk.meetsMinM) << t << " " << s;
    }
}

TEST(Ltdf, DPrime) {
  LtdfOptions o;
  o.D = 4;
  o.mode = RegimeMode::kExact;
  // Gamma = 2, D = 4: 1/4 + 1/D' = 1/2 gives D' = 4.
  LtdfParams p = deriveLtdf(6, 2, Rational(1, 10), Rational(1, 8), 64, o);
  EXPECT_EQ(p.Dprime, 4);
  EXPECT_EQ(1 / p.regime.D + 1 / p.Dprime, Rational(1, 2));
  // A small deltaC is selected by the min.
  LtdfParams q = deriveLtdf(6, 2, Rational(1, 200), Rational(1, 4), 64, o);
  EXPECT_EQ(q.gamma, 0.005);
  EXPECT_THROW(deriveLtdf(6, 2, Rational(1, 10), Rational(1, 8), 64, LtdfOptions{Rational(3, 2)}), DomainError);
  EXPECT_THROW(deriveLtdf(6, 1, Rational(1, 10), Rational(1, 8), 64), DomainError);
}

TEST(Ltdf, PresetsDerive) {
  struct Expect {
    const char* name;
    std::uint64_t t, s, m, L;
  };
  for (const Expect& e : {Expect{"micro", 5, 2, 20, 10}, Expect{"tiny", 10, 2, 40, 20}, Expect{"desk", 48, 8, 12288, 384}}) {
    const LtdfPreset& pre = ltdfPreset(e.name);
    // Concatenated-code shapes these presets pair with: rate L/blockLen, radius tErr/blockLen.
    const std::uint64_t blockLen = e.name == std::string("micro") ? 40 : e.name == std::string("tiny") ? 160 : 3072;
    const std::uint64_t tErr = e.name == std::string("micro") ? 3 : e.name == std::string("tiny") ? 13 : 218;
    LtdfParams p = deriveLtdf(pre.k, pre.Gamma, Rational(BigInt(tErr), BigInt(blockLen)),
                              Rational(BigInt(e.L), BigInt(blockLen)), pre.n, pre.options());
    EXPECT_EQ(p.regime.t, e.t) << e.name;
    EXPECT_EQ(p.s, e.s) << e.name;
    EXPECT_EQ(p.regime.m, e.m) << e.name;
    EXPECT_EQ(p.L, e.L) << e.name;
    EXPECT_EQ(p.ell, blockLen) << e.name;
    EXPECT_TRUE(checkLtdf(p).empty()) << e.name;
    EXPECT_GT(p.alpha, 0);
  }
  EXPECT_THROW(ltdfPreset("huge"), DomainError);
}

TEST(Ltdf, CheckerCatchesTampering) {
  const LtdfPreset& pre = ltdfPreset("micro");
  LtdfParams p = deriveLtdf(pre.k, pre.Gamma, Rational(3, 40), Rational(10, 40), pre.n, pre.options());
  LtdfParams bad = p;
  bad.ell += 1;
  EXPECT_FALSE(checkLtdf(bad).empty());
  bad = p;
  bad.alpha = 0.5;
  EXPECT_FALSE(checkLtdf(bad).empty());
  bad = p;
  bad.regime.m *= 3;
  EXPECT_FALSE(checkLtdf(bad).empty());
}

TEST(Crhf, RejectsSmallD) {
  EXPECT_THROW(deriveCrhf(3, 2, 8), DomainError);
  EXPECT_THROW(crhfParamsAt(12, 3, 8, 2, Rational(3, 2), 1), DomainError);
}

TEST(Crhf, RateAndShape) {
  CrhfParams p = crhfParamsAt(12, 3, 8, 2, 4, 1);
  EXPECT_EQ(p.rho, Rational(1, 4));
  EXPECT_EQ(p.regime.m, 32u);
  EXPECT_EQ(p.ttilde, 16u);
  EXPECT_EQ(p.outLen, 12u);
  EXPECT_TRUE(checkCrhf(p).empty());
}

TEST(Crhf, DerivedInvariantsSweep) {
  int derived = 0;
  for (unsigned k : {3u, 4u, 6u})
    for (const char* d : {"3", "4", "5/2"})
      for (unsigned lambda : {4u, 8u}) {
        CrhfOptions o;
        o.mode = RegimeMode::kExact;
        o.maxN = 2048;
        CrhfParams p;
        try {
          p = deriveCrhf(k, parseRational(d), lambda, o);
        } catch (const DomainError&) {
          continue;
        }
        EXPECT_TRUE(checkCrhf(p).empty()) << k << " " << d << " " << lambda;
        EXPECT_GT(p.rho * BigInt(p.ttilde), 2 * lambda);
        EXPECT_TRUE(checkCompression(p.regime).pass);
        ++derived;
      }
  EXPECT_GT(derived, 6);
}
