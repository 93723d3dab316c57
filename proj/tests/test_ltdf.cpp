#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "dslpn/errors.hpp"
#include "dslpn/gf2x.hpp"
#include "dslpn/linalg.hpp"
#include "dslpn/ltdf.hpp"
#include "dslpn/sampling.hpp"

using namespace dslpn;

namespace {

Rng testRng(std::uint64_t stream) { return Rng(Seed::fromHex("1f7d"), stream); }

// Carry-less remainder on integers, for the trial-division oracle.
std::uint64_t clmod(std::uint64_t a, std::uint64_t b) {
  const int db = 63 - __builtin_clzll(b);
  while (a != 0 && 63 - __builtin_clzll(a) >= db) a ^= b << ((63 - __builtin_clzll(a)) - db);
  return a;
}

bool irreducibleByDivision(std::uint64_t f) {
  const int d = 63 - __builtin_clzll(f);
  for (std::uint64_t g = 2; (63 - __builtin_clzll(g)) * 2 <= d; ++g)
    if (clmod(f, g) == 0) return false;
  return d >= 1;
}

const LtdfSetup& setupFor(const std::string& name) {
  static std::map<std::string, LtdfSetup> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, ltdfSetup(params::ltdfPreset(name))).first;
  return it->second;
}

BitVec randomNonzero(std::size_t len, Rng& rng) {
  for (;;) {
    BitVec v = uniformVec(len, rng);
    if (!v.isZero()) return v;
  }
}

}  // namespace

TEST(Gf2x, IrreducibilityMatchesTrialDivision) {
  // Count of irreducibles of degree 8 is (2^8 - 2^4)/8 = 30.
  std::size_t deg8 = 0;
  for (std::uint64_t f = 2; f < (1u << 11); ++f) {
    const bool fast = gf2x::isIrreducible(gf2x::Poly{f});
    ASSERT_EQ(fast, irreducibleByDivision(f)) << f;
    deg8 += fast && f >= 256 && f < 512;
  }
  EXPECT_EQ(deg8, 30u);
  EXPECT_EQ(gf2x::firstIrreducible(8), gf2x::Poly{0x11B});
  EXPECT_EQ(gf2x::firstIrreducible(2), gf2x::Poly{0x7});
  EXPECT_EQ(gf2x::firstIrreducible(7), gf2x::Poly{0x83});
  for (std::size_t L : {10u, 12u, 20u}) {
    const auto f = gf2x::firstIrreducible(L);
    EXPECT_TRUE(irreducibleByDivision(f[0]));
    for (std::uint64_t g = 0; g < (f[0] ^ (std::uint64_t{1} << L)); ++g)
      EXPECT_FALSE(irreducibleByDivision((std::uint64_t{1} << L) | g)) << L << " " << g;
  }
}

TEST(Gf2x, InverseAndLargeDegree) {
  const auto f = gf2x::firstIrreducible(384);
  EXPECT_EQ(gf2x::degree(f), 384);
  Rng rng = testRng(1);
  for (int i = 0; i < 20; ++i) {
    const auto a = gf2x::fromBitVec(randomNonzero(384, rng));
    const auto inv = gf2x::invMod(a, f);
    ASSERT_TRUE(inv.has_value());
    EXPECT_EQ(gf2x::mulMod(a, *inv, f), gf2x::Poly{1});
  }
  // x^2 + 1 = (x + 1)^2 is not irreducible and x + 1 has no inverse mod it.
  EXPECT_FALSE(gf2x::isIrreducible(gf2x::Poly{5}));
  EXPECT_FALSE(gf2x::invMod(gf2x::Poly{3}, gf2x::Poly{5}).has_value());
}

TEST(Frd, TrivialBranches) {
  FrdFamily fam(8);
  EXPECT_EQ(fam.modulus(), BitVec::fromUint(9, 0x11B));
  EXPECT_TRUE(frdMatrix(fam, BitVec(8)).isZero());
  EXPECT_EQ(frdMatrix(fam, BitVec::unit(8, 0)), BitMatrix::identity(8));
  EXPECT_THROW(frdMatrix(fam, BitVec(7)), DimensionError);
}

TEST(Frd, ExhaustivePairsAtL8) {
  FrdFamily fam(8);
  std::vector<BitMatrix> h;
  for (std::uint64_t t = 0; t < 256; ++t) h.push_back(frdMatrix(fam, BitVec::fromUint(8, t)));
  std::size_t pairs = 0;
  for (std::uint64_t a = 0; a < 256; ++a)
    for (std::uint64_t b = a + 1; b < 256; ++b) {
      const BitMatrix d = h[a] ^ h[b];
      ASSERT_EQ(d, h[a ^ b]);
      ASSERT_EQ(rank(d), 8u) << a << " " << b;
      ++pairs;
    }
  EXPECT_EQ(pairs, 32640u);
}

TEST(Frd, RandomPairsAtL16) {
  FrdFamily fam(16);
  Rng rng = testRng(2);
  for (int i = 0; i < 1000; ++i) {
    const BitVec a = uniformVec(16, rng), b = uniformVec(16, rng);
    if (a == b) continue;
    const BitMatrix d = frdMatrix(fam, a) ^ frdMatrix(fam, b);
    ASSERT_EQ(rank(d), 16u);
    const auto inv = fam.inv(a ^ b);
    ASSERT_TRUE(inv.has_value());
    EXPECT_EQ(d.mulVec(frdMatrix(fam, *inv).mulVec(BitVec::unit(16, 3))), BitVec::unit(16, 3));
  }
}

TEST(LtdfSetup, Presets) {
  struct Expect {
    const char* name;
    std::size_t L, ell;
  };
  for (const Expect& e : {Expect{"micro", 10, 40}, Expect{"tiny", 20, 160}, Expect{"desk", 384, 3072}}) {
    const LtdfSetup& s = setupFor(e.name);
    EXPECT_EQ(s.params.L, e.L);
    EXPECT_EQ(s.params.ell, e.ell);
    EXPECT_EQ(s.code->dim(), e.L);
    EXPECT_EQ(s.code->blockLen(), e.ell);
    EXPECT_TRUE(params::checkLtdf(s.params).empty());
    EXPECT_TRUE(s.params.compression.pass) << e.name;
  }
}

TEST(Abo, ShapesAndDebugReconstruction) {
  const LtdfSetup& s = setupFor("micro");
  Rng rng = testRng(3);
  const BitVec tauStar = uniformVec(s.params.L, rng);
  AboGenOptions o;
  o.debug = true;
  o.eps = 0.05;
  AboKeyPair kp = aboGen(s, tauStar, rng, o);
  const auto& p = s.params;
  EXPECT_EQ(kp.fk.A().rows(), p.regime.n / 2);
  EXPECT_EQ(kp.fk.A().cols(), p.regime.m);
  EXPECT_EQ(kp.fk.B().rows(), p.ell);
  EXPECT_EQ(kp.fk.B().cols(), p.regime.m);
  ASSERT_TRUE(kp.debug.has_value());
  EXPECT_EQ(kp.fk.A(), mulDenseSparse(kp.debug->T, kp.debug->M));
  EXPECT_EQ(kp.fk.B(), mul(kp.td.S, kp.fk.A()) ^ kp.debug->E ^ branchMatrix(kp.fk, tauStar));
  EXPECT_FALSE(aboGen(s, tauStar, rng).debug.has_value());
  EXPECT_THROW(aboGen(s, BitVec(p.L + 1), rng), DimensionError);
}

TEST(Abo, NoiselessKeyMatchesMatrixProduct) {
  // B + S A = C^T H_tau* G with every factor built explicitly.
  const LtdfSetup& s = setupFor("micro");
  Rng rng = testRng(4);
  const BitVec tauStar = randomNonzero(s.params.L, rng);
  AboGenOptions o;
  o.eps = 0.0;
  AboKeyPair kp = aboGen(s, tauStar, rng, o);
  std::vector<BitVec> codeCols;
  for (std::size_t i = 0; i < s.params.L; ++i) codeCols.push_back(s.code->encode(BitVec::unit(s.params.L, i)));
  const BitMatrix Ct = BitMatrix::fromColumns(s.params.ell, codeCols);
  const BitMatrix expected = mul(mul(Ct, frdMatrix(kp.fk.frd(), tauStar)), gadgetMatrix(kp.fk.gadget()));
  EXPECT_EQ(kp.fk.B() ^ mul(kp.td.S, kp.fk.A()), expected);
}

TEST(Abo, EvaluationPaths) {
  const LtdfSetup& s = setupFor("tiny");
  Rng rng = testRng(5);
  const BitVec tauStar = uniformVec(s.params.L, rng);
  AboGenOptions o;
  o.eps = 0.0;
  AboKeyPair kp = aboGen(s, tauStar, rng, o);
  const std::size_t half = s.params.regime.n / 2;
  const GadgetParams gp = kp.fk.gadget();
  for (int i = 0; i < 50; ++i) {
    const BitVec x = uniformVec(s.params.L, rng), tau = uniformVec(s.params.L, rng);
    // Lossy branch without noise: y2 = S y1.
    const BitVec y = aboEval(kp.fk, tauStar, x);
    ASSERT_EQ(y.size(), half + s.params.ell);
    EXPECT_EQ(y.slice(half, s.params.ell), kp.td.S.mulVec(y.slice(0, half)));
    // Matrix-free evaluation against materialized B_tau.
    const BitVec xt = sparsify(gp, x);
    const BitVec yt = aboEval(kp.fk, tau, x);
    const BitMatrix bTau = kp.fk.B() ^ branchMatrix(kp.fk, tau);
    EXPECT_EQ(yt, BitVec::concat(kp.fk.A().mulVec(xt), bTau.mulVec(xt)));
    EXPECT_EQ(branchColumns(kp.fk, tau).transpose().mulVec(xt), yt);
    // Branch contribution equals encode(H_tau x).
    EXPECT_EQ(branchMatrix(kp.fk, tau).mulVec(xt), s.code->encode(frdMatrix(kp.fk.frd(), tau).mulVec(x)));
  }
  EXPECT_THROW(aboEval(kp.fk, tauStar, BitVec(3)), DimensionError);
}

TEST(Abo, NoiselessInversionExhaustiveMicro) {
  const LtdfSetup& s = setupFor("micro");
  ASSERT_LE(s.params.L, 12u);
  Rng rng = testRng(6);
  const BitVec tauStar = uniformVec(s.params.L, rng);
  AboGenOptions o;
  o.eps = 0.0;
  AboKeyPair kp = aboGen(s, tauStar, rng, o);
  for (int b = 0; b < 4; ++b) {
    BitVec tau = uniformVec(s.params.L, rng);
    if (tau == tauStar) tau.flip(0);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << s.params.L); ++x) {
      const BitVec xv = BitVec::fromUint(s.params.L, x);
      const auto back = aboInvert(kp.td, kp.fk, tau, aboEval(kp.fk, tau, xv));
      ASSERT_TRUE(back.has_value());
      ASSERT_EQ(*back, xv);
    }
  }
  EXPECT_THROW(aboInvert(kp.td, kp.fk, tauStar, aboEval(kp.fk, tauStar, BitVec(s.params.L))), DomainError);
}

TEST(Abo, DeskRoundTrips) {
  const LtdfSetup& s = setupFor("desk");
  Rng rng = testRng(7);
  const BitVec tauStar = uniformVec(s.params.L, rng);
  AboGenOptions o;
  o.debug = true;
  AboKeyPair kp = aboGen(s, tauStar, rng, o);
  EXPECT_EQ(kp.eps, s.params.eps);
  std::size_t ok = 0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    const BitVec x = uniformVec(s.params.L, rng);
    BitVec tau = uniformVec(s.params.L, rng);
    if (tau == tauStar) tau.flip(0);
    const auto back = aboInvert(kp.td, kp.fk, tau, aboEval(kp.fk, tau, x));
    ok += back && *back == x;
  }
  EXPECT_GE(ok, 999u);

  // Noise weight against gamma * ell.
  NoiseReport r = noiseWeightCheck(kp.debug->E, kp.fk.gadget(), 10000, rng);
  EXPECT_LE(static_cast<double>(r.maxWeight), s.params.gamma * static_cast<double>(s.params.ell));
  EXPECT_EQ(noiseWeightCheck(BitMatrix(s.params.ell, s.params.regime.m), kp.fk.gadget(), 100, rng).maxWeight, 0u);

  // Per-coordinate marginal: inputs with every block equal to v have
  // disjoint supports for distinct v, so all bits below are independent.
  const GadgetParams gp = kp.fk.gadget();
  const BitMatrix ecols = kp.debug->E.transpose();
  std::size_t ones = 0, bits = 0;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << gp.s); ++v) {
    BitVec x(gp.inputLen());
    for (std::size_t b = 0; b < gp.w; ++b)
      for (unsigned i = 0; i < gp.s; ++i) x.set(b * gp.s + i, (v >> (gp.s - 1 - i)) & 1U);
    BitVec e(s.params.ell);
    for (std::size_t j : sparsify(gp, x).support()) e ^= ecols.row(j);
    ones += e.weight();
    bits += e.size();
  }
  const double pr = (1 - std::pow(1 - 2 * kp.eps, double(s.params.regime.t))) / 2;
  const double sigma = std::sqrt(pr * (1 - pr) / double(bits));
  EXPECT_NEAR(double(ones) / double(bits), pr, 3 * sigma);
}

TEST(Abo, LossinessTiny) {
  const LtdfSetup& s = setupFor("tiny");
  ASSERT_LE(s.params.L, 20u);
  ASSERT_TRUE(s.params.compression.pass);
  Rng rng = testRng(8);
  const BitVec tauStar = uniformVec(s.params.L, rng);
  BitVec tauInj = tauStar;
  tauInj.flip(1);

  AboGenOptions o;
  o.eps = 0.0;
  AboKeyPair clean = aboGen(s, tauStar, rng, o);
  LossinessReport r0 = lossinessMeasure(clean.fk, tauStar, tauInj);
  EXPECT_EQ(r0.domain, std::size_t{1} << s.params.L);
  EXPECT_EQ(r0.injectiveImage, r0.domain);
  EXPECT_LT(r0.lossyImage, r0.domain);
  EXPECT_EQ(r0.lossyImage, r0.distinctY1);

  o.eps.reset();
  o.debug = true;
  AboKeyPair noisy = aboGen(s, tauStar, rng, o);
  LossinessReport r = lossinessMeasure(noisy.fk, tauStar, tauInj, &noisy.debug->E, 2);
  EXPECT_LT(r.lossyImage, r.domain);
  ASSERT_TRUE(r.bound.has_value());
  EXPECT_LE(params::BigInt(r.lossyImage), *r.bound);
  EXPECT_LE(r.distinctY1, std::size_t{1} << (s.params.regime.n / 2));
}

TEST(Abo, BranchIndistinguishabilitySmoke) {
  // Bit frequency and adjacent-pair agreement of (A, B) under two fixed tau*,
  // 500 keys each. n = 32 keeps zero columns of A (probability 2^-16) rare;
  // at the enumeration presets n/2 <= 6 and the branch is visible.
  params::LtdfOptions opt;
  opt.D = params::Rational(3, 2);
  opt.mode = params::RegimeMode::kExact;
  opt.maxL = 64;
  opt.maxDupPairs = 3;
  const LtdfSetup s = ltdfSetup(6, params::Rational(6, 5), 32, opt);
  const std::size_t keys = 500;
  double mean[2], pair[2], total = 0;
  for (int branch = 0; branch < 2; ++branch) {
    Rng rng = testRng(100 + branch);
    const BitVec tauStar = branch == 0 ? BitVec(s.params.L) : BitVec::ones(s.params.L);
    double ones = 0, same = 0;
    total = 0;
    for (std::size_t i = 0; i < keys; ++i) {
      AboKeyPair kp = aboGen(s, tauStar, rng);
      for (const BitMatrix* mtx : {&kp.fk.A(), &kp.fk.B()})
        for (const BitVec& row : mtx->rowVectors()) {
          ones += double(row.weight());
          const BitVec shifted = row.slice(1, row.size() - 1);
          same += double(row.size() - 1 - (shifted ^ row.slice(0, row.size() - 1)).weight());
          total += double(row.size());
        }
    }
    mean[branch] = ones / total;
    pair[branch] = same / total;
  }
  const double sigma = std::sqrt(0.25 / total);
  EXPECT_NEAR(mean[0], 0.5, 4 * sigma);
  EXPECT_NEAR(mean[1], 0.5, 4 * sigma);
  EXPECT_NEAR(mean[0], mean[1], 4 * std::sqrt(2.0) * sigma);
  EXPECT_NEAR(pair[0], pair[1], 4 * std::sqrt(2.0) * sigma);
}

TEST(Abo, KeyFilesRoundTrip) {
  const LtdfSetup& s = setupFor("micro");
  Rng rng = testRng(9);
  AboGenOptions o;
  o.debug = true;
  AboKeyPair kp = aboGen(s, uniformVec(s.params.L, rng), rng, o);
  const io::Bytes pub = encodeAboPublicKey(kp.fk);
  AboPublicKey fk = decodeAboPublicKey(pub);
  EXPECT_EQ(fk.A(), kp.fk.A());
  EXPECT_EQ(fk.B(), kp.fk.B());
  EXPECT_EQ(fk.params().L, s.params.L);
  EXPECT_EQ(fk.params().Gamma, s.params.Gamma);
  EXPECT_EQ(fk.params().eps, s.params.eps);
  EXPECT_EQ(encodeAboPublicKey(fk), pub);
  auto [td, dbg] = decodeAboTrapdoor(encodeAboTrapdoor(kp.td, kp.debug), fk);
  EXPECT_EQ(td.S, kp.td.S);
  EXPECT_EQ(td.tauStar, kp.td.tauStar);
  ASSERT_TRUE(dbg.has_value());
  EXPECT_EQ(dbg->E, kp.debug->E);
  const BitVec x = uniformVec(s.params.L, rng);
  BitVec other = td.tauStar;
  other.flip(0);
  EXPECT_EQ(aboInvert(td, fk, other, aboEval(fk, other, x)).value_or(BitVec()), x);
  io::Bytes cut(pub.begin(), pub.end() - 1);
  EXPECT_THROW(decodeAboPublicKey(cut), FormatError);
}
