#include "dslpn/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>

#include "dslpn/crhf.hpp"
#include "dslpn/cryptanalysis.hpp"
#include "dslpn/dual_distance.hpp"
#include "dslpn/ecc.hpp"
#include "dslpn/errors.hpp"
#include "dslpn/gadget.hpp"
#include "dslpn/linalg.hpp"
#include "dslpn/ltdf.hpp"
#include "dslpn/params.hpp"
#include "dslpn/sampling.hpp"
#include "dslpn/serialize.hpp"

namespace dslpn {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string key(int id, const std::string& name) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "c%02d.", id);
  return buf + name;
}

struct Context {
  Rng base;
  std::size_t workers;
  Report& report;
  // Desk key shared by criteria 3 and 5.
  std::optional<LtdfSetup> desk;
  std::optional<AboKeyPair> deskKey;

  Rng rngFor(int id) const { return base.child(static_cast<std::uint64_t>(id)); }

  const AboKeyPair& deskPair() {
    if (!deskKey) {
      desk = ltdfSetup(params::ltdfPreset("desk"));
      Rng r = base.child(1000);
      AboGenOptions o;
      o.debug = true;
      deskKey = aboGen(*desk, uniformVec(desk->params.L, r), r, o);
    }
    return *deskKey;
  }
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome c01Gadget(Context& ctx) {
  const auto t0 = Clock::now();
  std::size_t checked = 0, bad = 0;
  for (auto [w, s] : {std::pair<std::size_t, unsigned>{2, 4}, {3, 4}, {4, 3}}) {
    const GadgetParams p = GadgetParams::make(w << s, w);
    const BitMatrix G = gadgetMatrix(p);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << (w * s)); ++x) {
      const BitVec xv = BitVec::fromUint(w * s, x), xt = sparsify(p, xv);
      bad += !(G.mulVec(xt) == xv) || !(gadgetMul(p, xt) == xv) || xt.weight() != w;
      ++checked;
    }
  }
  const double secs = since(t0);
  ctx.report.set(key(1, "inputs_checked"), checked);
  ctx.report.set(key(1, "mismatches"), bad);
  return {bad == 0 && secs < 1.0, std::to_string(checked) + " inputs over (w,s) in {(2,4),(3,4),(4,3)}, " +
                                       std::to_string(bad) + " mismatches"};
}

Outcome c02Frd(Context& ctx) {
  const auto t0 = Clock::now();
  FrdFamily fam(8);
  std::vector<BitMatrix> h;
  for (std::uint64_t t = 0; t < 256; ++t) h.push_back(frdMatrix(fam, BitVec::fromUint(8, t)));
  std::size_t pairs = 0, full = 0;
  for (std::size_t a = 0; a < 256; ++a)
    for (std::size_t b = a + 1; b < 256; ++b) {
      ++pairs;
      full += rank(h[a] ^ h[b]) == 8;
    }
  const bool trivial = h[0].isZero() && h[1] == BitMatrix::identity(8);
  const double secs = since(t0);
  ctx.report.set(key(2, "modulus"), fam.modulus().toHex());
  ctx.report.set(key(2, "pairs"), pairs);
  ctx.report.set(key(2, "full_rank_pairs"), full);
  ctx.report.set(key(2, "trivial_branches_ok"), trivial);
  return {pairs == 32640 && full == pairs && trivial && secs < 5.0,
          std::to_string(full) + "/" + std::to_string(pairs) + " pairs of rank 8, H_0 = 0 and H_1 = I " +
              (trivial ? "hold" : "FAIL")};
}

Outcome c03Inversion(Context& ctx) {
  const AboKeyPair& kp = ctx.deskPair();
  const auto& p = ctx.desk->params;
  Rng r = ctx.rngFor(3);
  const std::size_t trials = 1000;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const BitVec x = uniformVec(p.L, r);
    BitVec tau = uniformVec(p.L, r);
    if (tau == kp.td.tauStar) tau.flip(0);
    const auto back = aboInvert(kp.td, kp.fk, tau, aboEval(kp.fk, tau, x));
    ok += back && *back == x;
  }
  // eps = 0 at micro: every x for 16 branches.
  const LtdfSetup micro = ltdfSetup(params::ltdfPreset("micro"));
  AboGenOptions o;
  o.eps = 0.0;
  const AboKeyPair clean = aboGen(micro, uniformVec(micro.params.L, r), r, o);
  std::size_t exhaustive = 0, exOk = 0;
  for (int b = 0; b < 16; ++b) {
    BitVec tau = uniformVec(micro.params.L, r);
    if (tau == clean.td.tauStar) tau.flip(0);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << micro.params.L); ++x) {
      const BitVec xv = BitVec::fromUint(micro.params.L, x);
      const auto back = aboInvert(clean.td, clean.fk, tau, aboEval(clean.fk, tau, xv));
      exOk += back && *back == xv;
      ++exhaustive;
    }
  }
  const double rate = double(ok) / double(trials);
  ctx.report.set(key(3, "desk_L"), p.L);
  ctx.report.set(key(3, "desk_ell"), p.ell);
  ctx.report.set(key(3, "desk_eps"), kp.eps);
  ctx.report.set(key(3, "desk_round_trips"), trials);
  ctx.report.set(key(3, "desk_success"), ok);
  ctx.report.set(key(3, "micro_L"), micro.params.L);
  ctx.report.set(key(3, "micro_inversions"), exhaustive);
  ctx.report.set(key(3, "micro_success"), exOk);
  return {rate >= 0.999 && exOk == exhaustive,
          "desk (L=" + std::to_string(p.L) + ") " + std::to_string(ok) + "/" + std::to_string(trials) +
              " round trips; micro eps=0 (L=" + std::to_string(micro.params.L) + ") " + std::to_string(exOk) + "/" +
              std::to_string(exhaustive)};
}

Outcome c04Lossiness(Context& ctx) {
  const LtdfSetup tiny = ltdfSetup(params::ltdfPreset("tiny"));
  const auto& p = tiny.params;
  Rng r = ctx.rngFor(4);
  AboGenOptions o;
  o.debug = true;
  const AboKeyPair kp = aboGen(tiny, uniformVec(p.L, r), r, o);
  BitVec tauInj = uniformVec(p.L, r);
  if (tauInj == kp.td.tauStar) tauInj.flip(0);
  const LossinessReport lr = lossinessMeasure(kp.fk, kp.td.tauStar, tauInj, &kp.debug->E, ctx.workers);
  ctx.report.set(key(4, "L"), p.L);
  ctx.report.set(key(4, "compression_pass"), p.compression.pass);
  ctx.report.set(key(4, "domain"), lr.domain);
  ctx.report.set(key(4, "injective_image"), lr.injectiveImage);
  ctx.report.set(key(4, "lossy_image"), lr.lossyImage);
  ctx.report.set(key(4, "distinct_y1"), lr.distinctY1);
  ctx.report.set(key(4, "max_noise"), *lr.maxNoise);
  ctx.report.set(key(4, "bound"), lr.bound->str());
  const bool ok = p.compression.pass && p.L <= 20 && lr.injectiveImage == lr.domain && lr.lossyImage < lr.domain &&
                  params::BigInt(lr.lossyImage) <= *lr.bound;
  return {ok, "L=" + std::to_string(p.L) + ": injective " + std::to_string(lr.injectiveImage) + "/" +
                  std::to_string(lr.domain) + ", lossy " + std::to_string(lr.lossyImage) + " <= " +
                  std::to_string(lr.distinctY1) + " * |B<=(" + std::to_string(p.ell) + "," +
                  std::to_string(*lr.maxNoise) + ")|"};
}

Outcome c05Noise(Context& ctx) {
  const AboKeyPair& kp = ctx.deskPair();
  const auto& p = ctx.desk->params;
  Rng r = ctx.rngFor(5);
  const GadgetParams gp = kp.fk.gadget();
  const NoiseReport nr = noiseWeightCheck(kp.debug->E, gp, 10000, r);
  const double bound = p.gamma * double(p.ell);
  // Inputs whose blocks all equal v have pairwise disjoint supports, so the
  // bits below are independent Bernoulli((1-(1-2eps)^t)/2).
  const BitMatrix ecols = kp.debug->E.transpose();
  std::size_t ones = 0, bits = 0;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << gp.s); ++v) {
    BitVec x(gp.inputLen());
    for (std::size_t b = 0; b < gp.w; ++b)
      for (unsigned i = 0; i < gp.s; ++i) x.set(b * gp.s + i, (v >> (gp.s - 1 - i)) & 1U);
    BitVec e(p.ell);
    for (std::size_t j : sparsify(gp, x).support()) e ^= ecols.row(j);
    ones += e.weight();
    bits += e.size();
  }
  const double expect = (1 - std::pow(1 - 2 * kp.eps, double(p.regime.t))) / 2;
  const double freq = double(ones) / double(bits), sigma = std::sqrt(expect * (1 - expect) / double(bits));
  ctx.report.set(key(5, "samples"), nr.samples);
  ctx.report.set(key(5, "max_weight"), nr.maxWeight);
  ctx.report.set(key(5, "mean_weight"), nr.meanWeight);
  ctx.report.set(key(5, "gamma_ell"), bound);
  ctx.report.set(key(5, "marginal_expected"), expect);
  ctx.report.set(key(5, "marginal_observed"), freq);
  ctx.report.set(key(5, "marginal_bits"), bits);
  const bool ok = double(nr.maxWeight) <= bound && std::abs(freq - expect) <= 3 * sigma;
  char buf[200];
  std::snprintf(buf, sizeof buf, "max weight %zu <= gamma*ell = %.2f; marginal %.5f vs %.5f (3 sigma %.5f)",
                nr.maxWeight, bound, freq, expect, 3 * sigma);
  return {ok, buf};
}

Outcome c06Crhf(Context& ctx) {
  std::size_t derived = 0, compressing = 0;
  for (unsigned k : {3u, 4u, 6u})
    for (int d : {3, 4})
      for (unsigned lambda : {4u, 8u}) {
        params::CrhfOptions o;
        o.mode = params::RegimeMode::kExact;
        o.maxN = 2048;
        params::CrhfParams p;
        try {
          p = params::deriveCrhf(k, d, lambda, o);
        } catch (const DomainError&) {
          continue;
        }
        ++derived;
        compressing += p.outLen + 2 * lambda < p.ttilde && params::checkCrhf(p).empty();
      }
  const auto t0 = Clock::now();
  Rng r = ctx.rngFor(6);
  const auto p = params::crhfParamsAt(12, 3, 8, 2, 4, 1);
  const std::size_t twoKT = 2 * p.regime.k * p.regime.t;
  CrhfGenOptions go;
  go.debug = true;
  go.hDistance = twoKT;
  const CrhfKey key6 = crhfGen(p, r, go);
  const bool hOk = !dualDistance(*key6.H, twoKT).d.has_value();
  const CollisionSummary s = exhaustiveCollisions(key6);
  const double secs = since(t0);
  ctx.report.set(key(6, "derived"), derived);
  ctx.report.set(key(6, "derived_compressing"), compressing);
  ctx.report.set(key(6, "exhaustive_inputs"), s.inputs);
  ctx.report.set(key(6, "collision_pairs"), s.pairs);
  ctx.report.set(key(6, "kernel_of_m"), s.kernelOfM);
  ctx.report.set(key(6, "h_only"), s.hOnly);
  ctx.report.set(key(6, "max_weight"), s.maxWeight);
  const bool ok = derived > 0 && compressing == derived && hOk && s.pairs > 0 && s.kernelOfM == s.pairs &&
                  p.ttilde <= 16 && secs < 60;
  return {ok, std::to_string(compressing) + "/" + std::to_string(derived) + " derived sets compress; " +
                  std::to_string(s.kernelOfM) + "/" + std::to_string(s.pairs) + " collisions in ker M over 2^" +
                  std::to_string(p.ttilde) + " inputs"};
}

Outcome c07Bias(Context& ctx) {
  Rng r = ctx.rngFor(7);
  const std::size_t trials = 100000;
  auto planted = [&](std::size_t w) {
    BitMatrix a = uniformMatrix(12, 24, r);
    BitVec sum(12);
    for (std::size_t j = 0; j + 1 < w; ++j) sum ^= a.column(j);
    for (std::size_t i = 0; i < 12; ++i) a.set(i, w - 1, sum.get(i));
    BitVec v(24);
    for (std::size_t j = 0; j < w; ++j) v.set(j);
    return std::pair{a, v};
  };
  std::size_t agree = 0;
  double worst = 0;
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < 20; ++i) {
    const std::size_t w = 1 + r.uniformBelow(10);
    const double eps = 0.01 + 0.19 * r.uniform01();
    auto [a, v] = planted(w);
    const LinearTestResult t = biasOf(a, v, eps, trials, r, ctx.workers);
    const double z = std::abs(t.empiricalBias - t.analyticBias) / t.stdErr;
    worst = std::max(worst, z);
    agree += t.inKernel && z <= 4;
    rows.push_back({std::to_string(w), formatDouble(eps), formatDouble(t.analyticBias), formatDouble(t.empiricalBias),
                    formatDouble(t.stdErr)});
  }
  ctx.report.table("c07_bias", {"w", "eps", "analytic", "empirical", "stderr"}, rows);
  // Kernel gate.
  auto [a, v] = planted(4);
  BitVec off = v;
  for (std::size_t j = 4; a.mulVec(off).isZero(); ++j) off.flip(j);
  const LinearTestResult g = biasOf(a, off, 0.05, trials, r, ctx.workers);
  const bool gate = !g.inKernel && g.analyticBias == 0 && std::abs(g.empiricalBias) <= 4 * g.stdErr;
  ctx.report.set(key(7, "configs_agreeing"), agree);
  ctx.report.set(key(7, "worst_z"), worst);
  ctx.report.set(key(7, "gate_empirical"), g.empiricalBias);
  ctx.report.set(key(7, "gate_ok"), gate);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu/20 configs within 4 sigma (worst %.2f); gate bias %.5f (4 sigma %.5f)", agree,
                worst, g.empiricalBias, 4 * g.stdErr);
  return {agree == 20 && gate, buf};
}

DistinguishConfig attackConfig() {
  DistinguishConfig c;
  c.n = 64;
  c.k = 3;
  c.m = 16384;
  c.tSize = 8;
  c.eps = 1.0 / (8 * 8);
  c.maxSubsets = 50;
  return c;
}

Outcome c08Attack(Context& ctx) {
  const auto t0 = Clock::now();
  DistinguishConfig c = attackConfig();
  c.alpha = 1;
  c.instances = 200;
  c.samplesPerInstance = 50;
  // t = n^delta with delta = 1/2: threshold n^(1 + 2(1 - delta)) = n^2.
  const double delta = std::log(double(c.tSize)) / std::log(double(c.n));
  const double threshold = std::pow(double(c.n), 1 + 2 * (1 - delta));
  Rng r = ctx.rngFor(8);
  const AdvantageEstimate e = distinguishDenseSparse(c, DistinguishStrategy::kSparseAttackPipeline, r, ctx.workers);
  const double secs = since(t0);
  ctx.report.set(key(8, "m"), c.m);
  ctx.report.set(key(8, "m_over_threshold"), double(c.m) / threshold);
  ctx.report.set(key(8, "instances"), c.instances);
  ctx.report.set(key(8, "dependencies"), e.instancesWithVector);
  ctx.report.set(key(8, "advantage"), e.advantage);
  ctx.report.set(key(8, "predicted"), e.predicted);
  ctx.report.set(key(8, "stderr"), e.stdErr);
  const bool ok = double(c.m) >= threshold && e.instancesWithVector * 10 >= c.instances * 9 &&
                  std::abs(e.advantage - e.predicted) <= 4 * e.stdErr && secs < 300;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu/%zu verified dependencies; advantage %.4f vs predicted %.4f (4 sigma %.4f)",
                e.instancesWithVector, c.instances, e.advantage, e.predicted, 4 * e.stdErr);
  return {ok, buf};
}

Outcome c09Unmask(Context& ctx) {
  Rng r = ctx.rngFor(9);
  const std::size_t n = 32, m = 512, k = 3, trials = 50, maxTries = 5000;
  std::size_t square = 0, compressingFail = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const SparseMatrix M = uniformSparse(n, m, k, r);
    BitMatrix T;
    do T = uniformMatrix(n, n, r);
    while (rank(T) != n);
    const UnmaskResult u = unmaskSquareT(mulDenseSparse(T, M), k, r, maxTries);
    square += u.success && equalUpToRowPermutation(u.recovered, M.densify());
  }
  for (std::size_t i = 0; i < trials; ++i) {
    const DenseSparse ds = denseSparseMatrix(n, m, k, 0.5, GoodDistSpec{n, m, k, 1, 1}, r);
    compressingFail += !unmaskSquareT(ds.A, k, r, maxTries).success;
  }
  ctx.report.set(key(9, "square_recovered"), square);
  ctx.report.set(key(9, "compressing_failures"), compressingFail);
  ctx.report.set(key(9, "trials"), trials);
  return {square * 10 >= trials * 8 && compressingFail == trials,
          "square T unmasked " + std::to_string(square) + "/" + std::to_string(trials) + "; compressing T failed " +
              std::to_string(compressingFail) + "/" + std::to_string(trials)};
}

Outcome c10NullTest(Context& ctx) {
  DistinguishConfig c = attackConfig();
  c.alpha = 0.5;
  c.instances = 100;
  c.samplesPerInstance = 100;
  Rng r = ctx.rngFor(10);
  const AdvantageEstimate e = distinguishDenseSparse(c, DistinguishStrategy::kSparseAttackPipeline, r, ctx.workers);
  ctx.report.set(key(10, "trials"), e.trials);
  ctx.report.set(key(10, "dependencies"), e.instancesWithVector);
  ctx.report.set(key(10, "advantage"), e.advantage);
  ctx.report.set(key(10, "stderr"), e.stdErr);
  char buf[160];
  std::snprintf(buf, sizeof buf, "advantage %.4f (4 sigma %.4f) over %zu trials, %zu dependencies found", e.advantage,
                4 * e.stdErr, e.trials, e.instancesWithVector);
  return {e.trials >= 10000 && std::abs(e.advantage) <= 4 * e.stdErr, buf};
}

Outcome c11Params(Context& ctx) {
  std::size_t ltdf = 0, ltdfBad = 0, crhf = 0, crhfBad = 0;
  for (unsigned k : {4u, 6u})
    for (const char* g : {"3/2", "2"})
      for (int mult : {0, 1})
        for (std::uint64_t n : {64u, 256u}) {
          const params::Rational gamma = params::parseRational(g);
          params::LtdfOptions o;
          o.D = mult == 0 ? params::Rational(gamma + 1) : params::Rational(2 * gamma);
          o.maxM = std::uint64_t{1} << 32;
          try {
            const auto p = params::deriveLtdf(k, gamma, params::Rational(1, 32), params::Rational(1, 8), n, o);
            ++ltdf;
            ltdfBad += !params::checkLtdf(p).empty() || !p.compression.pass;
          } catch (const DomainError&) {
          }
        }
  for (const auto& name : params::ltdfPresetNames()) {
    const LtdfSetup s = ltdfSetup(params::ltdfPreset(name));
    ++ltdf;
    ltdfBad += !params::checkLtdf(s.params).empty();
  }
  for (unsigned k : {3u, 4u, 6u})
    for (const char* d : {"3", "4", "5/2"})
      for (unsigned lambda : {4u, 8u}) {
        params::CrhfOptions o;
        o.mode = params::RegimeMode::kExact;
        o.maxN = 2048;
        try {
          const auto p = params::deriveCrhf(k, params::parseRational(d), lambda, o);
          ++crhf;
          crhfBad += !params::checkCrhf(p).empty();
        } catch (const DomainError&) {
        }
      }
  bool worked = true;
  for (std::uint64_t n : {64u, 256u, 1024u, 4096u})
    worked &= params::minM(n, 6, 2, params::Rational(10, 11)) == params::BigInt(n) * n;
  ctx.report.set(key(11, "ltdf_derived"), ltdf);
  ctx.report.set(key(11, "ltdf_violations"), ltdfBad);
  ctx.report.set(key(11, "crhf_derived"), crhf);
  ctx.report.set(key(11, "crhf_violations"), crhfBad);
  ctx.report.set(key(11, "m_equals_n_squared"), worked);
  return {ltdf >= 8 && crhf >= 6 && ltdfBad == 0 && crhfBad == 0 && worked,
          std::to_string(ltdf) + " LTDF and " + std::to_string(crhf) + " CRHF parameter sets, " +
              std::to_string(ltdfBad + crhfBad) + " violations; k=6, D=2, delta=10/11 gives m = n^2 " +
              (worked ? "at n in {64,256,1024,4096}" : "FAILED")};
}

Outcome c12Ecc(Context& ctx) {
  // Smallest family member: RS[4,1] over GF(8) with the [6,3] inner code.
  const ConcatenatedCode small(ConcatShape{3, 3, 4, 1}, defaultInnerCode(3));
  std::size_t patterns = 0, wrong = 0;
  const std::size_t len = small.blockLen();
  for (std::uint64_t x = 0; x < 8; ++x) {
    const BitVec xv = BitVec::fromUint(3, x), cw = small.encode(xv);
    // All error patterns of weight <= tErr, as bit masks.
    for (std::uint64_t e = 0; e < (std::uint64_t{1} << len); ++e) {
      if (static_cast<std::size_t>(__builtin_popcountll(e)) > small.tErr()) continue;
      const auto got = small.decode(cw ^ BitVec::fromUint(len, e));
      wrong += !(got && *got == xv);
      ++patterns;
    }
  }
  const std::shared_ptr<const BlockCode> desk = ltdfSetup(params::ltdfPreset("desk")).code;
  Rng r = ctx.rngFor(12);
  const std::size_t trials = 10000;
  const std::size_t failures = countDecodeFailures(*desk, trials, r);
  ctx.report.set(key(12, "small_block_len"), len);
  ctx.report.set(key(12, "small_t_err"), small.tErr());
  ctx.report.set(key(12, "small_patterns"), patterns);
  ctx.report.set(key(12, "small_wrong"), wrong);
  ctx.report.set(key(12, "desk_code"), desk->name());
  ctx.report.set(key(12, "desk_t_err"), desk->tErr());
  ctx.report.set(key(12, "desk_trials"), trials);
  ctx.report.set(key(12, "desk_failures"), failures);
  return {len <= 24 && wrong == 0 && failures == 0,
          std::to_string(patterns) + " patterns at blockLen " + std::to_string(len) + " (" + std::to_string(wrong) +
              " wrong); " + std::to_string(trials) + " weight-" + std::to_string(desk->tErr()) + " patterns on " +
              desk->name() + " (" + std::to_string(failures) + " failures)"};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*fn)(Context&);
};

const Criterion kTable[] = {
    {1, "gadget identity", c01Gadget},        {2, "FRD family", c02Frd},
    {3, "LTDF inversion", c03Inversion},      {4, "LTDF lossiness", c04Lossiness},
    {5, "noise bound", c05Noise},             {6, "CRHF compression and collisions", c06Crhf},
    {7, "piling-up bias oracle", c07Bias},    {8, "Sparse-LPN attack", c08Attack},
    {9, "unmasking dichotomy", c09Unmask},    {10, "Dense-Sparse null test", c10NullTest},
    {11, "parameter consistency", c11Params}, {12, "ECC contract", c12Ecc},
};

}  // namespace

std::vector<CriterionResult> runCriteria(const AcceptanceOptions& options, Report& report) {
  Context ctx{Rng(options.seed, 0), std::max<std::size_t>(options.workers, 1), report, std::nullopt, std::nullopt};
  report.set("seed", options.seed.toHex());
  std::vector<CriterionResult> out;
  for (const Criterion& c : kTable) {
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    const auto t0 = Clock::now();
    try {
      Outcome o = c.fn(ctx);
      r.pass = o.pass;
      r.detail = std::move(o.detail);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = since(t0);
    report.set(key(c.id, "pass"), r.pass);
    report.set(key(c.id, "detail"), r.detail);
    if (options.onResult) options.onResult(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CriterionResult> runAcceptance(const AcceptanceOptions& options, Report& report) {
  Report first;
  std::vector<CriterionResult> out = runCriteria(options, first);
  CriterionResult r;
  r.id = 13;
  r.name = "reproducibility";
  const auto t0 = Clock::now();
  try {
    AcceptanceOptions again = options;
    again.workers = options.workers == 1 ? 2 : 1;
    again.onResult = nullptr;
    Report second;
    runCriteria(again, second);
    namespace fs = std::filesystem;
    const fs::path dir = options.workDir.empty() ? fs::temp_directory_path() : fs::path(options.workDir);
    fs::create_directories(dir);
    const std::string a = (dir / "selftest_run1.txt").string(), b = (dir / "selftest_run2.txt").string();
    first.write(a);
    second.write(b);
    const bool same = io::readFile(a) == io::readFile(b);
    r.pass = same;
    r.detail = std::string("second run with ") + std::to_string(again.workers) + " worker(s): report files " +
               (same ? "byte-identical" : "DIFFER") + " (" + std::to_string(io::readFile(a).size()) + " bytes)";
  } catch (const std::exception& e) {
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = since(t0);
  report.append(first);
  report.set(key(13, "pass"), r.pass);
  report.set(key(13, "detail"), r.detail);
  if (options.onResult) options.onResult(r);
  out.push_back(std::move(r));
  return out;
}

std::string formatResultLine(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "[%s] criterion %2d: ", r.pass ? "PASS" : "FAIL", r.id);
  char secs[32];
  std::snprintf(secs, sizeof secs, " (%.2f s)", r.seconds);
  return buf + r.name + ": " + r.detail + secs;
}

}  // namespace dslpn
