#include "dslpn/cli.hpp"

#include <sodium.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dslpn/acceptance.hpp"
#include "dslpn/crhf.hpp"
#include "dslpn/cryptanalysis.hpp"
#include "dslpn/dual_distance.hpp"
#include "dslpn/ecc.hpp"
#include "dslpn/errors.hpp"
#include "dslpn/linalg.hpp"
#include "dslpn/ltdf.hpp"
#include "dslpn/parallel.hpp"
#include "dslpn/params.hpp"
#include "dslpn/report.hpp"
#include "dslpn/sampling.hpp"
#include "dslpn/serialize.hpp"

namespace dslpn {

namespace {

// Thrown by a command whose checked property does not hold.
struct CheckFailed : Error {
  using Error::Error;
};

struct Ctx {
  ExperimentConfig cfg;
  Report report;
  std::ostream& out;
  std::ostream& err;

  std::size_t workers() const {
    const std::uint64_t w = cfg.getU64("workers");
    return w == 0 ? defaultWorkers() : w;
  }
  std::size_t trials(std::size_t fallback) const {
    const std::uint64_t t = cfg.getU64("trials");
    return t == 0 ? fallback : t;
  }
  Rng rng() const { return Rng(cfg.seed(), 0); }
  const std::string& need(const std::string& key) const {
    const std::string& v = cfg.get(key);
    if (v.empty()) throw DomainError("--" + key + " is required");
    return v;
  }
};

std::string stripHex(std::string s) {
  if (s.size() > 1 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.erase(0, 2);
  return s;
}

BitVec hexArg(const Ctx& c, const std::string& key, std::size_t len) {
  return BitVec::fromHex(stripHex(c.need(key)), len);
}

std::string digest(const io::Bytes& bytes) {
  if (sodium_init() < 0) throw Error("libsodium initialization failed");
  std::uint8_t h[32];
  crypto_generichash(h, sizeof h, bytes.data(), bytes.size(), nullptr, 0);
  return io::toHex(h);
}

// Small files are echoed in full; larger ones by length and BLAKE2b digest.
void putFile(Report& r, const std::string& prefix, const std::string& path, const io::Bytes& bytes) {
  r.set(prefix + ".path", path);
  r.set(prefix + ".bytes", bytes.size());
  r.set(prefix + ".blake2b", digest(bytes));
  if (bytes.size() <= 4096) r.set(prefix + ".hex", io::toHex(bytes));
}

params::RegimeMode parseMode(const std::string& s) {
  if (s == "asymptotic") return params::RegimeMode::kAsymptotic;
  if (s == "exact") return params::RegimeMode::kExact;
  if (s == "fixed") return params::RegimeMode::kFixed;
  throw DomainError("--mode must be asymptotic, exact or fixed, got '" + s + "'");
}

void putCompression(Report& r, const params::CompressionCheck& c) {
  r.set("compression.pass", c.pass);
  r.set("compression.reason", std::string(toString(c.reason)));
  r.set("compression.lhs_bits", c.lhsBits);
  r.set("compression.ball_bits", c.ballBits);
  r.set("compression.middle_bits", c.middleBits);
  r.set("compression.margin_bits", c.margin);
  r.set("compression.middle_holds", c.middleHolds);
  r.set("compression.delta_above_min", c.deltaAboveMin);
  r.set("compression.meets_min_m", c.meetsMinM);
}

void putRegime(Report& r, const params::CompressionRegime& g, params::RegimeMode mode) {
  r.set("n", g.n);
  r.set("k", g.k);
  r.set("D", params::toString(g.D));
  r.set("t", g.t);
  r.set("m", g.m);
  r.set("delta", g.delta());
  r.set("delta_min", params::toDouble(params::minDelta(g.k, g.D)));
  r.set("mode", std::string(toString(mode)));
}

void putLtdf(Report& r, const params::LtdfParams& p) {
  putRegime(r, p.regime, p.mode);
  r.set("s", p.s);
  r.set("L", p.L);
  r.set("Gamma", params::toString(p.Gamma));
  r.set("Dprime", params::toString(p.Dprime));
  r.set("rhoC", params::toString(p.rhoC));
  r.set("deltaC", params::toString(p.deltaC));
  r.set("gamma", p.gamma);
  r.set("alpha", p.alpha);
  r.set("ell", p.ell);
  r.set("eps", p.eps);
  putCompression(r, p.compression);
}

void putCrhf(Report& r, const params::CrhfParams& p) {
  putRegime(r, p.regime, p.mode);
  r.set("s", p.s);
  r.set("ttilde", p.ttilde);
  r.set("rho", params::toString(p.rho));
  r.set("out_len", p.outLen);
  r.set("eps", p.eps);
  r.set("lambda", p.lambda);
  putCompression(r, p.compression);
}

void putViolations(Ctx& c, const std::vector<std::string>& v) {
  std::string joined;
  for (const auto& s : v) joined += (joined.empty() ? "" : ";") + s;
  c.report.set("invariants_ok", v.empty());
  c.report.set("violations", joined);
  if (!v.empty()) throw CheckFailed("invariants violated: " + joined);
}

LtdfSetup setupFromConfig(const Ctx& c) {
  const std::string& preset = c.cfg.get("preset");
  if (!preset.empty()) return ltdfSetup(params::ltdfPreset(preset));
  params::LtdfOptions o;
  const params::Rational gamma = c.cfg.getRational("gamma");
  if (!c.cfg.get("D").empty()) o.D = c.cfg.getRational("D");
  o.mode = parseMode(c.cfg.get("mode"));
  if (c.cfg.getU64("max-l") != 0) o.maxL = c.cfg.getU64("max-l");
  o.maxM = c.cfg.getU64("max-m");
  return ltdfSetup(static_cast<unsigned>(c.cfg.getU64("k")), gamma, c.cfg.getU64("n"), o);
}

params::CrhfParams crhfFromConfig(const Ctx& c) {
  const unsigned k = static_cast<unsigned>(c.cfg.getU64("k"));
  const params::Rational d = c.cfg.get("D").empty() ? params::Rational(3) : c.cfg.getRational("D");
  const unsigned lambda = static_cast<unsigned>(c.cfg.getU64("lambda"));
  const std::uint64_t t = c.cfg.getU64("t"), s = c.cfg.getU64("s");
  if (t != 0 || s != 0) {
    require(t != 0 && s != 0, "--t and --s must be given together");
    return params::crhfParamsAt(c.cfg.getU64("n"), k, t, static_cast<unsigned>(s), d, lambda);
  }
  params::CrhfOptions o;
  o.mode = parseMode(c.cfg.get("mode"));
  o.maxN = c.cfg.getU64("max-n");
  o.maxM = c.cfg.getU64("max-m");
  return params::deriveCrhf(k, d, lambda, o);
}

// --- params ---------------------------------------------------------------

int cmdParamsDerive(Ctx& c) {
  const std::string& scheme = c.cfg.get("scheme");
  if (scheme == "ltdf") {
    const LtdfSetup s = setupFromConfig(c);
    putLtdf(c.report, s.params);
    c.report.set("code", s.code->name());
    c.report.set("code.t_err", s.code->tErr());
    putViolations(c, params::checkLtdf(s.params));
  } else if (scheme == "crhf") {
    const params::CrhfParams p = crhfFromConfig(c);
    putCrhf(c.report, p);
    putViolations(c, params::checkCrhf(p));
  } else {
    throw DomainError("--scheme must be ltdf or crhf, got '" + scheme + "'");
  }
  return kExitOk;
}

// --- sample ---------------------------------------------------------------

int cmdSample(Ctx& c) {
  Rng rng = c.rng();
  const std::string& kind = c.cfg.get("kind");
  const std::size_t n = c.cfg.getU64("n"), m = c.cfg.getU64("m"), k = c.cfg.getU64("k");
  io::Bytes bytes;
  std::size_t ones = 0, rows = n;
  if (kind == "uniform") {
    const BitMatrix a = uniformMatrix(n, m, rng);
    for (std::size_t i = 0; i < n; ++i) ones += a.row(i).weight();
    bytes = io::encode(a);
  } else if (kind == "bernoulli") {
    const BitMatrix a = bernoulliMatrix(c.cfg.getDouble("eps"), n, m, rng);
    for (std::size_t i = 0; i < n; ++i) ones += a.row(i).weight();
    bytes = io::encode(a);
  } else if (kind == "sparse" || kind == "good-sparse") {
    const SparseMatrix s =
        kind == "sparse" ? uniformSparse(n, m, k, rng)
                         : goodSparse(GoodDistSpec{n, m, k, c.cfg.getU64("d"), c.cfg.getU64("max-rejects")}, rng);
    ones = m * k;
    bytes = io::encode(s);
  } else if (kind == "dense-sparse") {
    const DenseSparse ds = denseSparseMatrix(n, m, k, c.cfg.getDouble("alpha"),
                                             GoodDistSpec{n, m, k, c.cfg.getU64("d"), c.cfg.getU64("max-rejects")}, rng);
    rows = ds.A.rows();
    for (std::size_t i = 0; i < rows; ++i) ones += ds.A.row(i).weight();
    bytes = io::encode(ds.A);
  } else {
    throw DomainError("--kind must be uniform, bernoulli, sparse, good-sparse or dense-sparse, got '" + kind + "'");
  }
  c.report.set("rows", rows);
  c.report.set("cols", m);
  c.report.set("ones", ones);
  c.report.set("density", double(ones) / double(rows * m));
  const std::string& path = c.cfg.get("matrix");
  if (!path.empty()) io::writeFile(path, bytes);
  putFile(c.report, "matrix", path, bytes);
  return kExitOk;
}

// --- crhf -----------------------------------------------------------------

CrhfKey loadCrhfKey(const Ctx& c) { return decodeCrhfKey(io::readFile(c.need("key"))); }

int cmdCrhfKeygen(Ctx& c) {
  const params::CrhfParams p = crhfFromConfig(c);
  Rng rng = c.rng();
  CrhfGenOptions o;
  o.debug = c.cfg.getBool("debug");
  o.goodD = c.cfg.getU64("d");
  o.maxRejects = c.cfg.getU64("max-rejects");
  o.hDistance = c.cfg.getU64("h-distance");
  const CrhfKey key = crhfGen(p, rng, o);
  const io::Bytes bytes = encodeCrhfKey(key);
  io::writeFile(c.need("key"), bytes);
  putCrhf(c.report, p);
  putFile(c.report, "key", c.cfg.get("key"), bytes);
  return kExitOk;
}

std::vector<BitVec> readInputs(const std::string& path, std::size_t len) {
  const io::Bytes bytes = io::readFile(path);
  std::vector<BitVec> xs;
  if (bytes.size() >= 4 && std::equal(bytes.begin(), bytes.begin() + 4, io::kMagic)) {
    std::size_t off = 0;
    while (off < bytes.size()) xs.push_back(io::decodeAs<BitVec>(bytes, off));
  } else {
    std::string text(bytes.begin(), bytes.end());
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string::npos) end = text.size();
      std::string line = text.substr(pos, end - pos);
      pos = end + 1;
      line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch); }),
                 line.end());
      if (!line.empty() && line[0] != '#') xs.push_back(BitVec::fromHex(stripHex(line), len));
    }
  }
  for (const auto& x : xs) requireDims(x.size() == len, "input of length " + std::to_string(x.size()) +
                                                            ", key expects " + std::to_string(len));
  return xs;
}

int cmdCrhfHash(Ctx& c) {
  const CrhfKey key = loadCrhfKey(c);
  const std::vector<BitVec> xs = readInputs(c.need("in"), key.params.ttilde);
  std::vector<std::vector<std::string>> rows;
  for (const auto& x : xs) rows.push_back({x.toHex(), crhfHash(key, x).toHex()});
  putCrhf(c.report, key.params);
  c.report.set("inputs", xs.size());
  c.report.table("hashes", {"x", "h"}, rows);
  return kExitOk;
}

int cmdCrhfCollide(Ctx& c) {
  require(c.cfg.getBool("exhaustive"), "crhf collide only supports --exhaustive search");
  const CrhfKey key = loadCrhfKey(c);
  require(key.M.has_value(), "crhf collide needs a key generated with --debug");
  const CollisionSummary s = exhaustiveCollisions(key);
  putCrhf(c.report, key.params);
  c.report.set("inputs", s.inputs);
  c.report.set("distinct_outputs", s.distinctOutputs);
  c.report.set("collision_pairs", s.pairs);
  c.report.set("kernel_of_m", s.kernelOfM);
  c.report.set("h_only", s.hOnly);
  c.report.set("max_weight", s.maxWeight);
  if (s.example) {
    c.report.set("example.x1", s.example->first.toHex());
    c.report.set("example.x2", s.example->second.toHex());
  }
  return kExitOk;
}

// --- ltdf -----------------------------------------------------------------

AboPublicKey loadPublicKey(const Ctx& c) { return decodeAboPublicKey(io::readFile(c.need("key"))); }

int cmdLtdfKeygen(Ctx& c) {
  const LtdfSetup setup = setupFromConfig(c);
  Rng rng = c.rng();
  const BitVec tauStar =
      c.cfg.get("branch").empty() ? uniformVec(setup.params.L, rng) : hexArg(c, "branch", setup.params.L);
  AboGenOptions o;
  o.debug = c.cfg.getBool("debug");
  if (!c.cfg.get("eps").empty()) o.eps = c.cfg.getDouble("eps");
  o.goodD = c.cfg.getU64("d");
  o.maxRejects = c.cfg.getU64("max-rejects");
  const AboKeyPair kp = aboGen(setup, tauStar, rng, o);
  const io::Bytes pk = encodeAboPublicKey(kp.fk), td = encodeAboTrapdoor(kp.td, kp.debug);
  io::writeFile(c.need("key"), pk);
  io::writeFile(c.need("trapdoor"), td);
  putLtdf(c.report, setup.params);
  c.report.set("code", setup.code->name());
  c.report.set("eps_used", kp.eps);
  c.report.set("lossy_branch", tauStar.toHex());
  putFile(c.report, "key", c.cfg.get("key"), pk);
  putFile(c.report, "trapdoor", c.cfg.get("trapdoor"), td);
  return kExitOk;
}

int cmdLtdfEval(Ctx& c) {
  const AboPublicKey fk = loadPublicKey(c);
  const std::size_t L = fk.params().L;
  const BitVec tau = hexArg(c, "branch", L), x = hexArg(c, "x", L);
  c.report.set("L", L);
  c.report.set("branch", tau.toHex());
  c.report.set("x", x.toHex());
  c.report.set("y", aboEval(fk, tau, x).toHex());
  return kExitOk;
}

int cmdLtdfInvert(Ctx& c) {
  const AboPublicKey fk = loadPublicKey(c);
  const auto [td, debug] = decodeAboTrapdoor(io::readFile(c.need("trapdoor")), fk);
  const std::size_t L = fk.params().L;
  const BitVec tau = hexArg(c, "branch", L), y = hexArg(c, "y", fk.outLen());
  const std::optional<BitVec> x = aboInvert(td, fk, tau, y);
  c.report.set("branch", tau.toHex());
  c.report.set("y", y.toHex());
  c.report.set("inverted", x.has_value());
  c.report.set("x", x ? x->toHex() : std::string());
  if (!x) throw CheckFailed("y is not an image under this branch (decoding or re-evaluation failed)");
  return kExitOk;
}

int cmdLtdfLossiness(Ctx& c) {
  require(c.cfg.getBool("exhaustive"), "ltdf lossiness only supports --exhaustive counting");
  const AboPublicKey fk = loadPublicKey(c);
  const auto [td, debug] = decodeAboTrapdoor(io::readFile(c.need("trapdoor")), fk);
  const std::size_t L = fk.params().L;
  BitVec inj = td.tauStar;
  inj.flip(0);
  if (!c.cfg.get("branch").empty()) inj = hexArg(c, "branch", L);
  const LossinessReport r = lossinessMeasure(fk, td.tauStar, inj, debug ? &debug->E : nullptr, c.workers());
  c.report.set("L", L);
  c.report.set("injective_branch", inj.toHex());
  c.report.set("domain", r.domain);
  c.report.set("injective_image", r.injectiveImage);
  c.report.set("lossy_image", r.lossyImage);
  c.report.set("distinct_y1", r.distinctY1);
  if (r.maxNoise) c.report.set("max_noise", *r.maxNoise);
  if (r.bound) c.report.set("bound", r.bound->str());
  c.report.set("lossy_log2", std::log2(double(r.lossyImage)));
  return kExitOk;
}

// --- cryptanalysis --------------------------------------------------------

int cmdAttackSparseLpn(Ctx& c) {
  DistinguishConfig d;
  d.n = c.cfg.getU64("n");
  d.m = c.cfg.getU64("m");
  d.k = c.cfg.getU64("k");
  d.alpha = c.cfg.getDouble("alpha");
  d.tSize = c.cfg.getU64("t-size");
  d.eps = c.cfg.get("eps").empty() ? 1.0 / double(8 * d.tSize) : c.cfg.getDouble("eps");
  d.maxSubsets = c.cfg.getU64("max-subsets");
  d.wMax = c.cfg.getU64("wmax");
  d.instances = c.trials(100);
  d.samplesPerInstance = c.cfg.getU64("samples");
  const std::string& s = c.cfg.get("strategy");
  DistinguishStrategy strategy;
  if (s == "sparse-attack") strategy = DistinguishStrategy::kSparseAttackPipeline;
  else if (s == "best-kernel-vector") strategy = DistinguishStrategy::kBestKernelVector;
  else throw DomainError("--strategy must be sparse-attack or best-kernel-vector, got '" + s + "'");
  Rng rng = c.rng();
  const AdvantageEstimate e = distinguishDenseSparse(d, strategy, rng, c.workers());
  c.report.set("eps", d.eps);
  c.report.set("instances", d.instances);
  c.report.set("instances_with_vector", e.instancesWithVector);
  c.report.set("trials", e.trials);
  c.report.set("accept_lpn", e.acceptLpn);
  c.report.set("accept_uniform", e.acceptUniform);
  c.report.set("advantage", e.advantage);
  c.report.set("stderr", e.stdErr);
  c.report.set("predicted", e.predicted);
  return kExitOk;
}

int cmdAttackUnmask(Ctx& c) {
  const std::size_t n = c.cfg.getU64("n"), m = c.cfg.getU64("m"), k = c.cfg.getU64("k");
  const std::size_t trials = c.trials(50), maxTries = c.cfg.getU64("max-tries");
  const double alpha = c.cfg.getDouble("alpha");
  const Rng base = c.rng();
  struct Row {
    bool success;
    bool matches;
    std::size_t tries;
  };
  const auto rows = parallelMap(trials, c.workers(), [&](std::size_t i) {
    Rng r = base.child(i);
    BitMatrix A;
    SparseMatrix M;
    if (alpha == 1) {
      M = uniformSparse(n, m, k, r);
      BitMatrix T;
      do T = uniformMatrix(n, n, r);
      while (rank(T) != n);
      A = mulDenseSparse(T, M);
    } else {
      DenseSparse ds = denseSparseMatrix(n, m, k, alpha, GoodDistSpec{n, m, k, 1, 1}, r);
      A = std::move(ds.A);
      M = std::move(ds.M);
    }
    const UnmaskResult u = unmaskSquareT(A, k, r, maxTries);
    return Row{u.success, u.success && equalUpToRowPermutation(u.recovered, M.densify()), u.tries};
  });
  std::size_t success = 0, matches = 0;
  std::vector<std::vector<std::string>> table;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    success += rows[i].success;
    matches += rows[i].matches;
    table.push_back({std::to_string(i), rows[i].success ? "recovered" : "failure", rows[i].matches ? "1" : "0",
                     std::to_string(rows[i].tries)});
  }
  c.report.set("trials", trials);
  c.report.set("success", success);
  c.report.set("matches_m", matches);
  c.report.table("unmask", {"trial", "outcome", "matches_m", "tries"}, table);
  return kExitOk;
}

int cmdBiasEstimate(Ctx& c) {
  const std::size_t n = c.cfg.getU64("n"), m = c.cfg.getU64("m"), w = c.cfg.getU64("w");
  require(w >= 1 && w <= m, "--w must lie in [1, m]");
  const double eps = c.cfg.get("eps").empty() ? 0.05 : c.cfg.getDouble("eps");
  Rng rng = c.rng();
  // Uniform A with a planted kernel vector on the first w columns.
  BitMatrix a = uniformMatrix(n, m, rng);
  BitVec sum(n);
  for (std::size_t j = 0; j + 1 < w; ++j) sum ^= a.column(j);
  for (std::size_t i = 0; i < n; ++i) a.set(i, w - 1, sum.get(i));
  BitVec v(m);
  for (std::size_t j = 0; j < w; ++j) v.set(j);
  const LinearTestResult r = biasOf(a, v, eps, c.trials(100000), rng, c.workers());
  c.report.set("eps", eps);
  c.report.set("in_kernel", r.inKernel);
  c.report.set("trials", r.trials);
  c.report.set("analytic_bias", r.analyticBias);
  c.report.set("empirical_bias", r.empiricalBias);
  c.report.set("stderr", r.stdErr);
  c.report.set("z", r.stdErr > 0 ? (r.empiricalBias - r.analyticBias) / r.stdErr : 0.0);
  return kExitOk;
}

int cmdDualdist(Ctx& c) {
  const std::string& in = c.cfg.get("in");
  if (!in.empty()) {
    const io::Bytes bytes = io::readFile(in);
    std::size_t off = 0;
    const io::Object obj = io::decodeNext(bytes, off);
    const std::size_t wMax = c.cfg.getU64("wmax");
    DualDistance d;
    if (const auto* s = std::get_if<SparseMatrix>(&obj)) d = dualDistance(*s, wMax);
    else if (const auto* b = std::get_if<BitMatrix>(&obj)) d = dualDistance(*b, wMax);
    else throw FormatError(in + " does not hold a matrix");
    c.report.set("wmax", wMax);
    c.report.set("dual_distance", d.d ? std::to_string(*d.d) : "> " + std::to_string(wMax));
    if (d.d) c.report.set("witness", d.witness.toHex());
    return kExitOk;
  }
  Rng rng = c.rng();
  const DualDistanceStats s = dualDistanceStats(c.cfg.getU64("n"), c.cfg.getU64("m"), c.cfg.getU64("k"),
                                                c.cfg.getDouble("delta"), c.cfg.getDouble("c"), c.trials(100), rng,
                                                c.workers());
  c.report.set("trials", s.trials);
  c.report.set("wmax", s.wMax);
  c.report.set("hits", s.hits);
  c.report.set("frequency", s.frequency);
  c.report.set("stderr", s.stdErr);
  c.report.set("birthday_floor", s.birthdayFloor);
  c.report.set("predicted_order", s.predictedOrder);
  return kExitOk;
}

// --- selftest -------------------------------------------------------------

int cmdSelftest(Ctx& c) {
  AcceptanceOptions o;
  o.seed = c.cfg.seed();
  o.workers = c.workers();
  namespace fs = std::filesystem;
  const std::string& outPath = c.cfg.get("out");
  const fs::path parent = outPath.empty() ? fs::path() : fs::path(outPath).parent_path();
  o.workDir = ((parent.empty() ? fs::temp_directory_path() : parent) / "selftest_work").string();
  o.onResult = [&c](const CriterionResult& r) { c.out << formatResultLine(r) << std::endl; };
  int failed = 0;
  for (const auto& r : runAcceptance(o, c.report)) failed += !r.pass;
  c.out << (kCriteria - failed) << "/" << kCriteria << " criteria passed" << std::endl;
  c.report.set("criteria_passed", kCriteria - failed);
  if (failed) throw CheckFailed(std::to_string(failed) + " acceptance criteria failed");
  return kExitOk;
}

// ---------------------------------------------------------------------------

using Action = std::function<int(Ctx&)>;

struct Command {
  std::string name;
  Action action;
  bool printReport = true;
};

void printReport(const Report& r, std::ostream& out) {
  std::size_t width = 0;
  for (const auto& [k, v] : r.entries())
    if (k.rfind("config.", 0) != 0) width = std::max(width, k.size());
  for (const auto& [k, v] : r.entries()) {
    if (k.rfind("config.", 0) == 0 || k == "registry_version" || k == "format_version" || k == "command") continue;
    out << k << std::string(width + 2 - k.size(), ' ') << v << "\n";
  }
  const std::string full = r.str();
  const auto tables = full.find("[table ");
  if (tables != std::string::npos) out << full.substr(tables);
}

}  // namespace

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dense-Sparse LPN workbench", "dslpn"};
  app.require_subcommand(1);
  app.fallthrough();

  std::map<std::string, std::string> overrides;
  std::string configPath;
  std::optional<Command> chosen;

  auto opt = [&overrides](CLI::App* a, const std::string& key, const std::string& help) {
    a->add_option_function<std::string>("--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; },
                                        help);
  };
  auto flag = [&overrides](CLI::App* a, const std::string& key, const std::string& help) {
    a->add_flag_callback("--" + key, [&overrides, key] { overrides[key] = "true"; }, help);
  };
  auto leaf = [&chosen](CLI::App* a, const std::string& name, Action act, bool print = true) {
    a->callback([&chosen, name, act, print] { chosen = Command{name, act, print}; });
  };

  opt(&app, "seed", "master seed, hex (default: $DSLPN_SEED, else 0)");
  app.add_option("--config", configPath, "key = value config file, or a report file");
  opt(&app, "out", "write the report to this file");
  opt(&app, "trials", "trial count (0: the command's default)");
  opt(&app, "workers", "worker threads (0: available parallelism)");
  flag(&app, "debug", "keep hidden key material in key files");

  auto paramKeys = [&](CLI::App* a) {
    opt(a, "preset", "named LTDF preset (micro, tiny, desk)");
    opt(a, "k", "column weight of M");
    opt(a, "gamma", "LTDF Gamma, rational");
    opt(a, "D", "compression exponent, rational");
    opt(a, "n", "LPN dimension");
    opt(a, "lambda", "CRHF security parameter");
    opt(a, "mode", "asymptotic, exact or fixed");
    opt(a, "max-n", "CRHF search bound on n");
    opt(a, "max-l", "LTDF bound on L (0: none)");
    opt(a, "max-m", "bound on m");
    opt(a, "t", "fixed CRHF t (with --s)");
    opt(a, "s", "fixed CRHF s = log2(m/t)");
  };
  auto samplingKeys = [&](CLI::App* a) {
    opt(a, "d", "dual-distance bound for the sparse matrix");
    opt(a, "max-rejects", "rejection-sampling budget");
  };

  CLI::App* params = app.add_subcommand("params", "parameter derivation");
  params->require_subcommand(1);
  CLI::App* derive = params->add_subcommand("derive", "derive and check a parameter set");
  opt(derive, "scheme", "ltdf or crhf");
  paramKeys(derive);
  leaf(derive, "params derive", cmdParamsDerive);

  CLI::App* sample = app.add_subcommand("sample", "sample a matrix");
  opt(sample, "kind", "uniform, bernoulli, sparse, good-sparse or dense-sparse");
  for (const char* k : {"n", "m", "k", "eps", "alpha"}) opt(sample, k, std::string("sampling parameter ") + k);
  samplingKeys(sample);
  opt(sample, "matrix", "write the serialized matrix here");
  leaf(sample, "sample", cmdSample);

  CLI::App* crhf = app.add_subcommand("crhf", "collision-resistant hash");
  crhf->require_subcommand(1);
  CLI::App* ck = crhf->add_subcommand("keygen", "generate a hash key");
  paramKeys(ck);
  samplingKeys(ck);
  opt(ck, "h-distance", "resample H until no kernel vector of weight <= this");
  opt(ck, "key", "key file to write");
  leaf(ck, "crhf keygen", cmdCrhfKeygen);
  CLI::App* ch = crhf->add_subcommand("hash", "hash inputs");
  opt(ch, "key", "key file");
  opt(ch, "in", "inputs: hex lines or serialized bit vectors");
  leaf(ch, "crhf hash", cmdCrhfHash);
  CLI::App* cc = crhf->add_subcommand("collide", "find and classify collisions");
  opt(cc, "key", "key file (generated with --debug)");
  flag(cc, "exhaustive", "hash every input");
  leaf(cc, "crhf collide", cmdCrhfCollide);

  CLI::App* ltdf = app.add_subcommand("ltdf", "all-but-one lossy trapdoor function");
  ltdf->require_subcommand(1);
  CLI::App* lk = ltdf->add_subcommand("keygen", "generate a key lossy at --branch");
  paramKeys(lk);
  samplingKeys(lk);
  opt(lk, "branch", "lossy branch, hex (default: random)");
  opt(lk, "eps", "noise rate (default: derived)");
  opt(lk, "key", "public key file to write");
  opt(lk, "trapdoor", "trapdoor file to write");
  leaf(lk, "ltdf keygen", cmdLtdfKeygen);
  CLI::App* le = ltdf->add_subcommand("eval", "evaluate");
  opt(le, "key", "public key file");
  opt(le, "branch", "branch, hex");
  opt(le, "x", "input, hex");
  leaf(le, "ltdf eval", cmdLtdfEval);
  CLI::App* li = ltdf->add_subcommand("invert", "invert with the trapdoor");
  opt(li, "key", "public key file");
  opt(li, "trapdoor", "trapdoor file");
  opt(li, "branch", "branch, hex");
  opt(li, "y", "image, hex");
  leaf(li, "ltdf invert", cmdLtdfInvert);
  CLI::App* ll = ltdf->add_subcommand("lossiness", "count images on both branches");
  opt(ll, "key", "public key file");
  opt(ll, "trapdoor", "trapdoor file");
  opt(ll, "branch", "injective branch, hex (default: lossy branch with bit 0 flipped)");
  flag(ll, "exhaustive", "evaluate every input");
  leaf(ll, "ltdf lossiness", cmdLtdfLossiness);

  CLI::App* attack = app.add_subcommand("attack", "attacks");
  attack->require_subcommand(1);
  CLI::App* as = attack->add_subcommand("sparse-lpn", "sparse-attack distinguisher");
  for (const char* k : {"n", "m", "k", "alpha", "eps", "t-size", "max-subsets", "wmax", "samples", "strategy"})
    opt(as, k, std::string("attack parameter ") + k);
  leaf(as, "attack sparse-lpn", cmdAttackSparseLpn);
  CLI::App* au = attack->add_subcommand("unmask-square", "recover M from A = T M");
  for (const char* k : {"n", "m", "k", "alpha", "max-tries"}) opt(au, k, std::string("unmasking parameter ") + k);
  leaf(au, "attack unmask-square", cmdAttackUnmask);

  CLI::App* bias = app.add_subcommand("bias", "linear-test bias");
  bias->require_subcommand(1);
  CLI::App* be = bias->add_subcommand("estimate", "analytic versus empirical bias of a planted test vector");
  for (const char* k : {"n", "m", "w", "eps"}) opt(be, k, std::string("bias parameter ") + k);
  leaf(be, "bias estimate", cmdBiasEstimate);

  CLI::App* dd = app.add_subcommand("dualdist", "dual distance of a matrix, or its frequency over samples");
  for (const char* k : {"in", "wmax", "n", "m", "k", "delta", "c"}) opt(dd, k, std::string("parameter ") + k);
  leaf(dd, "dualdist", cmdDualdist);

  CLI::App* self = app.add_subcommand("selftest", "run the acceptance suite");
  leaf(self, "selftest", cmdSelftest, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInvalid;
  }
  if (!chosen) {
    err << app.help();
    return kExitInvalid;
  }

  Ctx ctx{ExperimentConfig(), Report(), out, err};
  try {
    if (const char* env = std::getenv("DSLPN_SEED"); env && *env) ctx.cfg.set("seed", env);
    if (!configPath.empty()) ctx.cfg.loadFile(configPath);
    for (const auto& [k, v] : overrides) ctx.cfg.set(k, v);
    ctx.cfg.set("seed", stripHex(ctx.cfg.get("seed")));
    (void)ctx.cfg.seed();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  ctx.report.set("command", chosen->name);
  ctx.report.embedConfig(ctx.cfg);
  int code = kExitOk;
  try {
    code = chosen->action(ctx);
  } catch (const CheckFailed& e) {
    err << "check failed: " << e.what() << "\n";
    code = kExitCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  if (chosen->printReport) printReport(ctx.report, out);
  const std::string& path = ctx.cfg.get("out");
  if (!path.empty()) {
    try {
      ctx.report.write(path);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitInvalid;
    }
  }
  return code;
}

}  // namespace dslpn
