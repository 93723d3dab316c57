#include "dslpn/ltdf.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>

#include "dslpn/errors.hpp"
#include "dslpn/linalg.hpp"
#include "dslpn/parallel.hpp"
#include "dslpn/sampling.hpp"

namespace dslpn {

namespace {

const gf2x::Poly& cachedModulus(std::size_t L) {
  static std::mutex mu;
  static std::map<std::size_t, gf2x::Poly> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(L);
  if (it == cache.end()) it = cache.emplace(L, gf2x::firstIrreducible(L)).first;
  return it->second;
}

std::shared_ptr<const FrdFamily> cachedFamily(std::size_t L) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const FrdFamily>> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find(L);
    if (it != cache.end()) return it->second;
  }
  auto fam = std::make_shared<const FrdFamily>(L);
  std::lock_guard lock(mu);
  return cache.emplace(L, fam).first->second;
}

void requireBranch(const FrdFamily& fam, const BitVec& v, const char* what) {
  requireDims(v.size() == fam.L(), std::string(what) + ": expected " + std::to_string(fam.L()) + " bits");
}

// XOR of the rows of `cols` selected by the support of x~ = spfy(x).
BitVec xorRows(const BitMatrix& cols, const std::vector<std::size_t>& support) {
  BitVec out(cols.cols());
  for (std::size_t j : support) out ^= cols.row(j);
  return out;
}

std::uint32_t narrow(const params::BigInt& v, const char* what) {
  if (v < 0 || v > UINT32_MAX) throw DomainError(std::string("LTDF key: ") + what + " does not fit the key format");
  return static_cast<std::uint32_t>(v);
}

void pushRational(io::U32List& out, const params::Rational& r, const char* what) {
  out.push_back(narrow(boost::multiprecision::numerator(r), what));
  out.push_back(narrow(boost::multiprecision::denominator(r), what));
}

void pushDouble(io::U32List& out, double d) {
  const auto bits = std::bit_cast<std::uint64_t>(d);
  out.push_back(static_cast<std::uint32_t>(bits));
  out.push_back(static_cast<std::uint32_t>(bits >> 32));
}

params::Rational readRational(const io::U32List& h, std::size_t i) {
  if (h[i + 1] == 0) throw FormatError("LTDF key: zero denominator");
  return params::Rational(params::BigInt(h[i]), params::BigInt(h[i + 1]));
}

double readDouble(const io::U32List& h, std::size_t i) {
  return std::bit_cast<double>(std::uint64_t{h[i]} | (std::uint64_t{h[i + 1]} << 32));
}

// Distinct rows of a flat (count x stride) word array.
std::size_t countDistinct(std::vector<std::uint64_t>& flat, std::size_t stride) {
  const std::size_t count = stride == 0 ? 0 : flat.size() / stride;
  std::vector<std::uint32_t> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  auto less = [&](std::uint32_t a, std::uint32_t b) {
    return std::lexicographical_compare(flat.begin() + a * stride, flat.begin() + (a + 1) * stride,
                                        flat.begin() + b * stride, flat.begin() + (b + 1) * stride);
  };
  std::sort(idx.begin(), idx.end(), less);
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < count; ++i)
    if (i == 0 || less(idx[i - 1], idx[i])) ++distinct;
  return distinct;
}

}  // namespace

FrdFamily::FrdFamily(std::size_t L) : L_(L), modulus_(cachedModulus(L)) {
  require(L >= 1, "FrdFamily: L must be positive");
  if (!gf2x::isIrreducible(modulus_)) throw Error("FrdFamily: modulus is not irreducible");
}

BitVec FrdFamily::mul(const BitVec& a, const BitVec& b) const {
  requireBranch(*this, a, "frdMul");
  requireBranch(*this, b, "frdMul");
  return gf2x::toBitVec(gf2x::mulMod(gf2x::fromBitVec(a), gf2x::fromBitVec(b), modulus_), L_);
}

std::optional<BitVec> FrdFamily::inv(const BitVec& a) const {
  requireBranch(*this, a, "frd inverse");
  auto r = gf2x::invMod(gf2x::fromBitVec(a), modulus_);
  if (!r) return std::nullopt;
  return gf2x::toBitVec(*r, L_);
}

BitMatrix frdMatrix(const FrdFamily& fam, const BitVec& tau) {
  std::vector<BitVec> cols;
  cols.reserve(fam.L());
  for (std::size_t j = 0; j < fam.L(); ++j) cols.push_back(fam.mul(tau, BitVec::unit(fam.L(), j)));
  return BitMatrix::fromColumns(fam.L(), cols);
}

LtdfSetup ltdfSetup(unsigned k, const params::Rational& gamma, std::uint64_t n, const params::LtdfOptions& options,
                    std::size_t outerLen) {
  params::RegimeSearch q;
  q.k = k;
  q.D = options.D.value_or(gamma + 1);
  q.n = n;
  q.mode = options.mode;
  q.maxL = options.maxL;
  q.maxM = options.maxM;
  q.maxDupPairs = options.maxDupPairs;
  auto regime = params::findRegime(q);
  require(regime.has_value(), "ltdfSetup: no compression regime within the search bounds");
  const params::CompressionCheck chk = params::checkCompression(*regime);
  const std::size_t L = regime->t * chk.s;
  LtdfSetup out;
  out.code = buildConcatenated(L, outerLen);
  const params::BigInt len(out.code->blockLen());
  out.params = params::deriveLtdf(k, gamma, params::Rational(params::BigInt(out.code->tErr()), len),
                                  params::Rational(params::BigInt(L), len), n, options);
  if (out.params.L != L || out.params.ell != out.code->blockLen()) throw Error("ltdfSetup: code and parameters disagree");
  return out;
}

LtdfSetup ltdfSetup(const params::LtdfPreset& preset) {
  return ltdfSetup(preset.k, preset.Gamma, preset.n, preset.options(), preset.outerLen);
}

AboPublicKey::AboPublicKey(LtdfSetup setup, BitMatrix A, BitMatrix B)
    : setup_(std::move(setup)), A_(std::move(A)), B_(std::move(B)) {
  const auto& p = setup_.params;
  require(setup_.code != nullptr, "AboPublicKey: missing code");
  requireDims(setup_.code->dim() == p.L && setup_.code->blockLen() == p.ell, "AboPublicKey: code shape mismatch");
  requireDims(A_.rows() == p.regime.n / 2 && A_.cols() == p.regime.m, "AboPublicKey: A must be n/2 x m");
  requireDims(B_.rows() == p.ell && B_.cols() == p.regime.m, "AboPublicKey: B must be ell x m");
  frd_ = cachedFamily(p.L);
  Acols_ = A_.transpose();
  Bcols_ = B_.transpose();
}

GadgetParams AboPublicKey::gadget() const { return GadgetParams::make(params().regime.m, params().regime.t); }

AboKeyPair aboGen(const LtdfSetup& setup, const BitVec& tauStar, Rng& rng, const AboGenOptions& options) {
  const auto& p = setup.params;
  require(setup.code != nullptr, "aboGen: missing code");
  require(p.L == p.regime.t * p.s && (p.regime.t << p.s) == p.regime.m, "aboGen: L must equal t*log2(m/t)");
  require(p.regime.n % 2 == 0, "aboGen: n must be even");
  requireDims(tauStar.size() == p.L, "aboGen: tau* must have L bits");
  const double eps = options.eps.value_or(p.eps);
  const std::size_t n = p.regime.n, m = p.regime.m, ell = p.ell;

  SparseMatrix M = goodSparse({n, m, p.regime.k, options.goodD, options.maxRejects}, rng);
  BitMatrix T = uniformMatrix(n / 2, n, rng);
  BitMatrix A = mulDenseSparse(T, M);
  BitMatrix S = uniformMatrix(ell, n / 2, rng);
  BitMatrix E = bernoulliMatrix(eps, ell, m, rng);

  // Build B column by column: (S A)_j + E_j + encode(tau* G e_j).
  const FrdFamily& fam = *cachedFamily(p.L);
  const GadgetParams gp = GadgetParams::make(m, p.regime.t);
  std::vector<BitVec> branch;  // encode(tau* x^i), i < L
  branch.reserve(p.L);
  for (std::size_t i = 0; i < p.L; ++i) branch.push_back(setup.code->encode(fam.mul(tauStar, BitVec::unit(p.L, i))));
  BitMatrix Bcols = mul(S, A).transpose() ^ E.transpose();
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i : gadgetMul(gp, BitVec::unit(m, j)).support()) Bcols.row(j) ^= branch[i];

  AboKeyPair kp{AboPublicKey(setup, std::move(A), Bcols.transpose()), AboTrapdoor{std::move(S), tauStar}, eps,
                std::nullopt};
  if (options.debug) kp.debug = AboDebug{std::move(T), std::move(M), std::move(E)};
  return kp;
}

BitMatrix branchMatrix(const AboPublicKey& fk, const BitVec& tau) {
  const auto& p = fk.params();
  requireBranch(fk.frd(), tau, "branchMatrix");
  const GadgetParams gp = fk.gadget();
  std::vector<BitVec> cols;
  cols.reserve(p.regime.m);
  for (std::size_t j = 0; j < p.regime.m; ++j)
    cols.push_back(fk.code().encode(fk.frd().mul(tau, gadgetMul(gp, BitVec::unit(p.regime.m, j)))));
  return BitMatrix::fromColumns(p.ell, cols);
}

BitMatrix branchColumns(const AboPublicKey& fk, const BitVec& tau) {
  const BitMatrix bt = fk.B() ^ branchMatrix(fk, tau);
  std::vector<BitVec> rows;
  rows.reserve(fk.params().regime.m);
  const BitMatrix btCols = bt.transpose();
  for (std::size_t j = 0; j < fk.params().regime.m; ++j) rows.push_back(BitVec::concat(fk.Acols().row(j), btCols.row(j)));
  return BitMatrix::fromRows(std::move(rows));
}

BitVec aboEval(const AboPublicKey& fk, const BitVec& tau, const BitVec& x) {
  requireBranch(fk.frd(), tau, "aboEval tau");
  requireBranch(fk.frd(), x, "aboEval x");
  const GadgetParams gp = fk.gadget();
  const BitVec xt = sparsify(gp, x);
  const auto support = xt.support();
  BitVec y2 = xorRows(fk.Bcols(), support);
  y2 ^= fk.code().encode(frdMul(fk.frd(), tau, gadgetMul(gp, xt)));
  return BitVec::concat(xorRows(fk.Acols(), support), y2);
}

std::optional<BitVec> aboInvert(const AboTrapdoor& td, const AboPublicKey& fk, const BitVec& tau, const BitVec& y) {
  const auto& p = fk.params();
  requireBranch(fk.frd(), tau, "aboInvert tau");
  requireDims(td.tauStar.size() == p.L, "aboInvert: trapdoor does not match the key");
  requireDims(y.size() == fk.outLen(), "aboInvert: y must have n/2 + ell bits");
  require(!(tau == td.tauStar), "aboInvert: tau equals the lossy branch tau*");
  const std::size_t half = p.regime.n / 2;
  const BitVec yPrime = y.slice(half, p.ell) ^ td.S.mulVec(y.slice(0, half));
  auto c = fk.code().decode(yPrime);
  if (!c) return std::nullopt;
  const auto inv = fk.frd().inv(td.tauStar ^ tau);
  BitVec x = fk.frd().mul(*inv, *c);
  if (!(aboEval(fk, tau, x) == y)) return std::nullopt;
  return x;
}

NoiseReport noiseWeightCheck(const BitMatrix& E, const GadgetParams& p, std::size_t samples, Rng& rng) {
  requireDims(E.cols() == p.n, "noiseWeightCheck: E must have m columns");
  const BitMatrix cols = E.transpose();
  NoiseReport r;
  r.samples = samples;
  double total = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t w = xorRows(cols, sparsify(p, uniformVec(p.inputLen(), rng)).support()).weight();
    r.maxWeight = std::max(r.maxWeight, w);
    total += static_cast<double>(w);
  }
  if (samples > 0) r.meanWeight = total / static_cast<double>(samples);
  return r;
}

LossinessReport lossinessMeasure(const AboPublicKey& fk, const BitVec& tauStar, const BitVec& tauInjective,
                                 const BitMatrix* E, std::size_t workers) {
  const auto& p = fk.params();
  require(p.L <= 24, "lossinessMeasure: 2^L exceeds the 2^24 enumeration limit");
  if (E) requireDims(E->rows() == p.ell && E->cols() == p.regime.m, "lossinessMeasure: E must be ell x m");
  const GadgetParams gp = fk.gadget();
  const std::size_t domain = std::size_t{1} << p.L;
  const std::size_t chunks = std::min<std::size_t>(domain, 256), per = domain / chunks;
  const std::size_t half = p.regime.n / 2;

  // Flat word arrays of all outputs at one branch; optionally the y1 halves.
  auto enumerate = [&](const BitMatrix& cols, std::vector<std::uint64_t>* y1s) {
    const std::size_t stride = BitVec::wordsFor(cols.cols()), stride1 = BitVec::wordsFor(half);
    auto parts = parallelMap(chunks, workers, [&](std::size_t c) {
      std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> out;
      out.first.reserve(per * stride);
      for (std::size_t x = c * per; x < (c + 1) * per; ++x) {
        const BitVec y = xorRows(cols, sparsify(gp, BitVec::fromUint(p.L, x)).support());
        out.first.insert(out.first.end(), y.words().begin(), y.words().end());
        if (y1s) {
          const BitVec y1 = y.slice(0, half);
          out.second.insert(out.second.end(), y1.words().begin(), y1.words().end());
        }
      }
      return out;
    });
    std::vector<std::uint64_t> flat;
    flat.reserve(domain * stride);
    for (auto& part : parts) {
      flat.insert(flat.end(), part.first.begin(), part.first.end());
      if (y1s) y1s->insert(y1s->end(), part.second.begin(), part.second.end());
    }
    return std::pair{std::move(flat), std::pair{stride, stride1}};
  };

  LossinessReport r;
  r.domain = domain;
  std::vector<std::uint64_t> y1s;
  {
    auto [flat, strides] = enumerate(branchColumns(fk, tauStar), &y1s);
    r.lossyImage = countDistinct(flat, strides.first);
    r.distinctY1 = countDistinct(y1s, strides.second);
  }
  {
    auto [flat, strides] = enumerate(branchColumns(fk, tauInjective), nullptr);
    r.injectiveImage = countDistinct(flat, strides.first);
  }
  if (E) {
    const BitMatrix cols = E->transpose();
    auto maxima = parallelMap(chunks, workers, [&](std::size_t c) {
      std::size_t mx = 0;
      for (std::size_t x = c * per; x < (c + 1) * per; ++x)
        mx = std::max(mx, xorRows(cols, sparsify(gp, BitVec::fromUint(p.L, x)).support()).weight());
      return mx;
    });
    r.maxNoise = *std::max_element(maxima.begin(), maxima.end());
    r.bound = params::BigInt(r.distinctY1) * params::ballAtMost(p.ell, *r.maxNoise);
  }
  return r;
}

io::Bytes encodeAboPublicKey(const AboPublicKey& fk) {
  const auto& p = fk.params();
  io::U32List h{static_cast<std::uint32_t>(p.regime.n), p.regime.k, static_cast<std::uint32_t>(p.regime.t), p.s,
                static_cast<std::uint32_t>(p.ell), static_cast<std::uint32_t>(p.mode)};
  pushRational(h, p.Gamma, "Gamma");
  pushRational(h, p.regime.D, "D");
  pushRational(h, p.rhoC, "rhoC");
  pushRational(h, p.deltaC, "deltaC");
  pushDouble(h, p.gamma);
  pushDouble(h, p.alpha);
  pushDouble(h, p.eps);
  io::Bytes out;
  io::append(out, h);
  appendCode(out, fk.code());
  io::append(out, fk.A());
  io::append(out, fk.B());
  return out;
}

AboPublicKey decodeAboPublicKey(std::span<const std::uint8_t> data) {
  std::size_t offset = 0;
  const auto h = io::decodeAs<io::U32List>(data, offset);
  if (h.size() != 20 || h[5] > 1 || h[3] == 0 || h[3] > 30 || h[0] < 2) throw FormatError("LTDF key: bad header");
  LtdfSetup setup;
  auto& p = setup.params;
  p.regime.n = h[0];
  p.regime.k = h[1];
  p.regime.t = h[2];
  p.s = h[3];
  p.regime.m = p.regime.t << p.s;
  p.L = p.regime.t * p.s;
  p.ell = h[4];
  p.mode = static_cast<params::RegimeMode>(h[5]);
  p.Gamma = readRational(h, 6);
  p.regime.D = readRational(h, 8);
  p.rhoC = readRational(h, 10);
  p.deltaC = readRational(h, 12);
  p.gamma = readDouble(h, 14);
  p.alpha = readDouble(h, 16);
  p.eps = readDouble(h, 18);
  if (p.regime.D <= p.Gamma) throw FormatError("LTDF key: D must exceed Gamma");
  p.Dprime = p.Gamma * p.regime.D / (p.regime.D - p.Gamma);
  p.compression = params::checkCompression(p.regime);
  const auto bad = params::checkLtdf(p);
  if (!bad.empty()) throw FormatError("LTDF key: invariant violated: " + bad.front());
  setup.code = readCode(data, offset);
  BitMatrix A = io::decodeAs<BitMatrix>(data, offset);
  BitMatrix B = io::decodeAs<BitMatrix>(data, offset);
  if (offset != data.size()) throw FormatError("LTDF key: trailing bytes");
  try {
    return AboPublicKey(std::move(setup), std::move(A), std::move(B));
  } catch (const DimensionError& e) {
    throw FormatError(std::string("LTDF key: ") + e.what());
  }
}

io::Bytes encodeAboTrapdoor(const AboTrapdoor& td, const std::optional<AboDebug>& debug) {
  io::Bytes out;
  io::append(out, io::U32List{static_cast<std::uint32_t>(td.tauStar.size()), static_cast<std::uint32_t>(td.S.rows()),
                              static_cast<std::uint32_t>(td.S.cols()), debug ? 1u : 0u});
  io::append(out, td.S);
  io::append(out, td.tauStar);
  if (debug) {
    io::append(out, debug->T);
    io::append(out, debug->M);
    io::append(out, debug->E);
  }
  return out;
}

std::pair<AboTrapdoor, std::optional<AboDebug>> decodeAboTrapdoor(std::span<const std::uint8_t> data,
                                                                  const AboPublicKey& fk) {
  std::size_t offset = 0;
  const auto h = io::decodeAs<io::U32List>(data, offset);
  const auto& p = fk.params();
  if (h.size() != 4 || h[0] != p.L || h[1] != p.ell || h[2] != p.regime.n / 2 || h[3] > 1)
    throw FormatError("LTDF trapdoor: header does not match the public key");
  AboTrapdoor td;
  td.S = io::decodeAs<BitMatrix>(data, offset);
  td.tauStar = io::decodeAs<BitVec>(data, offset);
  if (td.S.rows() != p.ell || td.S.cols() != p.regime.n / 2 || td.tauStar.size() != p.L)
    throw FormatError("LTDF trapdoor: wrong shapes");
  std::optional<AboDebug> debug;
  if (h[3]) {
    AboDebug d;
    d.T = io::decodeAs<BitMatrix>(data, offset);
    d.M = io::decodeAs<SparseMatrix>(data, offset);
    d.E = io::decodeAs<BitMatrix>(data, offset);
    if (d.T.rows() != p.regime.n / 2 || d.M.cols() != p.regime.m || d.E.rows() != p.ell || d.E.cols() != p.regime.m)
      throw FormatError("LTDF trapdoor: wrong debug shapes");
    if (!(mulDenseSparse(d.T, d.M) == fk.A())) throw FormatError("LTDF trapdoor: A != T*M");
    debug = std::move(d);
  }
  if (offset != data.size()) throw FormatError("LTDF trapdoor: trailing bytes");
  return {std::move(td), std::move(debug)};
}

}  // namespace dslpn
