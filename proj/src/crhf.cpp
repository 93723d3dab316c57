#include "dslpn/crhf.hpp"

#include <algorithm>
#include <map>

#include "dslpn/dual_distance.hpp"
#include "dslpn/errors.hpp"
#include "dslpn/linalg.hpp"
#include "dslpn/sampling.hpp"

namespace dslpn {

namespace {

BitMatrix sampleH(const params::CrhfParams& p, Rng& rng, const CrhfGenOptions& o, CrhfKey& key) {
  const std::size_t n = p.regime.n;
  if (!o.factored) return uniformMatrix(p.outLen, n, rng);
  BitMatrix t = uniformMatrix(n / 2, n, rng);
  BitMatrix hp = uniformMatrix(p.outLen, n / 2, rng);
  BitMatrix h = mul(hp, t);
  key.T = std::move(t);
  key.Hprime = std::move(hp);
  return h;
}

}  // namespace

CrhfKey crhfGen(const params::CrhfParams& p, Rng& rng, const CrhfGenOptions& o) {
  const auto& r = p.regime;
  require(r.t >= 1 && r.m == (r.t << p.s) && p.ttilde == r.t * p.s && p.outLen >= 1,
          "crhfGen: inconsistent parameters");
  CrhfKey key;
  key.params = p;
  BitMatrix h;
  for (std::size_t attempt = 0;; ++attempt) {
    key.T.reset();
    key.Hprime.reset();
    h = sampleH(p, rng, o, key);
    if (o.hDistance == 0 || !dualDistance(h, o.hDistance).d) break;
    if (attempt + 1 >= o.maxRejects)
      throw RejectionExhausted("crhfGen: no H without kernel vectors of weight <= " + std::to_string(o.hDistance) +
                               " after " + std::to_string(o.maxRejects) + " samples");
  }
  SparseMatrix m = goodSparse({r.n, r.m, r.k, o.goodD, o.maxRejects}, rng);
  key.Aprime = mulDenseSparse(h, m);
  if (o.debug) {
    key.H = std::move(h);
    key.M = std::move(m);
  } else {
    key.T.reset();
    key.Hprime.reset();
  }
  return key;
}

BitVec crhfHash(const CrhfKey& key, const BitVec& x) {
  requireDims(x.size() == key.params.ttilde, "crhfHash: input length " + std::to_string(x.size()) + ", expected " +
                                                 std::to_string(key.params.ttilde));
  return key.Aprime.mulVec(sparsify(key.gadget(), x));
}

CollisionReport collisionAnalyze(const CrhfKey& key, const BitVec& x1, const BitVec& x2) {
  require(key.H && key.M, "collisionAnalyze: needs a debug key");
  require(!(x1 == x2), "collisionAnalyze: x1 == x2 is not a collision");
  require(crhfHash(key, x1) == crhfHash(key, x2), "collisionAnalyze: inputs do not collide");
  const GadgetParams g = key.gadget();
  CollisionReport rep;
  rep.xprime = sparsify(g, x1) ^ sparsify(g, x2);
  rep.weight = rep.xprime.weight();
  rep.weightWithin2t = rep.weight <= 2 * key.params.regime.t;
  const BitVec mx = key.M->mulVec(rep.xprime);
  rep.kernelOfM = mx.isZero();
  rep.hOnly = !rep.kernelOfM && key.H->mulVec(mx).isZero();
  return rep;
}

CollisionSummary exhaustiveCollisions(const CrhfKey& key) {
  const std::size_t bits = key.params.ttilde;
  require(bits <= 24, "exhaustiveCollisions: input length " + std::to_string(bits) + " exceeds 24");
  require(key.params.outLen <= 64, "exhaustiveCollisions: output longer than 64 bits");
  std::map<std::uint64_t, std::vector<std::uint64_t>> buckets;
  const std::uint64_t count = std::uint64_t{1} << bits;
  for (std::uint64_t x = 0; x < count; ++x) buckets[crhfHash(key, BitVec::fromUint(bits, x)).toUint()].push_back(x);
  CollisionSummary s;
  s.inputs = count;
  s.distinctOutputs = buckets.size();
  for (const auto& [h, xs] : buckets)
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j) {
        const BitVec a = BitVec::fromUint(bits, xs[i]), b = BitVec::fromUint(bits, xs[j]);
        CollisionReport rep = collisionAnalyze(key, a, b);
        ++s.pairs;
        s.kernelOfM += rep.kernelOfM;
        s.hOnly += rep.hOnly;
        s.maxWeight = std::max(s.maxWeight, rep.weight);
        if (!s.example) s.example = std::make_pair(a, b);
      }
  return s;
}

io::Bytes encodeCrhfKey(const CrhfKey& key) {
  const auto& p = key.params;
  const bool debug = key.H && key.M;
  const auto num = boost::multiprecision::numerator(p.regime.D), den = boost::multiprecision::denominator(p.regime.D);
  require(num <= UINT32_MAX && den <= UINT32_MAX, "encodeCrhfKey: D does not fit the key format");
  io::Bytes out;
  io::append(out, io::U32List{static_cast<std::uint32_t>(p.regime.n), p.regime.k, static_cast<std::uint32_t>(p.regime.t),
                              p.s, p.lambda, static_cast<std::uint32_t>(num), static_cast<std::uint32_t>(den),
                              static_cast<std::uint32_t>(p.mode), debug ? 1u : 0u});
  io::append(out, key.Aprime);
  if (debug) {
    io::append(out, *key.H);
    io::append(out, *key.M);
  }
  return out;
}

CrhfKey decodeCrhfKey(std::span<const std::uint8_t> data) {
  std::size_t offset = 0;
  const auto h = io::decodeAs<io::U32List>(data, offset);
  if (h.size() != 9 || h[6] == 0 || h[7] > 2) throw FormatError("CRHF key: bad header");
  CrhfKey key;
  try {
    key.params = params::crhfParamsAt(h[0], h[1], h[2], h[3], params::Rational(h[5], h[6]), h[4]);
  } catch (const DomainError& e) {
    throw FormatError(std::string("CRHF key: invalid parameters: ") + e.what());
  }
  key.params.mode = static_cast<params::RegimeMode>(h[7]);
  key.Aprime = io::decodeAs<BitMatrix>(data, offset);
  if (key.Aprime.rows() != key.params.outLen || key.Aprime.cols() != key.params.regime.m)
    throw FormatError("CRHF key: A' has the wrong shape");
  if (h[8]) {
    key.H = io::decodeAs<BitMatrix>(data, offset);
    key.M = io::decodeAs<SparseMatrix>(data, offset);
    if (!(mulDenseSparse(*key.H, *key.M) == key.Aprime)) throw FormatError("CRHF key: A' != H*M");
  }
  if (offset != data.size()) throw FormatError("CRHF key: trailing bytes");
  return key;
}

}  // namespace dslpn
