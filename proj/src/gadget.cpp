#include "dslpn/gadget.hpp"

#include <bit>
#include <string>

#include "dslpn/errors.hpp"

namespace dslpn {

namespace {

std::size_t blockValue(const BitVec& x, std::size_t begin, unsigned s) {
  std::size_t v = 0;
  for (unsigned i = 0; i < s; ++i) v = (v << 1) | std::size_t{x.get(begin + i)};
  return v;
}

void putValue(BitVec& x, std::size_t begin, unsigned s, std::size_t v) {
  for (unsigned i = 0; i < s; ++i) x.set(begin + i, (v >> (s - 1 - i)) & 1U);
}

}  // namespace

GadgetParams GadgetParams::make(std::size_t n, std::size_t w) {
  require(w >= 1 && n % w == 0, "gadget: w must divide n (n=" + std::to_string(n) + ", w=" + std::to_string(w) + ")");
  const std::size_t b = n / w;
  require(std::has_single_bit(b) && b >= 2, "gadget: n/w must be a power of two >= 2");
  require(std::countr_zero(b) < 48, "gadget: block too large");
  return {n, w, static_cast<unsigned>(std::countr_zero(b))};
}

BitVec sparsify(const GadgetParams& p, const BitVec& x) {
  requireDims(x.size() == p.inputLen(), "sparsify: input length " + std::to_string(x.size()) + ", expected " +
                                            std::to_string(p.inputLen()));
  BitVec out(p.n);
  for (std::size_t b = 0; b < p.w; ++b) out.set(b * p.blockLen() + blockValue(x, b * p.s, p.s));
  return out;
}

bool isRegular(const GadgetParams& p, const BitVec& v) {
  if (v.size() != p.n || v.weight() != p.w) return false;
  std::size_t block = 0;
  for (std::size_t i : v.support()) {
    if (i / p.blockLen() != block) return false;
    ++block;
  }
  return true;
}

std::optional<BitVec> desparsify(const GadgetParams& p, const BitVec& v) {
  requireDims(v.size() == p.n, "desparsify: length mismatch");
  if (!isRegular(p, v)) return std::nullopt;
  return gadgetMul(p, v);
}

BitMatrix gadgetMatrix(const GadgetParams& p) {
  BitMatrix g(p.inputLen(), p.n);
  for (std::size_t b = 0; b < p.w; ++b)
    for (std::size_t j = 0; j < p.blockLen(); ++j)
      for (unsigned i = 0; i < p.s; ++i)
        if ((j >> (p.s - 1 - i)) & 1U) g.set(b * p.s + i, b * p.blockLen() + j, true);
  return g;
}

BitVec gadgetMul(const GadgetParams& p, const BitVec& v) {
  requireDims(v.size() == p.n, "gadgetMul: length " + std::to_string(v.size()) + ", expected " + std::to_string(p.n));
  std::vector<std::size_t> acc(p.w, 0);
  for (std::size_t i : v.support()) acc[i / p.blockLen()] ^= i % p.blockLen();
  BitVec out(p.inputLen());
  for (std::size_t b = 0; b < p.w; ++b) putValue(out, b * p.s, p.s, acc[b]);
  return out;
}

}  // namespace dslpn
