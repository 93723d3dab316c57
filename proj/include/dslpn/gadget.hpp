#pragma once

#include <cstddef>
#include <optional>

#include "dslpn/bitmatrix.hpp"
#include "dslpn/bitvec.hpp"

namespace dslpn {

// n = w * 2^s. Block b of an input holds s bits, most significant first; it
// selects position b*2^s + value of the output.
struct GadgetParams {
  std::size_t n = 0;
  std::size_t w = 0;
  unsigned s = 0;

  // Throws DomainError unless w | n, n/w = 2^s and s >= 1.
  static GadgetParams make(std::size_t n, std::size_t w);
  std::size_t inputLen() const { return w * s; }
  std::size_t blockLen() const { return n / w; }
};

// spfy_{n,w}: one set bit per block of the output.
BitVec sparsify(const GadgetParams& p, const BitVec& x);
// Inverse of sparsify on B_reg(n, w); nullopt when v is not regular.
std::optional<BitVec> desparsify(const GadgetParams& p, const BitVec& v);
bool isRegular(const GadgetParams& p, const BitVec& v);

// Explicit G (w*s x n), block diagonal with g_s = [bin_s(0) | ... | bin_s(2^s - 1)].
BitMatrix gadgetMatrix(const GadgetParams& p);
// G * v without building G.
BitVec gadgetMul(const GadgetParams& p, const BitVec& v);

}  // namespace dslpn
