#include "dslpn/gf2m.hpp"

#include <array>
#include <string>

#include "dslpn/errors.hpp"

namespace dslpn {

std::uint32_t primitivePoly(unsigned m) {
  static constexpr std::array<std::uint32_t, 17> kPolys = {
      0,      0,      0x7,    0xB,    0x13,   0x25,   0x43,   0x83,    0x11D,
      0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
  };
  require(m >= 2 && m <= 16, "GF(2^m) needs 2 <= m <= 16, got m=" + std::to_string(m));
  return kPolys[m];
}

GF2m::GF2m(unsigned m) : m_(m), poly_(primitivePoly(m)) {
  const Elem n = order();
  exp_.resize(2 * std::size_t{n});
  log_.assign(std::size_t{n} + 1, 0);
  Elem x = 1;
  for (Elem i = 0; i < n; ++i) {
    exp_[i] = x;
    if (i > 0 && x == 1) throw Error("GF(2^" + std::to_string(m) + "): polynomial is not primitive");
    log_[x] = i;
    x <<= 1;
    if (x >> m) x ^= poly_;
  }
  if (x != 1) throw Error("GF(2^" + std::to_string(m) + "): polynomial is not primitive");
  for (Elem i = n; i < 2 * n; ++i) exp_[i] = exp_[i - n];
}

GF2m::Elem GF2m::mul(Elem a, Elem b) const {
  if (a == 0 || b == 0) return 0;
  return exp_[log_[a] + log_[b]];
}

GF2m::Elem GF2m::div(Elem a, Elem b) const {
  require(b != 0, "GF(2^m): division by zero");
  if (a == 0) return 0;
  return exp_[log_[a] + order() - log_[b]];
}

GF2m::Elem GF2m::inv(Elem a) const { return div(1, a); }

GF2m::Elem GF2m::alphaPow(std::int64_t e) const {
  const std::int64_t n = order();
  std::int64_t r = e % n;
  if (r < 0) r += n;
  return exp_[static_cast<std::size_t>(r)];
}

unsigned GF2m::log(Elem a) const {
  require(a != 0 && a <= order(), "GF(2^m): log of zero or out-of-range element");
  return log_[a];
}

}  // namespace dslpn
