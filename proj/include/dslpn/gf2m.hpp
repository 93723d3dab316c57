#pragma once

#include <cstdint>
#include <vector>

namespace dslpn {

// GF(2^m) for 2 <= m <= 16 with a fixed primitive polynomial; elements are
// integers < 2^m (bit i = coefficient of x^i).
class GF2m {
 public:
  using Elem = std::uint32_t;

  explicit GF2m(unsigned m);

  unsigned m() const { return m_; }
  Elem order() const { return (Elem{1} << m_) - 1; }  // multiplicative group size
  std::uint32_t poly() const { return poly_; }

  static Elem add(Elem a, Elem b) { return a ^ b; }
  Elem mul(Elem a, Elem b) const;
  Elem div(Elem a, Elem b) const;  // throws DomainError when b == 0
  Elem inv(Elem a) const;
  Elem alphaPow(std::int64_t e) const;  // alpha^e, any sign
  unsigned log(Elem a) const;           // a != 0

 private:
  unsigned m_;
  std::uint32_t poly_;
  std::vector<Elem> exp_;  // 2 * order entries
  std::vector<std::uint32_t> log_;
};

// The primitive polynomial used for GF(2^m).
std::uint32_t primitivePoly(unsigned m);

}  // namespace dslpn
