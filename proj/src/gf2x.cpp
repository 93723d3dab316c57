#include "dslpn/gf2x.hpp"

#include <bit>
#include <utility>

#include "dslpn/errors.hpp"

namespace dslpn::gf2x {

namespace {

constexpr std::size_t kW = 64;

bool bit(const Poly& p, std::size_t i) { return i / kW < p.size() && ((p[i / kW] >> (i % kW)) & 1U); }

// acc ^= b * x^shift; acc is grown as needed.
void xorShifted(Poly& acc, const Poly& b, std::size_t shift) {
  if (b.empty()) return;
  const std::size_t ws = shift / kW, bs = shift % kW;
  const std::size_t need = b.size() + ws + 1;
  if (acc.size() < need) acc.resize(need, 0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    acc[i + ws] ^= b[i] << bs;
    if (bs != 0) acc[i + ws + 1] ^= b[i] >> (kW - bs);
  }
}

std::vector<std::size_t> primeFactors(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t q = 2; q * q <= n; ++q) {
    if (n % q != 0) continue;
    out.push_back(q);
    while (n % q == 0) n /= q;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

void normalize(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

long degree(const Poly& p) {
  if (p.empty()) return -1;
  return static_cast<long>((p.size() - 1) * kW + (kW - 1 - std::countl_zero(p.back())));
}

Poly fromBitVec(const BitVec& v) {
  Poly p(v.words().begin(), v.words().end());
  normalize(p);
  return p;
}

BitVec toBitVec(const Poly& p, std::size_t len) {
  requireDims(degree(p) < static_cast<long>(len), "polynomial does not fit in the requested length");
  std::vector<std::uint64_t> w(BitVec::wordsFor(len), 0);
  for (std::size_t i = 0; i < p.size(); ++i) w[i] = p[i];
  return BitVec::fromWords(len, std::move(w));
}

Poly monomial(std::size_t d) {
  Poly p(d / kW + 1, 0);
  p[d / kW] = std::uint64_t{1} << (d % kW);
  return p;
}

Poly add(const Poly& a, const Poly& b) {
  Poly r = a.size() >= b.size() ? a : b;
  const Poly& s = a.size() >= b.size() ? b : a;
  for (std::size_t i = 0; i < s.size(); ++i) r[i] ^= s[i];
  normalize(r);
  return r;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly r;
  const long db = degree(b);
  for (long i = 0; i <= db; ++i)
    if (bit(b, static_cast<std::size_t>(i))) xorShifted(r, a, static_cast<std::size_t>(i));
  normalize(r);
  return r;
}

std::pair<Poly, Poly> divMod(const Poly& a, const Poly& b) {
  const long db = degree(b);
  require(db >= 0, "polynomial division by zero");
  Poly r = a, q;
  normalize(r);
  for (long dr = degree(r); dr >= db; dr = degree(r)) {
    const std::size_t shift = static_cast<std::size_t>(dr - db);
    xorShifted(r, b, shift);
    normalize(r);
    if (q.size() <= shift / kW) q.resize(shift / kW + 1, 0);
    q[shift / kW] ^= std::uint64_t{1} << (shift % kW);
  }
  normalize(q);
  return {std::move(q), std::move(r)};
}

Poly mod(const Poly& a, const Poly& b) {
  const long db = degree(b);
  require(db >= 0, "polynomial division by zero");
  Poly r = a;
  normalize(r);
  for (long dr = degree(r); dr >= db; dr = degree(r)) {
    xorShifted(r, b, static_cast<std::size_t>(dr - db));
    normalize(r);
  }
  return r;
}

Poly mulMod(const Poly& a, const Poly& b, const Poly& f) { return mod(mul(a, b), f); }

Poly gcd(Poly a, Poly b) {
  normalize(a);
  normalize(b);
  while (!b.empty()) {
    Poly r = mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::optional<Poly> invMod(const Poly& a, const Poly& f) {
  Poly r0 = f, r1 = mod(a, f), s0, s1 = {1};
  while (!r1.empty()) {
    auto [q, r] = divMod(r0, r1);
    Poly s = add(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (degree(r0) != 0) return std::nullopt;
  return mod(s0, f);
}

bool isIrreducible(const Poly& f) {
  const long L = degree(f);
  if (L < 1) return false;
  if (L == 1) return true;
  const Poly x = monomial(1);
  const auto primes = primeFactors(static_cast<std::size_t>(L));
  // h_i = x^(2^i) mod f.
  Poly h = x;
  for (long i = 1; i <= L; ++i) {
    h = mulMod(h, h, f);
    for (std::size_t q : primes) {
      if (static_cast<long>(static_cast<std::size_t>(L) / q) != i) continue;
      if (degree(gcd(add(h, x), f)) != 0) return false;
    }
  }
  return h == x;
}

Poly firstIrreducible(std::size_t L) {
  require(L >= 1, "irreducible polynomial degree must be positive");
  const Poly top = monomial(L);
  for (std::uint64_t g = 0;; ++g) {
    if (L > 1) {
      if ((g & 1U) == 0) continue;  // divisible by x
      if (std::popcount(g) % 2 == 1) continue;  // f(1) = 0
    }
    if (L < 64 && g >> L) break;
    Poly f = add(top, Poly{g});
    if (isIrreducible(f)) return f;
  }
  throw DomainError("no irreducible polynomial found");
}

}  // namespace dslpn::gf2x
