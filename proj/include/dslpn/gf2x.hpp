#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dslpn/bitvec.hpp"

namespace dslpn::gf2x {

// Polynomial over F_2: bit i of the packed words is the coefficient of x^i.
// Kept normalized (no high zero words); the zero polynomial is empty.
using Poly = std::vector<std::uint64_t>;

Poly fromBitVec(const BitVec& v);
// Coefficients 0..len-1; throws DimensionError if the degree is >= len.
BitVec toBitVec(const Poly& p, std::size_t len);
Poly monomial(std::size_t degree);

// -1 for zero.
long degree(const Poly& p);
void normalize(Poly& p);

Poly add(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);
// Quotient and remainder; b != 0.
std::pair<Poly, Poly> divMod(const Poly& a, const Poly& b);
Poly mod(const Poly& a, const Poly& b);
Poly mulMod(const Poly& a, const Poly& b, const Poly& f);
Poly gcd(Poly a, Poly b);
// a^-1 mod f, or nullopt when gcd(a, f) != 1.
std::optional<Poly> invMod(const Poly& a, const Poly& f);

// Rabin's test: x^(2^L) = x mod f and gcd(x^(2^(L/q)) - x, f) = 1 for each
// prime q | L.
bool isIrreducible(const Poly& f);
// Smallest f = x^L + g (g read as an integer) that is irreducible.
Poly firstIrreducible(std::size_t L);

}  // namespace dslpn::gf2x
