#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dslpn/gf2m.hpp"

namespace dslpn {

// Systematic narrow-sense RS code over GF(2^m): generator roots alpha^1 ..
// alpha^(N-K). Codeword coefficient i is position i; the message occupies
// positions N-K .. N-1. Decodes up to floor((N-K)/2) symbol errors.
class ReedSolomon {
 public:
  using Elem = GF2m::Elem;

  ReedSolomon(unsigned m, std::size_t n, std::size_t k);

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t maxErrors() const { return (n_ - k_) / 2; }
  const GF2m& field() const { return field_; }

  std::vector<Elem> encode(std::span<const Elem> message) const;
  // Corrected message, or nullopt when the word is found uncorrectable.
  std::optional<std::vector<Elem>> decode(std::span<const Elem> received) const;

 private:
  GF2m field_;
  std::size_t n_, k_;
  std::vector<Elem> gen_;  // monic generator, low degree first

  Elem evalAt(std::span<const Elem> poly, Elem x) const;
};

}  // namespace dslpn
