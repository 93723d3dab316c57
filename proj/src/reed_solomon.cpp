#include "dslpn/reed_solomon.hpp"

#include <string>

#include "dslpn/errors.hpp"

namespace dslpn {

ReedSolomon::ReedSolomon(unsigned m, std::size_t n, std::size_t k) : field_(m), n_(n), k_(k) {
  require(k >= 1 && k < n, "RS: need 1 <= K < N");
  require(n <= field_.order(), "RS: N=" + std::to_string(n) + " exceeds 2^m - 1 for m=" + std::to_string(m));
  gen_ = {1};
  for (std::size_t i = 1; i <= n - k; ++i) {
    // gen *= (x + alpha^i)
    const Elem root = field_.alphaPow(static_cast<std::int64_t>(i));
    std::vector<Elem> next(gen_.size() + 1, 0);
    for (std::size_t j = 0; j < gen_.size(); ++j) {
      next[j] ^= field_.mul(gen_[j], root);
      next[j + 1] ^= gen_[j];
    }
    gen_ = std::move(next);
  }
}

ReedSolomon::Elem ReedSolomon::evalAt(std::span<const Elem> poly, Elem x) const {
  Elem acc = 0;
  for (std::size_t i = poly.size(); i-- > 0;) acc = field_.mul(acc, x) ^ poly[i];
  return acc;
}

std::vector<ReedSolomon::Elem> ReedSolomon::encode(std::span<const Elem> message) const {
  requireDims(message.size() == k_, "RS encode: message has " + std::to_string(message.size()) + " symbols, expected " +
                                        std::to_string(k_));
  const std::size_t r = n_ - k_;
  std::vector<Elem> word(n_, 0);
  for (std::size_t i = 0; i < k_; ++i) {
    require(message[i] <= field_.order(), "RS encode: symbol out of range");
    word[r + i] = message[i];
  }
  // Remainder of x^r * m(x) modulo gen, by long division on a copy.
  std::vector<Elem> rem(word);
  for (std::size_t i = n_; i-- > r;) {
    const Elem coef = rem[i];
    if (coef == 0) continue;
    for (std::size_t j = 0; j <= r; ++j) rem[i - r + j] ^= field_.mul(coef, gen_[j]);
  }
  for (std::size_t i = 0; i < r; ++i) word[i] = rem[i];
  return word;
}

std::optional<std::vector<ReedSolomon::Elem>> ReedSolomon::decode(std::span<const Elem> received) const {
  requireDims(received.size() == n_, "RS decode: word has " + std::to_string(received.size()) + " symbols, expected " +
                                         std::to_string(n_));
  const std::size_t r = n_ - k_;
  std::vector<Elem> word(received.begin(), received.end());
  for (Elem s : word)
    if (s > field_.order()) return std::nullopt;

  std::vector<Elem> syn(r);
  bool clean = true;
  for (std::size_t j = 0; j < r; ++j) {
    syn[j] = evalAt(word, field_.alphaPow(static_cast<std::int64_t>(j + 1)));
    clean &= syn[j] == 0;
  }
  if (!clean) {
    // Berlekamp-Massey for the error locator.
    std::vector<Elem> lambda = {1}, prev = {1};
    std::size_t len = 0, shift = 1;
    Elem prevDisc = 1;
    for (std::size_t i = 0; i < r; ++i) {
      Elem disc = syn[i];
      for (std::size_t j = 1; j <= len && j < lambda.size(); ++j) disc ^= field_.mul(lambda[j], syn[i - j]);
      if (disc == 0) {
        ++shift;
        continue;
      }
      const Elem scale = field_.div(disc, prevDisc);
      std::vector<Elem> next = lambda;
      if (next.size() < prev.size() + shift) next.resize(prev.size() + shift, 0);
      for (std::size_t j = 0; j < prev.size(); ++j) next[j + shift] ^= field_.mul(scale, prev[j]);
      if (2 * len <= i) {
        prev = lambda;
        len = i + 1 - len;
        prevDisc = disc;
        shift = 1;
      } else {
        ++shift;
      }
      lambda = std::move(next);
    }
    while (lambda.size() > 1 && lambda.back() == 0) lambda.pop_back();
    const std::size_t errors = lambda.size() - 1;
    if (errors == 0 || errors > maxErrors()) return std::nullopt;

    // Omega = S * Lambda mod x^r.
    std::vector<Elem> omega(r, 0);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < lambda.size() && j <= i; ++j) omega[i] ^= field_.mul(syn[i - j], lambda[j]);
    // Formal derivative: odd coefficients survive in characteristic 2.
    std::vector<Elem> deriv(lambda.size() > 1 ? lambda.size() - 1 : 1, 0);
    for (std::size_t j = 1; j < lambda.size(); j += 2) deriv[j - 1] = lambda[j];

    std::size_t found = 0;
    for (std::size_t pos = 0; pos < n_; ++pos) {
      const Elem xinv = field_.alphaPow(-static_cast<std::int64_t>(pos));
      if (evalAt(lambda, xinv) != 0) continue;
      const Elem den = evalAt(deriv, xinv);
      if (den == 0) return std::nullopt;
      word[pos] ^= field_.div(evalAt(omega, xinv), den);
      ++found;
    }
    if (found != errors) return std::nullopt;
    for (std::size_t j = 0; j < r; ++j)
      if (evalAt(word, field_.alphaPow(static_cast<std::int64_t>(j + 1))) != 0) return std::nullopt;
  }
  return std::vector<Elem>(word.begin() + static_cast<std::ptrdiff_t>(r), word.end());
}

}  // namespace dslpn
