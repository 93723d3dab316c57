#include "dslpn/rng.hpp"

#include <sodium.h>

#include <algorithm>
#include <cctype>
#include <cmath>

#include "dslpn/errors.hpp"

namespace dslpn {

namespace {

void ensureSodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw Error("libsodium initialisation failed");
}

std::uint64_t loadLe64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void storeLe64(std::uint8_t* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

int hexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

Seed Seed::fromHex(std::string_view hex) {
  if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) hex.remove_prefix(2);
  require(!hex.empty(), "seed: empty hex string");
  require(hex.size() <= 64, "seed: more than 64 hex digits");
  Seed s;
  // Digit i from the right is nibble i of the big-endian integer.
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const int v = hexValue(hex[hex.size() - 1 - i]);
    require(v >= 0, "seed: invalid hex digit '" + std::string(1, hex[hex.size() - 1 - i]) + "'");
    const std::size_t byte = 31 - i / 2;
    s.bytes[byte] |= static_cast<std::uint8_t>(i % 2 == 0 ? v : v << 4);
  }
  return s;
}

std::string Seed::toHex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

Rng::Rng(const Seed& seed, std::uint64_t stream) : seed_(seed), stream_(stream) { ensureSodium(); }

Rng Rng::child(std::uint64_t id) const {
  std::uint8_t input[32 + 16];
  std::copy(seed_.bytes.begin(), seed_.bytes.end(), input);
  storeLe64(input + 32, stream_);
  storeLe64(input + 40, id);
  Seed derived;
  crypto_generichash(derived.bytes.data(), derived.bytes.size(), input, sizeof input, nullptr, 0);
  return Rng(derived, 0);
}

void Rng::refill() {
  std::uint8_t nonce[crypto_stream_chacha20_NONCEBYTES];
  storeLe64(nonce, stream_);
  std::uint8_t out[sizeof(buf_)] = {};
  crypto_stream_chacha20_xor_ic(out, out, sizeof out, nonce, block_, seed_.bytes.data());
  block_ += sizeof out / 64;
  for (std::size_t i = 0; i < buf_.size(); ++i) buf_[i] = loadLe64(out + 8 * i);
  pos_ = 0;
}

std::uint64_t Rng::nextU64() {
  if (pos_ == buf_.size()) refill();
  return buf_[pos_++];
}

bool Rng::nextBit() { return nextU64() & 1U; }

std::uint64_t Rng::uniformBelow(std::uint64_t bound) {
  require(bound > 0, "uniformBelow: bound must be positive");
  if ((bound & (bound - 1)) == 0) return nextU64() & (bound - 1);
  // Accept draws below the largest multiple of bound.
  const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = nextU64();
    if (r >= limit) return r % bound;
  }
}

std::uint64_t bernoulliThreshold(double p) {
  require(p >= 0.0 && p <= 1.0, "bernoulli: probability must lie in [0, 1]");
  if (p >= 1.0) return ~std::uint64_t{0};
  return static_cast<std::uint64_t>(std::ldexp(p, 64));
}

bool Rng::bernoulli(double p) {
  if (p >= 1.0) {
    require(p == 1.0, "bernoulli: probability must lie in [0, 1]");
    nextU64();
    return true;
  }
  return nextU64() < bernoulliThreshold(p);
}

double Rng::uniform01() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

}  // namespace dslpn
