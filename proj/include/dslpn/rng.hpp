#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace dslpn {

// 32-byte master seed.
struct Seed {
  std::array<std::uint8_t, 32> bytes{};

  // Hex integer, right-aligned big-endian into the 32 bytes ("DEADBEEF" fills
  // the last four). At most 64 hex digits; an optional 0x prefix is accepted.
  static Seed fromHex(std::string_view hex);
  std::string toHex() const;
  friend bool operator==(const Seed&, const Seed&) = default;
};

// ChaCha20 keystream (libsodium) keyed by the seed, with the 64-bit stream id
// as nonce. Identical (seed, stream) pairs give identical output everywhere.
// Not thread-safe; give each worker its own stream via child().
class Rng {
 public:
  Rng(const Seed& seed, std::uint64_t stream = 0);

  // Independent generator for sub-task `id`; its key is a hash of
  // (key, stream, id), so children of different parents never collide.
  Rng child(std::uint64_t id) const;

  std::uint64_t nextU64();
  bool nextBit();
  // Uniform in [0, bound); bound > 0. Rejection sampling, no modulo bias.
  std::uint64_t uniformBelow(std::uint64_t bound);
  // 1 with probability p. p is quantized to a multiple of 2^-64 (p = 1 exact).
  bool bernoulli(double p);
  // Uniform double in [0,1) with 53 random bits.
  double uniform01();

  const Seed& seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  Seed seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 64> buf_{};
  std::size_t pos_ = 64;
};

// Threshold used by Rng::bernoulli: a draw u is a one iff u < threshold(p).
std::uint64_t bernoulliThreshold(double p);

}  // namespace dslpn
