#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dslpn {

// Dense bit vector over GF(2).
//
// Bits are packed little-endian into 64-bit words: bit i lives in word i / 64
// at position i % 64. Bits at positions >= size() are always zero; every
// mutating operation restores that invariant.
class BitVec {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVec() = default;
  explicit BitVec(std::size_t len);

  // "0110..." with character i giving bit i.
  static BitVec fromString(std::string_view bits);
  static BitVec unit(std::size_t len, std::size_t i);
  static BitVec ones(std::size_t len);
  // Low `len` bits of `value`, bit i = (value >> i) & 1. Requires len <= 64.
  static BitVec fromUint(std::size_t len, std::uint64_t value);
  static BitVec fromWords(std::size_t len, std::vector<Word> words);

  static constexpr std::size_t wordsFor(std::size_t len) { return (len + kWordBits - 1) / kWordBits; }

  std::size_t size() const { return len_; }
  bool empty() const { return len_ == 0; }
  std::size_t wordCount() const { return words_.size(); }
  std::span<const Word> words() const { return words_; }
  // Raw word access for kernels. Callers must leave trailing bits clear
  // (or call clearTail()).
  std::span<Word> mutableWords() { return words_; }
  void clearTail();

  bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i, bool v = true);
  void flip(std::size_t i) { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }
  void reset();

  std::size_t weight() const;
  bool isZero() const;
  // Parity of the bitwise AND, i.e. the GF(2) inner product.
  bool dot(const BitVec& other) const;
  // Index of the lowest set bit, or size() when zero.
  std::size_t firstSet() const;
  std::vector<std::size_t> support() const;
  // Low 64 bits as an integer (bit i -> 2^i).
  std::uint64_t toUint() const;

  BitVec slice(std::size_t begin, std::size_t len) const;
  static BitVec concat(const BitVec& a, const BitVec& b);
  void assignRange(std::size_t begin, const BitVec& src);

  BitVec& operator^=(const BitVec& other);
  BitVec& operator&=(const BitVec& other);
  BitVec& operator|=(const BitVec& other);
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
  friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
  friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }
  friend bool operator==(const BitVec& a, const BitVec& b) = default;
  // Lexicographic on (size, words); gives a total order for sorting/dedup.
  friend bool operator<(const BitVec& a, const BitVec& b);

  std::string toString() const;
  // Hex of the integer sum bit_i * 2^i, most significant digit first.
  std::string toHex() const;
  static BitVec fromHex(std::string_view hex, std::size_t len);

  // Debug hook for the trailing-bit invariant.
  bool tailIsClear() const;

 private:
  std::size_t len_ = 0;
  std::vector<Word> words_;
};

struct BitVecHash {
  std::size_t operator()(const BitVec& v) const noexcept;
};

}  // namespace dslpn
