#include "dslpn/bitvec.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

#include "dslpn/errors.hpp"

namespace dslpn {

namespace {

BitVec::Word tailMask(std::size_t len) {
  const std::size_t r = len % BitVec::kWordBits;
  return r == 0 ? ~BitVec::Word{0} : (BitVec::Word{1} << r) - 1;
}

int hexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitVec::BitVec(std::size_t len) : len_(len), words_(wordsFor(len), 0) {}

BitVec BitVec::fromString(std::string_view bits) {
  BitVec v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw FormatError("bit string may only contain '0' and '1'");
    }
  }
  return v;
}

BitVec BitVec::unit(std::size_t len, std::size_t i) {
  requireDims(i < len, "unit vector index out of range");
  BitVec v(len);
  v.set(i);
  return v;
}

BitVec BitVec::ones(std::size_t len) {
  BitVec v(len);
  std::fill(v.words_.begin(), v.words_.end(), ~Word{0});
  v.clearTail();
  return v;
}

BitVec BitVec::fromUint(std::size_t len, std::uint64_t value) {
  requireDims(len <= kWordBits, "fromUint supports at most 64 bits");
  BitVec v(len);
  if (len > 0) v.words_[0] = value;
  v.clearTail();
  return v;
}

BitVec BitVec::fromWords(std::size_t len, std::vector<Word> words) {
  requireDims(words.size() == wordsFor(len), "word count does not match length");
  BitVec v;
  v.len_ = len;
  v.words_ = std::move(words);
  v.clearTail();
  return v;
}

void BitVec::clearTail() {
  if (!words_.empty()) words_.back() &= tailMask(len_);
}

void BitVec::set(std::size_t i, bool v) {
  const Word bit = Word{1} << (i % kWordBits);
  if (v) {
    words_[i / kWordBits] |= bit;
  } else {
    words_[i / kWordBits] &= ~bit;
  }
}

void BitVec::reset() { std::fill(words_.begin(), words_.end(), 0); }

std::size_t BitVec::weight() const {
  std::size_t w = 0;
  for (Word x : words_) w += static_cast<std::size_t>(std::popcount(x));
  return w;
}

bool BitVec::isZero() const {
  return std::all_of(words_.begin(), words_.end(), [](Word x) { return x == 0; });
}

bool BitVec::dot(const BitVec& other) const {
  requireDims(len_ == other.len_, "dot: length mismatch");
  Word acc = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & other.words_[i];
  return std::popcount(acc) & 1;
}

std::size_t BitVec::firstSet() const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] != 0) return i * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[i]));
  }
  return len_;
}

std::vector<std::size_t> BitVec::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    Word x = words_[i];
    while (x != 0) {
      out.push_back(i * kWordBits + static_cast<std::size_t>(std::countr_zero(x)));
      x &= x - 1;
    }
  }
  return out;
}

std::uint64_t BitVec::toUint() const { return words_.empty() ? 0 : words_[0]; }

BitVec BitVec::slice(std::size_t begin, std::size_t len) const {
  requireDims(begin + len <= len_, "slice out of range");
  BitVec out(len);
  if (begin % kWordBits == 0) {
    std::copy_n(words_.begin() + static_cast<std::ptrdiff_t>(begin / kWordBits), out.words_.size(), out.words_.begin());
  } else {
    const std::size_t shift = begin % kWordBits;
    const std::size_t base = begin / kWordBits;
    for (std::size_t i = 0; i < out.words_.size(); ++i) {
      Word lo = words_[base + i] >> shift;
      Word hi = (base + i + 1 < words_.size()) ? words_[base + i + 1] << (kWordBits - shift) : 0;
      out.words_[i] = lo | hi;
    }
  }
  out.clearTail();
  return out;
}

void BitVec::assignRange(std::size_t begin, const BitVec& src) {
  requireDims(begin + src.len_ <= len_, "assignRange out of range");
  if (begin % kWordBits == 0) {
    const std::size_t base = begin / kWordBits;
    const std::size_t full = src.len_ / kWordBits;
    for (std::size_t i = 0; i < full; ++i) words_[base + i] = src.words_[i];
    for (std::size_t i = full * kWordBits; i < src.len_; ++i) set(begin + i, src.get(i));
    return;
  }
  for (std::size_t i = 0; i < src.len_; ++i) set(begin + i, src.get(i));
}

BitVec BitVec::concat(const BitVec& a, const BitVec& b) {
  BitVec out(a.len_ + b.len_);
  out.assignRange(0, a);
  out.assignRange(a.len_, b);
  return out;
}

BitVec& BitVec::operator^=(const BitVec& other) {
  requireDims(len_ == other.len_, "xor: length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

BitVec& BitVec::operator&=(const BitVec& other) {
  requireDims(len_ == other.len_, "and: length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

BitVec& BitVec::operator|=(const BitVec& other) {
  requireDims(len_ == other.len_, "or: length mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

bool operator<(const BitVec& a, const BitVec& b) {
  if (a.len_ != b.len_) return a.len_ < b.len_;
  return a.words_ < b.words_;
}

std::string BitVec::toString() const {
  std::string s(len_, '0');
  for (std::size_t i = 0; i < len_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

std::string BitVec::toHex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t nibbles = std::max<std::size_t>(1, (len_ + 3) / 4);
  std::string s(nibbles, '0');
  for (std::size_t d = 0; d < nibbles; ++d) {
    unsigned v = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t i = d * 4 + b;
      if (i < len_ && get(i)) v |= 1U << b;
    }
    s[nibbles - 1 - d] = kDigits[v];
  }
  return s;
}

BitVec BitVec::fromHex(std::string_view hex, std::size_t len) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  BitVec v(len);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const int value = hexValue(hex[hex.size() - 1 - d]);
    if (value < 0) throw FormatError("invalid hex digit in '" + std::string(hex) + "'");
    for (std::size_t b = 0; b < 4; ++b) {
      if ((value >> b) & 1) {
        const std::size_t i = d * 4 + b;
        if (i >= len) throw FormatError("hex value does not fit in " + std::to_string(len) + " bits");
        v.set(i);
      }
    }
  }
  return v;
}

bool BitVec::tailIsClear() const {
  if (words_.size() != wordsFor(len_)) return false;
  return words_.empty() || (words_.back() & ~tailMask(len_)) == 0;
}

std::size_t BitVecHash::operator()(const BitVec& v) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ v.size();
  for (BitVec::Word w : v.words()) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

}  // namespace dslpn
