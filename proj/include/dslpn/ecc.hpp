#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dslpn/bitmatrix.hpp"
#include "dslpn/bitvec.hpp"
#include "dslpn/reed_solomon.hpp"
#include "dslpn/rng.hpp"
#include "dslpn/serialize.hpp"

namespace dslpn {

// Linear binary code with a bounded-distance decoder. decode returns the
// message whenever the word is within tErr of a codeword; beyond that it may
// return a wrong message or nullopt.
class BlockCode {
 public:
  virtual ~BlockCode() = default;

  virtual std::size_t dim() const = 0;
  virtual std::size_t blockLen() const = 0;
  virtual std::size_t tErr() const = 0;
  virtual std::string name() const = 0;
  double rate() const { return static_cast<double>(dim()) / static_cast<double>(blockLen()); }

  virtual BitVec encode(const BitVec& x) const = 0;
  virtual std::optional<BitVec> decode(const BitVec& y) const = 0;
};

// Each message bit repeated r times (bit i at positions i*r .. i*r+r-1).
class RepetitionCode final : public BlockCode {
 public:
  RepetitionCode(std::size_t dim, std::size_t r);

  std::size_t dim() const override { return dim_; }
  std::size_t blockLen() const override { return dim_ * r_; }
  std::size_t tErr() const override { return (r_ - 1) / 2; }
  std::string name() const override;
  std::size_t repeats() const { return r_; }

  BitVec encode(const BitVec& x) const override;
  std::optional<BitVec> decode(const BitVec& y) const override;

 private:
  std::size_t dim_, r_;
};

// Systematic [2b, b] binary code G = [I | P] with a coset-leader table, so
// decoding is maximum likelihood over the 2^b codewords. Words are integers,
// bit j = coordinate j; the message sits in bits 0..b-1.
class InnerCode {
 public:
  // Seeded hill climb over P from `restarts` random starts, maximizing the
  // minimum distance, then minimizing the number of minimum-weight words.
  // Deterministic for fixed b and restarts.
  static InnerCode search(unsigned b, std::size_t restarts = 8);
  // From a given parity part (b x b); the leader table is recomputed.
  static InnerCode fromParity(const BitMatrix& parity);

  unsigned b() const { return b_; }
  std::size_t length() const { return 2 * std::size_t{b_}; }
  std::size_t minDistance() const { return d_; }
  std::size_t radius() const { return (d_ - 1) / 2; }
  const BitMatrix& parity() const { return parity_; }
  BitMatrix generator() const;
  // Leader for each syndrome, as a (2^b x 2b) matrix.
  BitMatrix leaderTable() const;

  std::uint64_t encode(std::uint32_t msg) const;
  std::uint32_t decode(std::uint64_t word) const;
  std::uint32_t syndrome(std::uint64_t word) const;

 private:
  unsigned b_ = 0;
  BitMatrix parity_;
  std::vector<std::uint32_t> parityRows_;  // row i of P as an integer
  std::vector<std::uint64_t> leaders_;
  std::size_t d_ = 0;
};

// InnerCode::search(b), computed once per process.
const InnerCode& defaultInnerCode(unsigned b);

struct ConcatShape {
  std::size_t dim = 0;
  unsigned b = 0;          // outer symbol bits
  std::size_t outerN = 0;  // outer RS length
  std::size_t outerK = 0;  // ceil(dim / b)
};

// Default: smallest b >= 3 with N = floor(4*dim/b) <= 2^b - 1; rate >= 1/8.
ConcatShape defaultConcatShape(std::size_t dim);

// Outer RS over GF(2^b), inner [2b, b] code on each symbol. Message bit j is
// bit j % b of outer symbol j / b (remaining symbol bits are zero). tErr =
// (e_out + 1)(r_in + 1) - 1: fewer errors leave at most e_out inner blocks
// wrong.
class ConcatenatedCode final : public BlockCode {
 public:
  ConcatenatedCode(const ConcatShape& shape, InnerCode inner);

  std::size_t dim() const override { return shape_.dim; }
  std::size_t blockLen() const override { return shape_.outerN * inner_.length(); }
  std::size_t tErr() const override;
  std::string name() const override;

  const ConcatShape& shape() const { return shape_; }
  const ReedSolomon& outer() const { return outer_; }
  const InnerCode& inner() const { return inner_; }

  BitVec encode(const BitVec& x) const override;
  std::optional<BitVec> decode(const BitVec& y) const override;

 private:
  ConcatShape shape_;
  ReedSolomon outer_;
  InnerCode inner_;
};

// dim >= 8. outerN = 0 picks the default shape; otherwise only N is replaced
// and must satisfy K < N <= 2^b - 1.
std::shared_ptr<const ConcatenatedCode> buildConcatenated(std::size_t dim, std::size_t outerN = 0);
std::shared_ptr<const ConcatenatedCode> buildConcatenated(const ConcatShape& shape);

// Layout version of the code registry, echoed into every report.
inline constexpr std::uint32_t kCodeRegistryVersion = 1;

// Code registry: a U32List count, then per code a U32List descriptor
// (kind 1 = concatenated {dim, b, N, K, d_inner}, kind 2 = repetition
// {dim, r}) followed, for kind 1, by the inner parity part and its leader
// table as BitMatrix objects.
void appendCode(io::Bytes& out, const BlockCode& code);
std::shared_ptr<const BlockCode> readCode(std::span<const std::uint8_t> data, std::size_t& offset);
io::Bytes encodeRegistry(std::span<const std::shared_ptr<const BlockCode>> codes);
std::vector<std::shared_ptr<const BlockCode>> decodeRegistry(std::span<const std::uint8_t> data);

// Random error patterns of weight exactly tErr; returns the number of trials
// in which decode did not return the message.
std::size_t countDecodeFailures(const BlockCode& code, std::size_t trials, Rng& rng);

}  // namespace dslpn
