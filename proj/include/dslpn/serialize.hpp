#pragma once

// Binary container shared by every file the project writes.
//
//   magic "DSL1" | version u16 | type tag u8 | dims (u32 each) | payload
//
// All integers are little-endian. Tag 0 = BitVec (dims: len), 1 = BitMatrix
// (dims: rows, cols), 2 = SparseMatrix (dims: rows, cols; payload: k as u16
// then cols*k row indices as u32, column by column), 3 = U32List (dims: count;
// payload: count u32 values). BitVec and BitMatrix rows
// are bit-packed little-endian (bit i in byte i/8 at position i%8), each row
// padded to a byte boundary.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dslpn/bitmatrix.hpp"
#include "dslpn/errors.hpp"
#include "dslpn/bitvec.hpp"
#include "dslpn/sparse_matrix.hpp"

namespace dslpn::io {

inline constexpr char kMagic[4] = {'D', 'S', 'L', '1'};
inline constexpr std::uint16_t kFormatVersion = 1;

enum class TypeTag : std::uint8_t { kBitVec = 0, kBitMatrix = 1, kSparseMatrix = 2, kU32List = 3 };

using U32List = std::vector<std::uint32_t>;
using Object = std::variant<BitVec, BitMatrix, SparseMatrix, U32List>;
using Bytes = std::vector<std::uint8_t>;

void append(Bytes& out, const BitVec& v);
void append(Bytes& out, const BitMatrix& m);
void append(Bytes& out, const SparseMatrix& m);
void append(Bytes& out, const U32List& values);

template <typename T>
Bytes encode(const T& value) {
  Bytes out;
  append(out, value);
  return out;
}

// Reads one object starting at `offset` and advances it. Throws FormatError.
Object decodeNext(std::span<const std::uint8_t> data, std::size_t& offset);

template <typename T>
T decodeAs(std::span<const std::uint8_t> data, std::size_t& offset) {
  Object obj = decodeNext(data, offset);
  if (!std::holds_alternative<T>(obj)) throw FormatError("serialized object has an unexpected type tag");
  return std::get<T>(std::move(obj));
}

template <typename T>
T decode(std::span<const std::uint8_t> data) {
  std::size_t offset = 0;
  T value = decodeAs<T>(data, offset);
  if (offset != data.size()) throw FormatError("trailing bytes after serialized object");
  return value;
}

Bytes readFile(const std::string& path);
void writeFile(const std::string& path, std::span<const std::uint8_t> data);

std::string toHex(std::span<const std::uint8_t> data);

}  // namespace dslpn::io
