#include "dslpn/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <limits>

#include "dslpn/errors.hpp"

namespace dslpn::io {

namespace {

void putU16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void putU32(Bytes& out, std::uint64_t v) {
  if (v > std::numeric_limits<std::uint32_t>::max()) throw FormatError("dimension does not fit in u32");
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void putHeader(Bytes& out, TypeTag tag) {
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  putU16(out, kFormatVersion);
  out.push_back(static_cast<std::uint8_t>(tag));
}

void putBits(Bytes& out, const BitVec& v) {
  const std::size_t bytes = (v.size() + 7) / 8;
  auto words = v.words();
  for (std::size_t b = 0; b < bytes; ++b) {
    out.push_back(static_cast<std::uint8_t>(words[b / 8] >> (8 * (b % 8))));
  }
}

class Reader {
 public:
  Reader(std::span<const std::uint8_t> data, std::size_t& offset) : data_(data), offset_(offset) {}

  void need(std::size_t n) const {
    if (offset_ + n > data_.size()) throw FormatError("serialized data is truncated");
  }
  std::uint8_t u8() {
    need(1);
    return data_[offset_++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(data_[offset_] | (data_[offset_ + 1] << 8));
    offset_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[offset_ + i]) << (8 * i);
    offset_ += 4;
    return v;
  }
  BitVec bits(std::size_t len) {
    const std::size_t bytes = (len + 7) / 8;
    need(bytes);
    std::vector<BitVec::Word> words(BitVec::wordsFor(len), 0);
    for (std::size_t b = 0; b < bytes; ++b) {
      words[b / 8] |= static_cast<BitVec::Word>(data_[offset_ + b]) << (8 * (b % 8));
    }
    offset_ += bytes;
    BitVec v = BitVec::fromWords(len, std::move(words));
    return v;
  }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t& offset_;
};

}  // namespace

void append(Bytes& out, const BitVec& v) {
  putHeader(out, TypeTag::kBitVec);
  putU32(out, v.size());
  putBits(out, v);
}

void append(Bytes& out, const BitMatrix& m) {
  putHeader(out, TypeTag::kBitMatrix);
  putU32(out, m.rows());
  putU32(out, m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) putBits(out, m.row(i));
}

void append(Bytes& out, const SparseMatrix& m) {
  putHeader(out, TypeTag::kSparseMatrix);
  putU32(out, m.rows());
  putU32(out, m.cols());
  if (m.k() > std::numeric_limits<std::uint16_t>::max()) throw FormatError("column weight does not fit in u16");
  putU16(out, static_cast<std::uint16_t>(m.k()));
  for (const auto& col : m.columns()) {
    for (auto idx : col) putU32(out, idx);
  }
}

void append(Bytes& out, const U32List& values) {
  putHeader(out, TypeTag::kU32List);
  putU32(out, values.size());
  for (auto v : values) putU32(out, v);
}

Object decodeNext(std::span<const std::uint8_t> data, std::size_t& offset) {
  Reader r(data, offset);
  r.need(4);
  if (!std::equal(std::begin(kMagic), std::end(kMagic), data.begin() + static_cast<std::ptrdiff_t>(offset))) {
    throw FormatError("bad magic: expected DSL1");
  }
  offset += 4;
  const std::uint16_t version = r.u16();
  if (version != kFormatVersion) throw FormatError("unsupported format version " + std::to_string(version));
  const std::uint8_t tag = r.u8();
  switch (static_cast<TypeTag>(tag)) {
    case TypeTag::kBitVec: {
      const std::uint32_t len = r.u32();
      return r.bits(len);
    }
    case TypeTag::kBitMatrix: {
      const std::uint32_t rows = r.u32();
      const std::uint32_t cols = r.u32();
      BitMatrix m(rows, cols);
      for (std::uint32_t i = 0; i < rows; ++i) m.row(i) = r.bits(cols);
      return m;
    }
    case TypeTag::kSparseMatrix: {
      const std::uint32_t rows = r.u32();
      const std::uint32_t cols = r.u32();
      const std::uint16_t k = r.u16();
      r.need(static_cast<std::size_t>(cols) * k * 4);
      std::vector<std::vector<SparseMatrix::Index>> columns(cols);
      for (auto& col : columns) {
        col.resize(k);
        for (auto& idx : col) idx = r.u32();
      }
      try {
        return SparseMatrix(rows, k, std::move(columns));
      } catch (const DomainError& e) {
        throw FormatError(std::string("invalid sparse matrix payload: ") + e.what());
      }
    }
    case TypeTag::kU32List: {
      const std::uint32_t count = r.u32();
      r.need(static_cast<std::size_t>(count) * 4);
      U32List values(count);
      for (auto& v : values) v = r.u32();
      return values;
    }
  }
  throw FormatError("unknown type tag " + std::to_string(tag));
}

Bytes readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void writeFile(const std::string& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("write to '" + path + "' failed");
}

std::string toHex(std::span<const std::uint8_t> data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(data.size() * 2);
  for (auto b : data) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 15]);
  }
  return s;
}

}  // namespace dslpn::io
