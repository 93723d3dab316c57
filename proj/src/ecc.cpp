#include "dslpn/ecc.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <unordered_set>

#include "dslpn/errors.hpp"
#include "dslpn/sampling.hpp"

namespace dslpn {

namespace {

constexpr std::uint32_t kKindConcat = 1;
constexpr std::uint32_t kKindRepetition = 2;

// Next integer with the same popcount (Gosper).
std::uint64_t nextCombination(std::uint64_t x) {
  const std::uint64_t c = x & (~x + 1);
  const std::uint64_t r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

}  // namespace

RepetitionCode::RepetitionCode(std::size_t dim, std::size_t r) : dim_(dim), r_(r) {
  require(dim >= 1 && r >= 1, "repetition code: need dim >= 1 and r >= 1");
}

std::string RepetitionCode::name() const { return "repetition(r=" + std::to_string(r_) + ")"; }

BitVec RepetitionCode::encode(const BitVec& x) const {
  requireDims(x.size() == dim_, "encode: message length " + std::to_string(x.size()) + ", expected " +
                                    std::to_string(dim_));
  BitVec y(blockLen());
  for (std::size_t i : x.support())
    for (std::size_t j = 0; j < r_; ++j) y.set(i * r_ + j);
  return y;
}

std::optional<BitVec> RepetitionCode::decode(const BitVec& y) const {
  requireDims(y.size() == blockLen(), "decode: word length " + std::to_string(y.size()) + ", expected " +
                                          std::to_string(blockLen()));
  BitVec x(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < r_; ++j) ones += y.get(i * r_ + j);
    if (2 * ones == r_) return std::nullopt;
    x.set(i, 2 * ones > r_);
  }
  return x;
}

InnerCode InnerCode::fromParity(const BitMatrix& parity) {
  require(parity.rows() == parity.cols() && parity.rows() >= 2 && parity.rows() <= 16,
          "inner code: parity part must be b x b with 2 <= b <= 16");
  InnerCode c;
  c.b_ = static_cast<unsigned>(parity.rows());
  c.parity_ = parity;
  for (std::size_t i = 0; i < c.b_; ++i) c.parityRows_.push_back(static_cast<std::uint32_t>(parity.row(i).toUint()));

  const std::uint32_t count = std::uint32_t{1} << c.b_;
  // Minimum distance by Gray-code walk over all messages.
  std::size_t best = c.length();
  std::uint32_t msg = 0, par = 0;
  for (std::uint32_t g = 1; g < count; ++g) {
    const unsigned bit = static_cast<unsigned>(std::countr_zero(g));
    msg ^= std::uint32_t{1} << bit;
    par ^= c.parityRows_[bit];
    best = std::min<std::size_t>(best, std::popcount(msg) + std::popcount(par));
  }
  c.d_ = best;

  // Coset leaders in order of weight, then numeric value.
  c.leaders_.assign(count, 0);
  std::vector<bool> seen(count, false);
  seen[0] = true;
  std::uint32_t filled = 1;
  const unsigned len = 2 * c.b_;
  for (unsigned w = 1; w <= len && filled < count; ++w) {
    const std::uint64_t last = ((std::uint64_t{1} << w) - 1) << (len - w);
    for (std::uint64_t e = (std::uint64_t{1} << w) - 1;; e = nextCombination(e)) {
      const std::uint32_t s = c.syndrome(e);
      if (!seen[s]) {
        seen[s] = true;
        c.leaders_[s] = e;
        ++filled;
      }
      if (e == last) break;
    }
  }
  return c;
}

namespace {

// (minimum distance, number of codewords of that weight) for G = [I | P].
std::pair<std::size_t, std::size_t> distanceProfile(const std::vector<std::uint32_t>& rows, unsigned b) {
  std::size_t d = 2 * std::size_t{b}, count = 0;
  std::uint32_t msg = 0, par = 0;
  for (std::uint32_t g = 1; g < (std::uint32_t{1} << b); ++g) {
    const unsigned bit = static_cast<unsigned>(std::countr_zero(g));
    msg ^= std::uint32_t{1} << bit;
    par ^= rows[bit];
    const std::size_t w = static_cast<std::size_t>(std::popcount(msg) + std::popcount(par));
    if (w < d) {
      d = w;
      count = 1;
    } else if (w == d) {
      ++count;
    }
  }
  return {d, count};
}

bool better(std::pair<std::size_t, std::size_t> a, std::pair<std::size_t, std::size_t> b) {
  return a.first > b.first || (a.first == b.first && a.second < b.second);
}

}  // namespace

InnerCode InnerCode::search(unsigned b, std::size_t restarts) {
  require(b >= 2 && b <= 16, "inner code: b must lie in [2, 16]");
  require(restarts >= 1, "inner code: need at least one restart");
  Rng rng(Seed::fromHex("c0de"), b);
  const std::uint32_t mask = (std::uint32_t{1} << b) - 1;
  // Each step costs 2^b; keep the whole search near 2^24 steps.
  const std::size_t steps = std::max<std::size_t>(64, (std::size_t{1} << 24) / (restarts << b));
  std::vector<std::uint32_t> bestRows;
  std::pair<std::size_t, std::size_t> bestScore{0, 0};
  for (std::size_t t = 0; t < restarts; ++t) {
    std::vector<std::uint32_t> rows(b);
    for (auto& r : rows) r = static_cast<std::uint32_t>(rng.nextU64()) & mask;
    auto score = distanceProfile(rows, b);
    // Hill climb on single-bit flips of P, accepting sideways moves.
    for (std::size_t step = 0; step < steps; ++step) {
      const auto i = static_cast<std::size_t>(rng.uniformBelow(b));
      const auto j = static_cast<unsigned>(rng.uniformBelow(b));
      rows[i] ^= std::uint32_t{1} << j;
      const auto next = distanceProfile(rows, b);
      if (better(score, next)) {
        rows[i] ^= std::uint32_t{1} << j;
      } else {
        score = next;
      }
    }
    if (bestRows.empty() || better(score, bestScore)) {
      bestRows = rows;
      bestScore = score;
    }
  }
  BitMatrix p(b, b);
  for (std::size_t i = 0; i < b; ++i) p.row(i) = BitVec::fromUint(b, bestRows[i]);
  return fromParity(p);
}

BitMatrix InnerCode::generator() const {
  BitMatrix g(b_, length());
  for (std::size_t i = 0; i < b_; ++i) {
    g.set(i, i, true);
    for (std::size_t j = 0; j < b_; ++j) g.set(i, b_ + j, parity_.get(i, j));
  }
  return g;
}

BitMatrix InnerCode::leaderTable() const {
  BitMatrix t(leaders_.size(), length());
  for (std::size_t s = 0; s < leaders_.size(); ++s) t.row(s) = BitVec::fromUint(length(), leaders_[s]);
  return t;
}

std::uint32_t InnerCode::syndrome(std::uint64_t word) const {
  const std::uint32_t mask = (std::uint32_t{1} << b_) - 1;
  std::uint32_t sys = static_cast<std::uint32_t>(word) & mask;
  std::uint32_t s = static_cast<std::uint32_t>(word >> b_) & mask;
  while (sys) {
    s ^= parityRows_[static_cast<unsigned>(std::countr_zero(sys))];
    sys &= sys - 1;
  }
  return s;
}

std::uint64_t InnerCode::encode(std::uint32_t msg) const {
  require(msg < (std::uint32_t{1} << b_), "inner code: message out of range");
  std::uint32_t par = 0;
  for (std::uint32_t m = msg; m; m &= m - 1) par ^= parityRows_[static_cast<unsigned>(std::countr_zero(m))];
  return std::uint64_t{msg} | (std::uint64_t{par} << b_);
}

std::uint32_t InnerCode::decode(std::uint64_t word) const {
  const std::uint64_t c = word ^ leaders_[syndrome(word)];
  return static_cast<std::uint32_t>(c) & ((std::uint32_t{1} << b_) - 1);
}

ConcatShape defaultConcatShape(std::size_t dim) {
  require(dim >= 8, "concatenated code: dim must be at least 8, got " + std::to_string(dim));
  for (unsigned b = 2; b <= 16; ++b) {
    const std::size_t n = 4 * dim / b;
    if (n <= (std::size_t{1} << b) - 1) return {dim, b, n, (dim + b - 1) / b};
  }
  throw DomainError("concatenated code: dim " + std::to_string(dim) + " is too large");
}

ConcatenatedCode::ConcatenatedCode(const ConcatShape& shape, InnerCode inner)
    : shape_(shape), outer_(shape.b, shape.outerN, shape.outerK), inner_(std::move(inner)) {
  require(inner_.b() == shape.b, "concatenated code: inner code has the wrong symbol size");
  require(shape.outerK * shape.b >= shape.dim && (shape.outerK - 1) * shape.b < shape.dim,
          "concatenated code: K must equal ceil(dim / b)");
}

std::size_t ConcatenatedCode::tErr() const { return (outer_.maxErrors() + 1) * (inner_.radius() + 1) - 1; }

std::string ConcatenatedCode::name() const {
  return "concat(RS[" + std::to_string(shape_.outerN) + "," + std::to_string(shape_.outerK) + "]/GF(2^" +
         std::to_string(shape_.b) + ") x [" + std::to_string(inner_.length()) + "," + std::to_string(shape_.b) + "," +
         std::to_string(inner_.minDistance()) + "])";
}

BitVec ConcatenatedCode::encode(const BitVec& x) const {
  requireDims(x.size() == shape_.dim, "encode: message length " + std::to_string(x.size()) + ", expected " +
                                          std::to_string(shape_.dim));
  std::vector<ReedSolomon::Elem> msg(shape_.outerK, 0);
  for (std::size_t j : x.support()) msg[j / shape_.b] |= ReedSolomon::Elem{1} << (j % shape_.b);
  const auto word = outer_.encode(msg);
  const std::size_t il = inner_.length();
  BitVec y(blockLen());
  for (std::size_t i = 0; i < word.size(); ++i) y.assignRange(i * il, BitVec::fromUint(il, inner_.encode(word[i])));
  return y;
}

std::optional<BitVec> ConcatenatedCode::decode(const BitVec& y) const {
  requireDims(y.size() == blockLen(), "decode: word length " + std::to_string(y.size()) + ", expected " +
                                          std::to_string(blockLen()));
  const std::size_t il = inner_.length();
  std::vector<ReedSolomon::Elem> word(shape_.outerN);
  for (std::size_t i = 0; i < shape_.outerN; ++i) word[i] = inner_.decode(y.slice(i * il, il).toUint());
  auto msg = outer_.decode(word);
  if (!msg) return std::nullopt;
  BitVec x(shape_.dim);
  for (std::size_t s = 0; s < msg->size(); ++s)
    for (unsigned bit = 0; bit < shape_.b; ++bit) {
      if (!(((*msg)[s] >> bit) & 1U)) continue;
      const std::size_t j = s * shape_.b + bit;
      if (j >= shape_.dim) return std::nullopt;  // padding must decode to zero
      x.set(j);
    }
  return x;
}

const InnerCode& defaultInnerCode(unsigned b) {
  static std::mutex mu;
  static std::map<unsigned, InnerCode> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(b);
  if (it == cache.end()) it = cache.emplace(b, InnerCode::search(b)).first;
  return it->second;
}

std::shared_ptr<const ConcatenatedCode> buildConcatenated(const ConcatShape& shape) {
  return std::make_shared<const ConcatenatedCode>(shape, defaultInnerCode(shape.b));
}

std::shared_ptr<const ConcatenatedCode> buildConcatenated(std::size_t dim, std::size_t outerN) {
  if (outerN == 0) return buildConcatenated(defaultConcatShape(dim));
  ConcatShape shape = defaultConcatShape(dim);
  require(shape.outerK < outerN && outerN <= (std::size_t{1} << shape.b) - 1,
          "concatenated code: outer length " + std::to_string(outerN) + " must lie in (" +
              std::to_string(shape.outerK) + ", " + std::to_string((std::size_t{1} << shape.b) - 1) + "] for dim " +
              std::to_string(dim));
  shape.outerN = outerN;
  return buildConcatenated(shape);
}

void appendCode(io::Bytes& out, const BlockCode& code) {
  if (const auto* c = dynamic_cast<const ConcatenatedCode*>(&code)) {
    const ConcatShape& s = c->shape();
    io::append(out, io::U32List{kKindConcat, static_cast<std::uint32_t>(s.dim), s.b,
                                static_cast<std::uint32_t>(s.outerN), static_cast<std::uint32_t>(s.outerK),
                                static_cast<std::uint32_t>(c->inner().minDistance())});
    io::append(out, c->inner().parity());
    io::append(out, c->inner().leaderTable());
    return;
  }
  if (const auto* r = dynamic_cast<const RepetitionCode*>(&code)) {
    io::append(out, io::U32List{kKindRepetition, static_cast<std::uint32_t>(r->dim()),
                                static_cast<std::uint32_t>(r->repeats())});
    return;
  }
  throw Error("code registry: unsupported code type " + code.name());
}

std::shared_ptr<const BlockCode> readCode(std::span<const std::uint8_t> data, std::size_t& offset) {
  const auto desc = io::decodeAs<io::U32List>(data, offset);
  if (desc.empty()) throw FormatError("code registry: empty descriptor");
  try {
    if (desc[0] == kKindRepetition && desc.size() == 3) return std::make_shared<const RepetitionCode>(desc[1], desc[2]);
    if (desc[0] == kKindConcat && desc.size() == 6) {
      auto parity = io::decodeAs<BitMatrix>(data, offset);
      auto leaders = io::decodeAs<BitMatrix>(data, offset);
      InnerCode inner = InnerCode::fromParity(parity);
      if (inner.b() != desc[2] || inner.minDistance() != desc[5] || !(inner.leaderTable() == leaders))
        throw FormatError("code registry: stored inner code tables are inconsistent");
      return std::make_shared<const ConcatenatedCode>(ConcatShape{desc[1], desc[2], desc[3], desc[4]},
                                                      std::move(inner));
    }
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("code registry: invalid entry: ") + e.what());
  }
  throw FormatError("code registry: unknown code kind " + std::to_string(desc[0]));
}

io::Bytes encodeRegistry(std::span<const std::shared_ptr<const BlockCode>> codes) {
  io::Bytes out;
  io::append(out, io::U32List{static_cast<std::uint32_t>(codes.size())});
  for (const auto& c : codes) appendCode(out, *c);
  return out;
}

std::vector<std::shared_ptr<const BlockCode>> decodeRegistry(std::span<const std::uint8_t> data) {
  std::size_t offset = 0;
  const auto count = io::decodeAs<io::U32List>(data, offset);
  if (count.size() != 1) throw FormatError("code registry: bad header");
  std::vector<std::shared_ptr<const BlockCode>> codes;
  for (std::uint32_t i = 0; i < count[0]; ++i) codes.push_back(readCode(data, offset));
  if (offset != data.size()) throw FormatError("code registry: trailing bytes");
  return codes;
}

std::size_t countDecodeFailures(const BlockCode& code, std::size_t trials, Rng& rng) {
  std::size_t failures = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    BitVec x = uniformVec(code.dim(), rng);
    BitVec y = code.encode(x);
    std::unordered_set<std::size_t> pos;
    while (pos.size() < code.tErr()) pos.insert(static_cast<std::size_t>(rng.uniformBelow(code.blockLen())));
    for (std::size_t p : pos) y.flip(p);
    auto got = code.decode(y);
    failures += !got || !(*got == x);
  }
  return failures;
}

}  // namespace dslpn
