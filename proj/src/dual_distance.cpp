#include "dslpn/dual_distance.hpp"

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dslpn/linalg.hpp"

namespace dslpn {

namespace {

// Pair tables beyond this many entries fall back to single lookups.
constexpr std::size_t kMaxPairTable = std::size_t{1} << 24;

bool isZeroKey(std::uint64_t k) { return k == 0; }
bool isZeroKey(const BitVec& k) { return k.isZero(); }

template <typename Key, typename Hash>
class Search {
 public:
  explicit Search(std::vector<Key> cols) : cols_(std::move(cols)), m_(cols_.size()) {}

  std::optional<std::vector<std::size_t>> weight(std::size_t w) {
    if (w == 1) {
      for (std::size_t j = 0; j < m_; ++j) {
        if (isZeroKey(cols_[j])) return std::vector<std::size_t>{j};
      }
      return std::nullopt;
    }
    if (w == 2) {
      std::unordered_map<Key, std::size_t, Hash> first;
      for (std::size_t j = 0; j < m_; ++j) {
        auto [it, fresh] = first.emplace(cols_[j], j);
        if (!fresh) return std::vector<std::size_t>{it->second, j};
      }
      return std::nullopt;
    }
    const bool pairs = w >= 4 && m_ * (m_ - 1) / 2 <= kMaxPairTable;
    if (pairs) {
      buildPairs();
    } else {
      buildSingles();
    }
    const std::size_t lead = pairs ? w - 2 : w - 1;
    chosen_.assign(lead, 0);
    found_.reset();
    Key acc = zeroLike();
    dfs(0, 0, lead, pairs, acc);
    return found_;
  }

 private:
  Key zeroLike() const {
    Key k = cols_[0];
    k ^= cols_[0];
    return k;
  }

  // For each column value, the largest index holding it.
  void buildSingles() {
    if (!singles_.empty()) return;
    for (std::size_t j = 0; j < m_; ++j) singles_[cols_[j]] = j;
  }

  // For each XOR of two columns a < b, the pair with the largest a.
  void buildPairs() {
    if (!pairs_.empty()) return;
    pairs_.reserve(m_ * (m_ - 1) / 2);
    for (std::size_t a = 0; a < m_; ++a) {
      for (std::size_t b = a + 1; b < m_; ++b) {
        Key k = cols_[a];
        k ^= cols_[b];
        pairs_[std::move(k)] = {a, b};
      }
    }
  }

  void dfs(std::size_t depth, std::size_t start, std::size_t lead, bool pairs, const Key& acc) {
    if (found_) return;
    if (depth == lead) {
      const std::size_t last = chosen_.back();
      if (pairs) {
        auto it = pairs_.find(acc);
        if (it != pairs_.end() && it->second.first > last) {
          std::vector<std::size_t> s = chosen_;
          s.push_back(it->second.first);
          s.push_back(it->second.second);
          found_ = std::move(s);
        }
      } else {
        auto it = singles_.find(acc);
        if (it != singles_.end() && it->second > last) {
          std::vector<std::size_t> s = chosen_;
          s.push_back(it->second);
          found_ = std::move(s);
        }
      }
      return;
    }
    const std::size_t tail = pairs ? 2 : 1;
    const std::size_t remaining = lead - depth - 1 + tail;
    for (std::size_t i = start; i + remaining < m_; ++i) {
      chosen_[depth] = i;
      Key next = acc;
      next ^= cols_[i];
      dfs(depth + 1, i + 1, lead, pairs, next);
      if (found_) return;
    }
  }

  std::vector<Key> cols_;
  std::size_t m_;
  std::unordered_map<Key, std::size_t, Hash> singles_;
  std::unordered_map<Key, std::pair<std::size_t, std::size_t>, Hash> pairs_;
  std::vector<std::size_t> chosen_;
  std::optional<std::vector<std::size_t>> found_;
};

template <typename Key, typename Hash>
DualDistance run(std::vector<Key> cols, std::size_t limit) {
  const std::size_t m = cols.size();
  DualDistance out;
  Search<Key, Hash> search(std::move(cols));
  for (std::size_t w = 1; w <= limit; ++w) {
    if (auto support = search.weight(w)) {
      out.d = w;
      out.witness = BitVec(m);
      for (std::size_t j : *support) out.witness.set(j);
      return out;
    }
  }
  return out;
}

}  // namespace

DualDistance dualDistance(const BitMatrix& m, std::size_t wMax) {
  const std::size_t r = rank(m);
  if (r == m.cols()) return {};
  const std::size_t limit = std::min(wMax, r + 1);
  const BitMatrix t = m.transpose();
  if (m.rows() <= 64) {
    std::vector<std::uint64_t> cols(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) cols[j] = t.row(j).toUint();
    return run<std::uint64_t, std::hash<std::uint64_t>>(std::move(cols), limit);
  }
  return run<BitVec, BitVecHash>(t.rowVectors(), limit);
}

DualDistance dualDistance(const SparseMatrix& m, std::size_t wMax) { return dualDistance(m.densify(), wMax); }

}  // namespace dslpn
