#pragma once

// Slow reference implementations used only by tests.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "dslpn/bitmatrix.hpp"
#include "dslpn/bitvec.hpp"

namespace oracle {

// Calls fn on every w-subset of [0, m) in lexicographic order; stops when fn
// returns true.
inline bool forEachSubset(std::size_t m, std::size_t w, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(w);
  for (std::size_t i = 0; i < w; ++i) idx[i] = i;
  if (w > m) return false;
  for (;;) {
    if (fn(idx)) return true;
    std::size_t i = w;
    while (i > 0 && idx[i - 1] == m - w + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < w; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Minimum weight of a nonzero kernel vector, by plain subset enumeration.
inline std::optional<std::size_t> minKernelWeight(const dslpn::BitMatrix& a, std::size_t wMax) {
  std::vector<dslpn::BitVec> cols;
  for (std::size_t j = 0; j < a.cols(); ++j) cols.push_back(a.column(j));
  for (std::size_t w = 1; w <= wMax; ++w) {
    bool hit = forEachSubset(a.cols(), w, [&](const std::vector<std::size_t>& s) {
      dslpn::BitVec acc(a.rows());
      for (auto j : s) acc ^= cols[j];
      return acc.isZero();
    });
    if (hit) return w;
  }
  return std::nullopt;
}

inline double binomial(std::size_t n, std::size_t k) {
  double r = 1;
  for (std::size_t i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return r;
}

}  // namespace oracle
