#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dslpn/bitmatrix.hpp"
#include "dslpn/bitvec.hpp"
#include "dslpn/gadget.hpp"
#include "dslpn/params.hpp"
#include "dslpn/rng.hpp"
#include "dslpn/serialize.hpp"
#include "dslpn/sparse_matrix.hpp"

namespace dslpn {

struct CrhfKey {
  params::CrhfParams params;
  BitMatrix Aprime;  // outLen x m
  // Debug fields, kept only when requested.
  std::optional<BitMatrix> H;
  std::optional<SparseMatrix> M;
  std::optional<BitMatrix> Hprime;  // factored path: H = Hprime * T
  std::optional<BitMatrix> T;

  GadgetParams gadget() const { return GadgetParams::make(params.regime.m, params.regime.t); }
};

struct CrhfGenOptions {
  bool debug = false;
  // Sample H = H' * T with T uniform (n/2 x n) and H' uniform (outLen x n/2).
  bool factored = false;
  std::size_t goodD = 3;  // dual-distance bound for M
  std::size_t maxRejects = 1000;
  // When > 0, resample H until it has no nonzero kernel vector of weight
  // <= hDistance (checked exactly); throws RejectionExhausted otherwise.
  std::size_t hDistance = 0;
};

CrhfKey crhfGen(const params::CrhfParams& params, Rng& rng, const CrhfGenOptions& options = {});

// A' * spfy_{m,t}(x), x of length t*s.
BitVec crhfHash(const CrhfKey& key, const BitVec& x);

struct CollisionReport {
  BitVec xprime;  // spfy(x1) + spfy(x2)
  std::size_t weight = 0;
  bool weightWithin2t = false;
  bool kernelOfM = false;  // M x' = 0
  bool hOnly = false;      // M x' != 0 but H (M x') = 0
};

// Requires a debug key, x1 != x2 and equal hashes; throws DomainError otherwise.
CollisionReport collisionAnalyze(const CrhfKey& key, const BitVec& x1, const BitVec& x2);

struct CollisionSummary {
  std::size_t inputs = 0;
  std::size_t distinctOutputs = 0;
  std::size_t pairs = 0;
  std::size_t kernelOfM = 0;
  std::size_t hOnly = 0;
  std::size_t maxWeight = 0;
  std::optional<std::pair<BitVec, BitVec>> example;
};

// Hashes all 2^(t*s) inputs (t*s <= 24) and analyzes every colliding pair.
CollisionSummary exhaustiveCollisions(const CrhfKey& key);

// Key file: U32List {n, k, t, s, lambda, D num, D den, mode, debug}, A', then
// H and M when debug is set.
io::Bytes encodeCrhfKey(const CrhfKey& key);
CrhfKey decodeCrhfKey(std::span<const std::uint8_t> data);

}  // namespace dslpn
