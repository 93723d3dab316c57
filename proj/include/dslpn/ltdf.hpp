#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>

#include "dslpn/bitmatrix.hpp"
#include "dslpn/bitvec.hpp"
#include "dslpn/ecc.hpp"
#include "dslpn/gadget.hpp"
#include "dslpn/gf2x.hpp"
#include "dslpn/params.hpp"
#include "dslpn/rng.hpp"
#include "dslpn/serialize.hpp"
#include "dslpn/sparse_matrix.hpp"

namespace dslpn {

// Branches are elements of GF(2^L) = F_2[x]/(modulus); H_tau is the matrix
// of multiplication by tau. The modulus is the first irreducible polynomial
// of degree L (see gf2x::firstIrreducible), computed once per L.
class FrdFamily {
 public:
  explicit FrdFamily(std::size_t L);

  std::size_t L() const { return L_; }
  // Length L + 1, bit i = coefficient of x^i.
  BitVec modulus() const { return gf2x::toBitVec(modulus_, L_ + 1); }

  BitVec mul(const BitVec& a, const BitVec& b) const;
  // nullopt for a = 0.
  std::optional<BitVec> inv(const BitVec& a) const;

 private:
  std::size_t L_;
  gf2x::Poly modulus_;
};

// Column j = tau * x^j mod modulus.
BitMatrix frdMatrix(const FrdFamily& fam, const BitVec& tau);
inline BitVec frdMul(const FrdFamily& fam, const BitVec& tau, const BitVec& x) { return fam.mul(tau, x); }

// Parameters together with the code they were derived for (dim L, length ell).
struct LtdfSetup {
  params::LtdfParams params;
  std::shared_ptr<const BlockCode> code;
};

// Builds the concatenated code for L = t*s (outer length outerLen, 0 for the
// default shape) and derives the rest with rhoC = L/blockLen and
// deltaC = tErr/blockLen.
LtdfSetup ltdfSetup(unsigned k, const params::Rational& gamma, std::uint64_t n, const params::LtdfOptions& options,
                    std::size_t outerLen = 0);
LtdfSetup ltdfSetup(const params::LtdfPreset& preset);

// Evaluation key. A and B are row-major as in the construction; the column
// forms are what evaluation uses (y is a XOR of t columns).
class AboPublicKey {
 public:
  AboPublicKey() = default;
  AboPublicKey(LtdfSetup setup, BitMatrix A, BitMatrix B);

  const params::LtdfParams& params() const { return setup_.params; }
  const BlockCode& code() const { return *setup_.code; }
  const LtdfSetup& setup() const { return setup_; }
  const FrdFamily& frd() const { return *frd_; }
  GadgetParams gadget() const;

  const BitMatrix& A() const { return A_; }  // n/2 x m
  const BitMatrix& B() const { return B_; }  // ell x m
  const BitMatrix& Acols() const { return Acols_; }
  const BitMatrix& Bcols() const { return Bcols_; }
  std::size_t outLen() const { return A_.rows() + B_.rows(); }

 private:
  LtdfSetup setup_;
  std::shared_ptr<const FrdFamily> frd_;
  BitMatrix A_, B_, Acols_, Bcols_;
};

struct AboTrapdoor {
  BitMatrix S;  // ell x n/2
  BitVec tauStar;
};

struct AboDebug {
  BitMatrix T;  // n/2 x n
  SparseMatrix M;
  BitMatrix E;  // ell x m
};

struct AboKeyPair {
  AboPublicKey fk;
  AboTrapdoor td;
  double eps = 0;  // noise rate actually used
  std::optional<AboDebug> debug;
};

struct AboGenOptions {
  bool debug = false;
  std::optional<double> eps;  // overrides params.eps (0 gives a noiseless key)
  std::size_t goodD = 3;
  std::size_t maxRejects = 1000;
};

AboKeyPair aboGen(const LtdfSetup& setup, const BitVec& tauStar, Rng& rng, const AboGenOptions& options = {});

// C^T * H_tau * G as an (ell x m) matrix, column j = encode(tau * G e_j).
BitMatrix branchMatrix(const AboPublicKey& fk, const BitVec& tau);
// Columns (m rows, n/2 + ell bits each) of the full map x~ -> y at branch tau.
BitMatrix branchColumns(const AboPublicKey& fk, const BitVec& tau);

// y = (A x~ || B x~ + encode(tau * G x~)) with x~ = spfy(x).
BitVec aboEval(const AboPublicKey& fk, const BitVec& tau, const BitVec& x);
// Decodes y2 + S y1 and divides by tau* + tau. nullopt when decoding fails or
// the result does not evaluate back to y. Throws DomainError for tau = tau*.
std::optional<BitVec> aboInvert(const AboTrapdoor& td, const AboPublicKey& fk, const BitVec& tau, const BitVec& y);

struct NoiseReport {
  std::size_t samples = 0;
  std::size_t maxWeight = 0;
  double meanWeight = 0;
};
// weight(E spfy(x)) over uniform x.
NoiseReport noiseWeightCheck(const BitMatrix& E, const GadgetParams& p, std::size_t samples, Rng& rng);

struct LossinessReport {
  std::size_t domain = 0;
  std::size_t lossyImage = 0;
  std::size_t injectiveImage = 0;
  std::size_t distinctY1 = 0;              // at the lossy branch
  std::optional<std::size_t> maxNoise;     // max weight(E x~), needs E
  std::optional<params::BigInt> bound;     // distinctY1 * |B<=(ell, maxNoise)|
};

// Enumerates all 2^L inputs (L <= 24) at tau* and at tauInjective.
LossinessReport lossinessMeasure(const AboPublicKey& fk, const BitVec& tauStar, const BitVec& tauInjective,
                                 const BitMatrix* E = nullptr, std::size_t workers = 1);

// Public key file: U32List parameter header, the code, A, B. Trapdoor file:
// U32List {L, ell, n/2, debug}, S, tau*, then T, M, E when debug is set.
io::Bytes encodeAboPublicKey(const AboPublicKey& fk);
AboPublicKey decodeAboPublicKey(std::span<const std::uint8_t> data);
io::Bytes encodeAboTrapdoor(const AboTrapdoor& td, const std::optional<AboDebug>& debug);
std::pair<AboTrapdoor, std::optional<AboDebug>> decodeAboTrapdoor(std::span<const std::uint8_t> data,
                                                                  const AboPublicKey& fk);

}  // namespace dslpn
