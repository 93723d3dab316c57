#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dslpn::params {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "3", "3/2", "1.25" -> exact rational.
Rational parseRational(std::string_view text);
std::string toString(const Rational& r);
double toDouble(const Rational& r);
BigInt ceilRational(const Rational& r);
double log2Big(const BigInt& x);

// Binary entropy in bits; x in (0,1).
double entropy(double x);
// Preimage of y in (0, 1/2], bisection to 1e-12; y in (0,1].
double entropyInv(double y);

struct BallSizes {
  BigInt atMost;   // |B<=(n,w)| = sum_{i<=w} C(n,i)
  BigInt exact;    // |B(n,w)| = C(n,w)
  BigInt regular;  // |B_reg(n,w)| = (n/w)^w; 1 when w = 0
};
// Throws DomainError when w > n or (w > 0 and w does not divide n).
BallSizes hammingBallSizes(std::uint64_t n, std::uint64_t w);
// |B<=(n,w)| for any w (w >= n gives 2^n).
BigInt ballAtMost(std::uint64_t n, std::uint64_t w);

// delta_min(k,D) = 1 - (k/2 - 1)/(Dk - 1).
Rational minDelta(unsigned k, const Rational& d);
// ceil(n^(1 + (Dk-1)(1-delta))), exactly.
BigInt minM(std::uint64_t n, unsigned k, const Rational& d, const Rational& delta);

struct CompressionRegime {
  unsigned k = 0;
  Rational D;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t t = 0;

  // delta implied by t = n^delta.
  double delta() const;
};

enum class CompressionFailure { kNone, kSampleCap, kDegenerate, kBallInequality };
std::string_view toString(CompressionFailure f);

struct CompressionCheck {
  bool pass = false;
  CompressionFailure reason = CompressionFailure::kNone;
  unsigned s = 0;            // log2(m/t) when m/t is a power of two
  double lhsBits = 0;        // log2 |B_reg(m,t)| = t*s
  double middleBits = 0;     // D*(kt*log2(en/kt) + 1)
  double ballBits = 0;       // D*log2 |B<=(n,kt)|, exact count
  double margin = 0;         // lhsBits - ballBits
  bool middleHolds = false;  // lhsBits > middleBits
  bool deltaAboveMin = false;
  bool meetsMinM = false;
};

// Pass means t < m, m/t a power of two, m^2 < n^k and
// |B_reg(m,t)| > |B<=(n,kt)|^D with the ball counted exactly. The asymptotic
// conditions (delta > delta_min, m >= m_min) and the closed-form middle bound
// are reported as flags.
CompressionCheck checkCompression(const CompressionRegime& r);

// Asymptotic: also require delta > delta_min and m >= m_min, as the
// constructions state. Exact: only what checkCompression calls a pass, which
// is what the counting arguments use; needed at enumeration sizes, where the
// asymptotic conditions cannot hold. Fixed: a hand-picked shape with no
// regime condition asserted (exhaustive collision tests).
enum class RegimeMode { kAsymptotic, kExact, kFixed };
std::string_view toString(RegimeMode mode);

struct RegimeSearch {
  unsigned k = 0;
  Rational D;
  std::uint64_t n = 0;
  RegimeMode mode = RegimeMode::kAsymptotic;
  std::uint64_t minT = 1;  // t >= minT
  std::uint64_t maxL = UINT64_MAX;
  std::uint64_t maxM = std::uint64_t{1} << 40;
  // Upper bound on C(m,2)/C(n,k), the expected number of equal column pairs
  // of a uniform M. Keeps rejection sampling of a dual-distance >= 3 matrix
  // practical at small n.
  double maxDupPairs = std::numeric_limits<double>::infinity();
};

// Smallest t (then smallest s) meeting the mode's conditions, or nullopt.
std::optional<CompressionRegime> findRegime(const RegimeSearch& search);

struct LtdfOptions {
  std::optional<Rational> D;  // default Gamma + 1
  RegimeMode mode = RegimeMode::kAsymptotic;
  std::uint64_t maxL = UINT64_MAX;
  std::uint64_t maxM = std::uint64_t{1} << 40;
  double maxDupPairs = std::numeric_limits<double>::infinity();
};

struct LtdfParams {
  CompressionRegime regime;
  RegimeMode mode = RegimeMode::kAsymptotic;
  unsigned s = 0;       // log2(m/t)
  std::uint64_t L = 0;  // t*s: input and branch length
  Rational Gamma;
  Rational Dprime;
  Rational rhoC;
  Rational deltaC;
  double gamma = 0;
  double alpha = 0;
  std::uint64_t ell = 0;
  double eps = 0;
  CompressionCheck compression;
};

inline constexpr double kAlphaStep = 0.5;
inline constexpr double kAlphaMax = 64.0;

LtdfParams deriveLtdf(unsigned k, const Rational& gamma, const Rational& deltaC, const Rational& rhoC, std::uint64_t n,
                      const LtdfOptions& options = {});
// Names of violated invariants; empty when all hold.
std::vector<std::string> checkLtdf(const LtdfParams& p);

struct CrhfParams {
  CompressionRegime regime;
  RegimeMode mode = RegimeMode::kAsymptotic;
  unsigned s = 0;
  std::uint64_t ttilde = 0;  // t*s: input length
  Rational rho;              // 1/2 - 1/D
  std::uint64_t outLen = 0;  // ceil((1-rho)*ttilde)
  double eps = 0;            // log2(n)/(8t)
  unsigned lambda = 0;
  CompressionCheck compression;
};

struct CrhfOptions {
  RegimeMode mode = RegimeMode::kAsymptotic;
  std::uint64_t maxN = std::uint64_t{1} << 16;
  std::uint64_t maxM = std::uint64_t{1} << 40;
};

CrhfParams deriveCrhf(unsigned k, const Rational& d, unsigned lambda, const CrhfOptions& options = {});
// Fixed shape, no regime search; used for exhaustive test sizes.
CrhfParams crhfParamsAt(std::uint64_t n, unsigned k, std::uint64_t t, unsigned s, const Rational& d, unsigned lambda);
std::vector<std::string> checkCrhf(const CrhfParams& p);

// Named LTDF presets. Only the inputs of the derivation are listed here; every
// size is computed by findRegime/deriveLtdf.
struct LtdfPreset {
  std::string name;
  unsigned k = 0;
  Rational Gamma;
  Rational D;
  std::uint64_t n = 0;
  RegimeMode mode = RegimeMode::kAsymptotic;
  std::uint64_t maxL = UINT64_MAX;
  std::uint64_t maxM = std::uint64_t{1} << 40;
  double maxDupPairs = std::numeric_limits<double>::infinity();
  std::size_t goodD = 3;  // dual-distance bound for the sparse matrix
  std::size_t outerLen = 0;  // outer RS length of the code; 0 picks the default shape

  LtdfOptions options() const { return {D, mode, maxL, maxM, maxDupPairs}; }
};
const LtdfPreset& ltdfPreset(std::string_view name);
std::vector<std::string> ltdfPresetNames();

}  // namespace dslpn::params
