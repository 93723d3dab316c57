#include "dslpn/params.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>

#include "dslpn/errors.hpp"

namespace dslpn::params {

namespace mp = boost::multiprecision;

namespace {

BigInt powBig(const BigInt& base, const BigInt& exp) {
  require(exp >= 0 && exp < 1u << 20, "exponent out of range");
  return mp::pow(base, static_cast<unsigned>(exp));
}

BigInt powBig(std::uint64_t base, const BigInt& exp) { return powBig(BigInt(base), exp); }

bool isPowerOfTwo(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

std::uint64_t parseUint(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && ptr == s.data() + s.size() && !s.empty(),
          "cannot parse '" + std::string(whole) + "' as a rational number");
  return v;
}

// Rational D = a/b with D*k - 1 > 0: m >= n^{Dk}/t^{Dk-1}  <=>  m^b * t^{ak-b} >= n^{ak}.
bool meetsMinMExact(std::uint64_t n, unsigned k, const Rational& d, std::uint64_t t, std::uint64_t m) {
  const BigInt a = mp::numerator(d), b = mp::denominator(d);
  const BigInt ak = a * k;
  return powBig(m, b) * powBig(t, ak - b) >= powBig(n, ak);
}

// delta = log t / log n > p/q  <=>  t^q > n^p.
bool deltaAboveExact(std::uint64_t n, std::uint64_t t, const Rational& deltaMin) {
  return powBig(t, mp::denominator(deltaMin)) > powBig(n, mp::numerator(deltaMin));
}

bool belowSampleCap(std::uint64_t n, unsigned k, std::uint64_t m) {
  return BigInt(m) * m < mp::pow(BigInt(n), k);
}

double binomialDouble(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  return std::exp(std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(n - k) + 1));
}

// 2^{lhsBits} > ball^D exactly, D = a/b: 2^{lhs*b} > ball^a.
bool ballInequality(std::uint64_t lhs, const BigInt& ball, const Rational& d) {
  const BigInt a = mp::numerator(d), b = mp::denominator(d);
  // Whole cube (kt >= n): ball = 2^n.
  if (ball == (BigInt(1) << mp::msb(ball))) return BigInt(lhs) * b > BigInt(mp::msb(ball)) * a;
  return (BigInt(1) << static_cast<unsigned>(BigInt(lhs) * b)) > powBig(ball, a);
}

CompressionCheck check(const CompressionRegime& r, const BigInt& ball) {
  CompressionCheck c;
  if (r.t == 0 || r.m <= r.t || r.m % r.t != 0 || !isPowerOfTwo(r.m / r.t)) {
    c.reason = CompressionFailure::kDegenerate;
    return c;
  }
  c.s = static_cast<unsigned>(std::countr_zero(r.m / r.t));
  const double dd = toDouble(r.D);
  const double kt = double(r.k) * double(r.t);
  c.lhsBits = double(r.t) * c.s;
  c.middleBits = dd * (kt * std::log2(std::exp(1.0) * double(r.n) / kt) + 1);
  c.ballBits = dd * log2Big(ball);
  c.margin = c.lhsBits - c.ballBits;
  c.middleHolds = c.lhsBits > c.middleBits;
  if (r.k >= 3 && r.D > 1) {
    c.deltaAboveMin = deltaAboveExact(r.n, r.t, minDelta(r.k, r.D));
    c.meetsMinM = meetsMinMExact(r.n, r.k, r.D, r.t, r.m);
  }
  if (!belowSampleCap(r.n, r.k, r.m)) {
    c.reason = CompressionFailure::kSampleCap;
    return c;
  }
  if (!ballInequality(r.t * c.s, ball, r.D)) {
    c.reason = CompressionFailure::kBallInequality;
    return c;
  }
  c.pass = true;
  return c;
}

void requireRegimeInputs(unsigned k, const Rational& d, std::uint64_t n) {
  require(k >= 3, "k must be at least 3");
  require(d > 1, "compression factor D must exceed 1");
  require(n >= 4 && n % 2 == 0, "n must be even and at least 4");
}

}  // namespace

Rational parseRational(std::string_view text) {
  const std::string_view whole = text;
  require(!text.empty(), "empty rational number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = parseUint(text.substr(0, slash), whole);
    const auto den = parseUint(text.substr(slash + 1), whole);
    require(den != 0, "zero denominator in '" + std::string(whole) + "'");
    return Rational(BigInt(num), BigInt(den));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view intPart = text.substr(0, dot);
    const std::string_view frac = text.substr(dot + 1);
    require(frac.size() <= 18, "too many decimal places in '" + std::string(whole) + "'");
    const std::uint64_t ip = intPart.empty() ? 0 : parseUint(intPart, whole);
    const std::uint64_t fp = frac.empty() ? 0 : parseUint(frac, whole);
    return Rational(BigInt(ip)) + Rational(BigInt(fp), mp::pow(BigInt(10), static_cast<unsigned>(frac.size())));
  }
  return Rational(BigInt(parseUint(text, whole)));
}

std::string toString(const Rational& r) {
  if (mp::denominator(r) == 1) return mp::numerator(r).str();
  return mp::numerator(r).str() + "/" + mp::denominator(r).str();
}

double toDouble(const Rational& r) { return r.convert_to<double>(); }

BigInt ceilRational(const Rational& r) {
  const BigInt num = mp::numerator(r), den = mp::denominator(r);
  BigInt q = num / den;
  if (q * den < num) ++q;
  return q;
}

double log2Big(const BigInt& x) {
  require(x > 0, "log2 of a non-positive integer");
  const unsigned top = mp::msb(x);
  if (top < 53) return std::log2(x.convert_to<double>());
  const BigInt head = x >> (top - 52);
  return std::log2(head.convert_to<double>()) + double(top - 52);
}

double entropy(double x) {
  require(x > 0 && x < 1, "entropy: argument must lie in (0, 1)");
  return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

double entropyInv(double y) {
  require(y > 0 && y <= 1, "entropyInv: argument must lie in (0, 1]");
  if (y == 1) return 0.5;
  double lo = 0, hi = 0.5;
  while (hi - lo > 1e-13) {
    const double mid = (lo + hi) / 2;
    if (entropy(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

BigInt ballAtMost(std::uint64_t n, std::uint64_t w) {
  if (w >= n) return BigInt(1) << static_cast<unsigned>(n);
  BigInt term = 1, sum = 1;
  for (std::uint64_t i = 0; i < w; ++i) {
    term = term * (n - i) / (i + 1);
    sum += term;
  }
  return sum;
}

BallSizes hammingBallSizes(std::uint64_t n, std::uint64_t w) {
  require(w <= n, "hammingBallSizes: w must not exceed n");
  BallSizes b;
  b.atMost = ballAtMost(n, w);
  BigInt c = 1;
  for (std::uint64_t i = 0; i < w; ++i) c = c * (n - i) / (i + 1);
  b.exact = c;
  if (w == 0) {
    b.regular = 1;
  } else {
    require(n % w == 0, "hammingBallSizes: the regular ball needs w | n");
    b.regular = mp::pow(BigInt(n / w), static_cast<unsigned>(w));
  }
  return b;
}

Rational minDelta(unsigned k, const Rational& d) {
  require(k >= 3, "minDelta: k must be at least 3");
  require(d >= 1, "minDelta: D must be at least 1");
  return Rational(1) - (Rational(k, 2) - 1) / (d * k - 1);
}

BigInt minM(std::uint64_t n, unsigned k, const Rational& d, const Rational& delta) {
  require(k >= 3 && d > 1, "minM: need k >= 3 and D > 1");
  require(n >= 2, "minM: n must be at least 2");
  const Rational e = 1 + (d * k - 1) * (1 - delta);
  require(e >= 0, "minM: exponent must be non-negative");
  const BigInt p = mp::numerator(e), q = mp::denominator(e);
  const BigInt target = powBig(n, p);
  // Smallest m with m^q >= n^p.
  BigInt lo = 0, hi = BigInt(1) << (static_cast<unsigned>(p * (mp::msb(BigInt(n)) + 1) / q) + 1);
  while (lo + 1 < hi) {
    const BigInt mid = (lo + hi) / 2;
    if (powBig(mid, q) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double CompressionRegime::delta() const { return std::log(double(t)) / std::log(double(n)); }

std::string_view toString(CompressionFailure f) {
  switch (f) {
    case CompressionFailure::kNone:
      return "none";
    case CompressionFailure::kSampleCap:
      return "sample-cap";
    case CompressionFailure::kDegenerate:
      return "degenerate";
    case CompressionFailure::kBallInequality:
      return "ball-inequality";
  }
  return "?";
}

std::string_view toString(RegimeMode mode) {
  switch (mode) {
    case RegimeMode::kAsymptotic:
      return "asymptotic";
    case RegimeMode::kExact:
      return "exact";
    case RegimeMode::kFixed:
      return "fixed";
  }
  return "?";
}

CompressionCheck checkCompression(const CompressionRegime& r) {
  require(r.n >= 1 && r.k >= 1, "checkCompression: n and k must be positive");
  return check(r, ballAtMost(r.n, std::uint64_t{r.k} * r.t));
}

std::optional<CompressionRegime> findRegime(const RegimeSearch& q) {
  requireRegimeInputs(q.k, q.D, q.n);
  require(q.mode != RegimeMode::kFixed, "findRegime: fixed mode has no search");
  const Rational deltaMin = minDelta(q.k, q.D);
  const double columns = binomialDouble(q.n, q.k);
  for (std::uint64_t t = std::max<std::uint64_t>(q.minT, 1); t < q.n; ++t) {
    if (t > q.maxL) break;
    if (q.mode == RegimeMode::kAsymptotic && !deltaAboveExact(q.n, t, deltaMin)) continue;
    const BigInt ball = ballAtMost(q.n, std::uint64_t{q.k} * t);
    for (unsigned s = 1; s < 63; ++s) {
      if (t > (q.maxM >> s)) break;
      const std::uint64_t m = t << s;
      if (t * s > q.maxL) break;
      if (!belowSampleCap(q.n, q.k, m)) break;
      if (double(m) * double(m - 1) / 2 > q.maxDupPairs * columns) break;
      CompressionRegime r{q.k, q.D, q.n, m, t};
      if (q.mode == RegimeMode::kAsymptotic && !meetsMinMExact(q.n, q.k, q.D, t, m)) continue;
      if (check(r, ball).pass) return r;
    }
  }
  return std::nullopt;
}

LtdfParams deriveLtdf(unsigned k, const Rational& gammaFactor, const Rational& deltaC, const Rational& rhoC,
                      std::uint64_t n, const LtdfOptions& options) {
  require(gammaFactor > 1, "deriveLtdf: lossiness factor Gamma must exceed 1");
  require(rhoC > 0 && rhoC <= 1, "deriveLtdf: code rate must lie in (0, 1]");
  require(deltaC > 0 && deltaC < Rational(1, 2), "deriveLtdf: correctable fraction must lie in (0, 1/2)");
  const Rational d = options.D.value_or(gammaFactor + 1);
  require(d > gammaFactor, "deriveLtdf: compression factor D must exceed Gamma");
  requireRegimeInputs(k, d, n);
  require(options.mode != RegimeMode::kFixed, "deriveLtdf: fixed mode is not supported");

  RegimeSearch q;
  q.k = k;
  q.D = d;
  q.n = n;
  q.mode = options.mode;
  q.maxL = options.maxL;
  q.maxM = options.maxM;
  q.maxDupPairs = options.maxDupPairs;
  auto regime = findRegime(q);
  require(regime.has_value(), "deriveLtdf: no (t, m) in the compression regime for n=" + std::to_string(n) +
                                  ", k=" + std::to_string(k) + ", D=" + toString(d) + " within the search bounds");

  LtdfParams p;
  p.regime = *regime;
  p.mode = options.mode;
  p.compression = checkCompression(p.regime);
  p.s = p.compression.s;
  p.L = p.regime.t * p.s;
  p.Gamma = gammaFactor;
  p.Dprime = gammaFactor * d / (d - gammaFactor);
  p.rhoC = rhoC;
  p.deltaC = deltaC;
  const double target = toDouble(rhoC / p.Dprime);
  p.gamma = std::min(toDouble(deltaC), entropyInv(std::min(target, 1.0)));
  const double needed = toDouble(rhoC) / p.gamma;
  for (double a = kAlphaStep; a <= kAlphaMax; a += kAlphaStep) {
    if (a * a / (a + 1) > needed) {
      p.alpha = a;
      break;
    }
  }
  require(p.alpha > 0, "deriveLtdf: no alpha <= " + std::to_string(kAlphaMax) +
                           " satisfies alpha^2/(alpha+1) > rhoC/gamma = " + std::to_string(needed) +
                           "; the code's rate is too high for this Gamma and D");
  p.ell = static_cast<std::uint64_t>(ceilRational(Rational(BigInt(p.L)) / rhoC));
  p.eps = p.gamma / ((p.alpha + 1) * double(p.regime.t));

  const auto violations = checkLtdf(p);
  if (!violations.empty()) throw Error("deriveLtdf: invariant violated: " + violations.front());
  return p;
}

std::vector<std::string> checkLtdf(const LtdfParams& p) {
  std::vector<std::string> bad;
  auto expect = [&](bool ok, const char* name) {
    if (!ok) bad.emplace_back(name);
  };
  const CompressionRegime& r = p.regime;
  expect(r.D > p.Gamma, "D > Gamma");
  expect(p.Gamma > 1, "Gamma > 1");
  expect(p.Dprime > 0 && 1 / r.D + 1 / p.Dprime == 1 / p.Gamma, "1/D + 1/D' = 1/Gamma");
  expect(r.t > 0 && r.m % r.t == 0 && isPowerOfTwo(r.m / r.t) && (std::uint64_t{1} << p.s) == r.m / r.t,
         "s = log2(m/t) is a positive integer and t | m");
  expect(p.s >= 1, "s >= 1");
  expect(p.L == r.t * p.s, "L = t*s");
  expect(r.n % 2 == 0, "n even");
  const double target = toDouble(p.rhoC / p.Dprime);
  expect(p.gamma == std::min(toDouble(p.deltaC), entropyInv(std::min(target, 1.0))),
         "gamma = min(deltaC, Hinv(rhoC/D'))");
  expect(p.gamma > 0, "gamma > 0");
  expect(p.alpha * p.alpha / (p.alpha + 1) > toDouble(p.rhoC) / p.gamma, "alpha^2/(alpha+1) > rhoC/gamma");
  expect(Rational(BigInt(p.ell)) == Rational(ceilRational(Rational(BigInt(p.L)) / p.rhoC)), "ell = ceil(L/rhoC)");
  expect(p.eps == p.gamma / ((p.alpha + 1) * double(r.t)), "eps = gamma/((alpha+1)t)");
  expect(p.gamma * double(p.ell) <= toDouble(p.deltaC) * double(p.ell), "gamma*ell <= deltaC*ell");
  const CompressionCheck c = checkCompression(r);
  expect(c.pass, "compression regime passes");
  if (p.mode == RegimeMode::kAsymptotic) {
    expect(c.deltaAboveMin, "delta > delta_min");
    expect(c.meetsMinM, "m >= m_min");
  }
  return bad;
}

CrhfParams crhfParamsAt(std::uint64_t n, unsigned k, std::uint64_t t, unsigned s, const Rational& d, unsigned lambda) {
  require(d > 2, "CRHF needs compression factor D > 2");
  require(k >= 3, "k must be at least 3");
  require(n >= 4 && n % 2 == 0, "n must be even and at least 4");
  require(t >= 1 && s >= 1 && s < 40, "need t >= 1 and 1 <= s < 40");
  CrhfParams p;
  p.regime = {k, d, n, t << s, t};
  p.mode = RegimeMode::kFixed;
  p.s = s;
  p.ttilde = t * s;
  p.rho = Rational(1, 2) - 1 / d;
  p.outLen = static_cast<std::uint64_t>(ceilRational((1 - p.rho) * BigInt(p.ttilde)));
  p.eps = std::log2(double(n)) / (8.0 * double(t));
  p.lambda = lambda;
  p.compression = checkCompression(p.regime);
  return p;
}

CrhfParams deriveCrhf(unsigned k, const Rational& d, unsigned lambda, const CrhfOptions& options) {
  require(d > 2, "deriveCrhf: compression factor D must exceed 2");
  require(k >= 3, "deriveCrhf: k must be at least 3");
  require(lambda >= 1, "deriveCrhf: lambda must be at least 1");
  require(options.mode != RegimeMode::kFixed, "deriveCrhf: fixed mode has no search");
  const Rational rho = Rational(1, 2) - 1 / d;
  // Smallest t with rho*t > 2*lambda.
  const Rational ratio = Rational(2 * lambda) / rho;
  const std::uint64_t minT = static_cast<std::uint64_t>(mp::numerator(ratio) / mp::denominator(ratio)) + 1;
  for (std::uint64_t n = std::max<std::uint64_t>(4, (minT + 2) & ~std::uint64_t{1}); n <= options.maxN; n += 2) {
    RegimeSearch q;
    q.k = k;
    q.D = d;
    q.n = n;
    q.mode = options.mode;
    q.minT = minT;
    q.maxM = options.maxM;
    if (auto r = findRegime(q)) {
      CrhfParams p = crhfParamsAt(n, k, r->t, static_cast<unsigned>(std::countr_zero(r->m / r->t)), d, lambda);
      p.mode = options.mode;
      const auto violations = checkCrhf(p);
      if (!violations.empty()) throw Error("deriveCrhf: invariant violated: " + violations.front());
      return p;
    }
  }
  throw DomainError("deriveCrhf: no parameters with n <= " + std::to_string(options.maxN) + " for k=" +
                    std::to_string(k) + ", D=" + toString(d) + ", lambda=" + std::to_string(lambda));
}

std::vector<std::string> checkCrhf(const CrhfParams& p) {
  std::vector<std::string> bad;
  auto expect = [&](bool ok, const char* name) {
    if (!ok) bad.emplace_back(name);
  };
  const CompressionRegime& r = p.regime;
  expect(r.D > 2, "D > 2");
  expect(p.rho == Rational(1, 2) - 1 / r.D, "rho = 1/2 - 1/D");
  expect(r.t > 0 && r.m % r.t == 0 && (std::uint64_t{1} << p.s) == r.m / r.t, "s = log2(m/t) integer and t | m");
  expect(p.ttilde == r.t * p.s, "ttilde = t*s");
  expect(Rational(BigInt(p.outLen)) == Rational(ceilRational((1 - p.rho) * BigInt(p.ttilde))),
         "outLen = ceil((1-rho)*ttilde)");
  expect(p.rho * BigInt(p.ttilde) > 2 * p.lambda, "rho*ttilde > 2*lambda");
  expect(p.ttilde > p.outLen + 2 * std::uint64_t{p.lambda}, "input bits > output bits + 2*lambda");
  expect(p.eps == std::log2(double(r.n)) / (8.0 * double(r.t)), "eps = log2(n)/(8t)");
  expect(r.n % 2 == 0, "n even");
  if (p.mode != RegimeMode::kFixed) {
    const CompressionCheck c = checkCompression(r);
    expect(c.pass, "compression regime passes");
    if (p.mode == RegimeMode::kAsymptotic) {
      expect(c.deltaAboveMin, "delta > delta_min");
      expect(c.meetsMinM, "m >= m_min");
    }
  }
  return bad;
}

const LtdfPreset& ltdfPreset(std::string_view name) {
  static const std::vector<LtdfPreset> presets = [] {
    std::vector<LtdfPreset> v;
    LtdfPreset micro;
    micro.name = "micro";
    micro.k = 4;
    micro.Gamma = Rational(101, 100);
    micro.D = Rational(6, 5);
    micro.n = 8;
    micro.mode = RegimeMode::kExact;
    micro.maxL = 12;
    micro.maxDupPairs = 3;
    micro.outerLen = 5;
    v.push_back(micro);

    LtdfPreset tiny;
    tiny.name = "tiny";
    tiny.k = 6;
    tiny.Gamma = Rational(6, 5);
    tiny.D = Rational(3, 2);
    tiny.n = 12;
    tiny.mode = RegimeMode::kExact;
    tiny.maxL = 20;
    tiny.maxDupPairs = 3;
    v.push_back(tiny);

    LtdfPreset desk;
    desk.name = "desk";
    desk.k = 6;
    desk.Gamma = Rational(3, 2);
    desk.D = 3;
    desk.n = 64;
    desk.mode = RegimeMode::kAsymptotic;
    desk.maxM = std::uint64_t{1} << 14;
    desk.maxDupPairs = 3;
    v.push_back(desk);
    return v;
  }();
  for (const auto& p : presets) {
    if (p.name == name) return p;
  }
  throw DomainError("unknown LTDF preset '" + std::string(name) + "' (known: micro, tiny, desk)");
}

std::vector<std::string> ltdfPresetNames() { return {"micro", "tiny", "desk"}; }

}  // namespace dslpn::params
