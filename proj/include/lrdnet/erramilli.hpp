#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lrdnet/errors.hpp"
#include "lrdnet/format.hpp"
#include "lrdnet/random.hpp"

namespace lrdnet {

/// Intermittency exponents m1, m2 in [1.5, 2] and the Off/On threshold d in (0, 1).
struct ErramilliParams {
  double m1 = 2.0;
  double m2 = 2.0;
  double d = 0.5;

  void validate() const {
    if (!(m1 >= 1.5 && m1 <= 2.0)) throw ValidationError("m1", "must lie in [1.5, 2]");
    if (!(m2 >= 1.5 && m2 <= 2.0)) throw ValidationError("m2", "must lie in [1.5, 2]");
    if (!(d > 0.0 && d < 1.0)) throw ValidationError("d", "must lie in (0, 1)");
  }
};

namespace detail {
// r^m for r in [0, 1]
inline double ratio_pow(double r, double m) { return r <= 0.0 ? 0.0 : std::exp(m * std::log(r)); }
}  // namespace detail

/// One application of the double-intermittency map:
///   x + (1-d) (x/d)^m1          on [0, d]
///   x - d ((1-x)/(1-d))^m2      on (d, 1]
/// clamped into [0, 1].
inline double map_step(const ErramilliParams& p, double x) {
  double y;
  if (x <= p.d)
    y = x + (1.0 - p.d) * detail::ratio_pow(x / p.d, p.m1);
  else
    y = x - p.d * detail::ratio_pow((1.0 - x) / (1.0 - p.d), p.m2);
  return std::clamp(y, 0.0, 1.0);
}

/// On/Off packet source driven by an orbit of the map. Each On bit is one
/// packet. Orbits that reach within `edge_epsilon` of either fixed point
/// are reinjected uniformly into the same half of the interval.
class ErramilliSource {
public:
  static constexpr double edge_epsilon = 1e-12;
  static constexpr std::size_t default_burn_in = 1000;

  ErramilliSource(const ErramilliParams& params, std::uint64_t seed,
                  std::size_t burn_in = default_burn_in)
      : params_(params), rng_(seed) {
    params_.validate();
    x_ = rng_.uniform_open(0.0, 1.0);
    for (std::size_t i = 0; i < burn_in; ++i) advance();
  }

  /// Starts from a given orbit point, without burn-in.
  static ErramilliSource from_state(const ErramilliParams& params, double x0, std::uint64_t seed) {
    ErramilliSource src(params, seed, 0);
    src.x_ = x0;
    return src;
  }

  /// Advances the orbit and returns true (On) iff the new point lies in (d, 1].
  bool next_bit() {
    advance();
    return x_ > params_.d;
  }

  double state() const noexcept { return x_; }
  const ErramilliParams& params() const noexcept { return params_; }

private:
  void advance() {
    x_ = map_step(params_, x_);
    if (x_ >= 1.0 - edge_epsilon)
      x_ = rng_.uniform_open(params_.d, 1.0);
    else if (x_ <= edge_epsilon)
      x_ = rng_.uniform_open(0.0, params_.d);
  }

  ErramilliParams params_;
  Rng rng_;
  double x_ = 0.5;
};

inline std::vector<std::uint8_t> generate_bits(const ErramilliParams& p, std::size_t length, std::uint64_t seed) {
  ErramilliSource src(p, seed);
  std::vector<std::uint8_t> bits(length);
  for (auto& b : bits) b = src.next_bit() ? 1 : 0;
  return bits;
}

struct RateEstimateOptions {
  std::size_t burn_in = ErramilliSource::default_burn_in;
  std::size_t samples = 100'000;
  std::size_t orbits = 8;
};

/// Long-run On fraction, averaged over several orbits started from uniform
/// random initial points. Deterministic given seed.
inline double estimate_rate(const ErramilliParams& p, std::uint64_t seed, const RateEstimateOptions& opt = {}) {
  if (opt.samples == 0 || opt.orbits == 0) throw InvalidArgument("estimate_rate needs samples and orbits");
  double total = 0.0;
  for (std::size_t k = 0; k < opt.orbits; ++k) {
    ErramilliSource src(p, derive_seed(seed, k), opt.burn_in);
    std::size_t on = 0;
    for (std::size_t i = 0; i < opt.samples; ++i) on += src.next_bit();
    total += static_cast<double>(on) / static_cast<double>(opt.samples);
  }
  return total / static_cast<double>(opt.orbits);
}

struct CalibrationOptions {
  double tol = 0.005;
  std::size_t max_steps = 60;
  RateEstimateOptions rate{};
};

/// Bisection on d for a target On fraction; the rate is non-increasing in d.
inline double calibrate_d(double m1, double m2, double target_lambda, std::uint64_t seed,
                          const CalibrationOptions& opt = {}) {
  if (!(target_lambda > 0.0 && target_lambda < 1.0))
    throw ValidationError("lambda", "target rate must lie in (0, 1)");
  double lo = 0.0;
  double hi = 1.0;
  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0 || mid >= 1.0) break;
    const double rate = estimate_rate({m1, m2, mid}, seed, opt.rate);
    if (std::abs(rate - target_lambda) <= opt.tol) return mid;
    if (rate > target_lambda)
      lo = mid;
    else
      hi = mid;
  }
  throw NoConvergence("could not reach lambda=" + format_double(target_lambda) +
                      " within tol=" + format_double(opt.tol));
}

/// Hurst exponent by the aggregated-variance method: the variance of
/// non-overlapping block means scales as s^(2H-2) in the block size s.
inline double hurst_aggregated_variance(std::span<const std::uint8_t> bits, std::span<const std::size_t> block_sizes) {
  if (block_sizes.size() < 4) throw InsufficientData("need at least 4 block sizes");
  std::size_t smallest = block_sizes[0];
  std::size_t largest = block_sizes[0];
  for (auto s : block_sizes) {
    if (s == 0) throw InsufficientData("block size must be positive");
    smallest = std::min(smallest, s);
    largest = std::max(largest, s);
  }
  if (largest < 100 * smallest) throw InsufficientData("block sizes must span at least 2 decades");
  if (bits.size() < 100 * largest) throw InsufficientData("sequence shorter than 100 x largest block");

  std::vector<double> xs;
  std::vector<double> ys;
  for (auto s : block_sizes) {
    const std::size_t blocks = bits.size() / s;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
      std::size_t ones = 0;
      for (std::size_t i = b * s; i < (b + 1) * s; ++i) ones += bits[i];
      const double mean = static_cast<double>(ones) / static_cast<double>(s);
      sum += mean;
      sum_sq += mean * mean;
    }
    const double nb = static_cast<double>(blocks);
    const double var = sum_sq / nb - (sum / nb) * (sum / nb);
    if (!(var > 0.0)) throw InsufficientData("block means have zero variance at block size " + std::to_string(s));
    xs.push_back(std::log(static_cast<double>(s)));
    ys.push_back(std::log(var));
  }

  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  return 1.0 + slope / 2.0;
}

/// Writes `On:len Off:len ...` on a single line.
inline void write_bits_rle(std::ostream& os, std::span<const std::uint8_t> bits) {
  std::size_t i = 0;
  bool first = true;
  while (i < bits.size()) {
    std::size_t j = i;
    while (j < bits.size() && bits[j] == bits[i]) ++j;
    os << (first ? "" : " ") << (bits[i] ? "On:" : "Off:") << (j - i);
    first = false;
    i = j;
  }
  os << '\n';
}

inline std::vector<std::uint8_t> read_bits_rle(std::istream& is) {
  std::vector<std::uint8_t> bits;
  std::string token;
  while (is >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw ParseError("bad run token '" + token + "'", 1);
    const auto state = token.substr(0, colon);
    const auto len = parse_int<std::size_t>(std::string_view(token).substr(colon + 1));
    if (!len || (state != "On" && state != "Off")) throw ParseError("bad run token '" + token + "'", 1);
    bits.insert(bits.end(), *len, state == "On" ? 1 : 0);
  }
  return bits;
}

/// One 0/1 value per line.
inline void write_bits_raw(std::ostream& os, std::span<const std::uint8_t> bits) {
  for (auto b : bits) os << (b ? '1' : '0') << '\n';
}

}  // namespace lrdnet
