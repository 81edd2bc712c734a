#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "seamkit/error.hpp"

namespace seamkit {

/// Closed interval [lo, hi] used for every sampled parameter.
struct Range {
  double lo = 0.0;
  double hi = 0.0;

  void validate(const char* name) const {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw ConfigError(std::string("empty or invalid range for ") + name,
                        std::to_string(lo) + ".." + std::to_string(hi));
  }
};

struct IntRange {
  int lo = 0;
  int hi = 0;

  void validate(const char* name) const {
    if (lo > hi)
      throw ConfigError(std::string("empty range for ") + name,
                        std::to_string(lo) + ".." + std::to_string(hi));
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Deterministic random stream identified by (seed, stream). All sampling
/// helpers are implemented here rather than through <random> distributions
/// so sequences do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x5eedu};
    engine_.seed(seq);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Independent stream derived from this one's identity (not its state).
  Rng child(std::uint64_t tag) const {
    return Rng(seed_, detail::splitmix64(stream_ ^ detail::splitmix64(tag + 0x632BE59BD9B4E019ULL)));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double canonical() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    if (lo == hi) return lo;
    return lo + (hi - lo) * canonical();
  }
  double uniform(const Range& r) { return uniform(r.lo, r.hi); }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    if (lo >= hi) return lo;
    const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }
  int uniform_int(const IntRange& r) { return uniform_int(r.lo, r.hi); }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return canonical() < p;
  }

  /// Box-Muller; caches the second variate.
  double normal(double mean = 0.0, double sigma = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + sigma * spare_;
    }
    double u1 = canonical();
    while (u1 <= 0.0) u1 = canonical();
    const double u2 = canonical();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(theta);
    has_spare_ = true;
    return mean + sigma * radius * std::cos(theta);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace seamkit
