#ifndef COALSIM_RANDOM_HPP
#define COALSIM_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "coalsim/errors.hpp"

namespace coalsim {

using Rng = std::mt19937_64;

// SplitMix64 step; used to whiten seeds and to derive independent streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix64(s);
  const std::uint64_t b = splitmix64(s);
  const std::uint64_t c = splitmix64(s);
  const std::uint64_t d = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                    static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32)};
  return Rng(seq);
}

// Counter-based stream derivation: the stream for replicate i depends only on
// (master_seed, i), never on scheduling, so parallel runs are reproducible.
inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t s = master_seed;
  const std::uint64_t mixed = splitmix64(s) ^ (0x517cc1b727220a95ULL * (index + 1));
  return make_rng(mixed);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n == 0) throw ArgumentError("uniform_below: n must be positive");
  // rejection from a power-of-two mask, bias-free
  const std::uint64_t mask = n <= 1 ? 0 : ~std::uint64_t{0} >> __builtin_clzll(n - 1);
  for (;;) {
    const std::uint64_t v = rng() & mask;
    if (v < n) return v;
  }
}

inline double exponential(Rng& rng, double rate) {
  if (!(rate > 0.0)) throw ArgumentError("exponential: rate must be positive");
  return -std::log1p(-uniform01(rng)) / rate;
}

/// Gamma(shape, 1) for integer shape, as a sum of unit exponentials.
inline double gamma_int(Rng& rng, long long shape) {
  if (shape < 1) throw ArgumentError("gamma_int: shape must be >= 1");
  double acc = 0.0;
  for (long long i = 0; i < shape; ++i) acc += -std::log1p(-uniform01(rng));
  return acc;
}

/// Gamma(shape, 1) for real shape > 0 (Marsaglia-Tsang; boost for shape < 1).
inline double gamma_general(Rng& rng, double shape) {
  if (!(shape > 0.0)) throw ArgumentError("gamma_general: shape must be positive");
  if (shape < 1.0) {
    const double u = uniform01(rng);
    return gamma_general(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    double x = normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform01(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

inline double beta_sample(Rng& rng, double a, double b) {
  const double x = gamma_general(rng, a);
  const double y = gamma_general(rng, b);
  return x / (x + y);
}

/// Index sampled from a cumulative weight table (strictly increasing, last = total).
inline std::size_t categorical_from_cumulative(Rng& rng, std::span<const double> cumulative) {
  if (cumulative.empty()) throw ArgumentError("categorical: empty table");
  const double total = cumulative.back();
  if (!(total > 0.0)) throw ArgumentError("categorical: total weight must be positive");
  const double u = uniform01(rng) * total;
  std::size_t lo = 0, hi = cumulative.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (cumulative[mid] <= u) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace coalsim

#endif  // COALSIM_RANDOM_HPP
