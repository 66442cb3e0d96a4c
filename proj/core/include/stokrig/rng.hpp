#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace stokrig::rng {

using Engine = std::mt19937_64;

/// splitmix64 step; also the stream-splitting mixer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child-stream seed from (master seed, index).
/// Rule: seed' = splitmix64(splitmix64(master) ^ splitmix64(index + 1)); the
/// same rule is used everywhere streams are split (macro-reps, surrogate fits,
/// validation draws), so runs are reproducible regardless of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t a = master_seed;
  std::uint64_t b = index + 1;
  std::uint64_t ha = splitmix64(a);
  std::uint64_t hb = splitmix64(b);
  std::uint64_t s = ha ^ hb;
  return splitmix64(s);
}

inline Engine derive_stream(std::uint64_t master_seed, std::uint64_t index) {
  return Engine(derive_seed(master_seed, index));
}

/// Uniform on [0, 1) with 53-bit resolution. All library distributions are
/// built from this to keep results independent of the standard library's
/// distribution implementations.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

/// Standard normal via Box-Muller (one variate per call).
inline double normal(Engine& eng) {
  double u1 = 1.0 - uniform01(eng);  // (0, 1]
  double u2 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

inline double normal(Engine& eng, double mean, double stddev) {
  return mean + stddev * normal(eng);
}

/// Exponential with the given rate.
inline double exponential(Engine& eng, double lambda) {
  double u = 1.0 - uniform01(eng);  // (0, 1]
  return -std::log(u) / lambda;
}

}  // namespace stokrig::rng
