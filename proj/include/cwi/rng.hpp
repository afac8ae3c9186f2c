#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

#include "cwi/common.hpp"

namespace cwi {

// Counter-based RNG: every draw is a pure function of (seed, stream, index),
// so parallel batches are reproducible and non-overlapping regardless of
// scheduling.

namespace detail {
inline std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

inline std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t h = detail::mix64(seed ^ 0x6a09e667f3bcc908ULL);
  h = detail::mix64(h ^ stream);
  return detail::mix64(h ^ (index * 0x9e3779b97f4a7c15ULL));
}

/// Derive an independent sub-seed, e.g. one per Monte Carlo chunk.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return detail::mix64(detail::mix64(seed) ^ detail::mix64(tag ^ 0x243f6a8885a308d3ULL));
}

/// Uniform in the open interval (0,1).
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return (static_cast<double>(counter_bits(seed, stream, index) >> 11) + 0.5) * 0x1p-53;
}

/// Two independent standard normals via Box-Muller; one counter index consumes both.
inline std::pair<double, double> gauss_pair(std::uint64_t seed, std::uint64_t stream,
                                            std::uint64_t index) {
  const double u1 = uniform01(seed, stream, 2 * index);
  const double u2 = uniform01(seed, stream, 2 * index + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

/// Standard symmetric complex Gaussian: E[Z^2]=0, E|Z|^2=1 (Re,Im ~ N(0,1/2)).
inline cplx complex_gauss(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  auto [x, y] = gauss_pair(seed, stream, index);
  constexpr double half_sqrt2 = 0.7071067811865475244;
  return cplx(half_sqrt2 * x, half_sqrt2 * y);
}

}  // namespace cwi
