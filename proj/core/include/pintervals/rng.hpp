#pragma once

#include <cstddef>
#include <cmath>
#include <cstdint>
#include <random>

namespace pintervals {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for sub-stream `stream` of `master`; stream k is reproducible alone.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline Engine make_engine(std::uint64_t master, std::uint64_t stream) {
  return Engine(derive_seed(master, stream));
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) noexcept {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform on {0, ..., n - 1}; n > 0. Rejection sampling removes modulo bias.
inline std::size_t uniform_index(Engine& eng, std::size_t n) noexcept {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = eng();
  while (x >= limit) x = eng();
  return static_cast<std::size_t>(x % bound);
}

/// Box-Muller draw; uses two uniforms per call and keeps no cached state.
inline double standard_normal(Engine& eng) noexcept {
  const double u1 = 1.0 - uniform01(eng);  // (0, 1]
  const double u2 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace pintervals
