#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace clate {

/// All randomness goes through std::mt19937_64, whose output sequence is fixed
/// by the standard. Distributions are derived from raw 64-bit draws here so
/// results do not depend on the standard library's distribution classes.
using Engine = std::mt19937_64;
inline constexpr std::string_view kRngAlgorithm = "mt19937_64";
inline constexpr std::string_view kSeedSplitRule = "seed_i = seed ^ splitmix64(i)";

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for replication / chunk `index`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return seed ^ splitmix64(index);
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [lo, hi], unbiased.
inline std::int64_t uniform_int(Engine& engine, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine());
  const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % span;
  std::uint64_t draw = engine();
  while (draw >= limit) draw = engine();
  return lo + static_cast<std::int64_t>(draw % span);
}

}  // namespace clate
