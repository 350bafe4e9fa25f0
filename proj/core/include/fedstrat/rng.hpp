#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fedstrat {

using Rng = std::mt19937_64;

// Named generator streams. Every random draw in the simulator goes through
// a stream derived from the run seed plus one of these tags, so that the
// order in which clients are scheduled cannot change any result.
enum class Stream : std::uint64_t {
  kData = 1,
  kPartition = 2,
  kProxySplit = 3,
  kTestSplit = 4,
  kModelInit = 5,
  kClientTrain = 6,
  kMaliciousPick = 7,
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hashes a base seed together with any number of tags (stream, client id,
/// round, ...) into a fresh 64-bit seed.
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> parts) noexcept;

inline std::uint64_t derive_seed(std::uint64_t base, Stream stream) noexcept {
  return derive_seed(base, {static_cast<std::uint64_t>(stream)});
}

}  // namespace fedstrat
