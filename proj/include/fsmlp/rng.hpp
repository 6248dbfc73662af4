#pragma once

#include <cstdint>
#include <random>

namespace fsmlp {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for (stream, index) under a master seed. Distinct streams never collide for
/// the small index ranges used here.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index = 0) {
  return mix_seed(mix_seed(master ^ mix_seed(stream + 0x51ed270b27ULL)) + index);
}

// Named streams so that e.g. gate initialization never shares draws with subset sampling.
namespace seed_stream {
inline constexpr std::uint64_t kRestart = 1;
inline constexpr std::uint64_t kWeights = 2;
inline constexpr std::uint64_t kGates = 3;
inline constexpr std::uint64_t kSubsets = 4;
inline constexpr std::uint64_t kSplit = 5;
inline constexpr std::uint64_t kSmote = 6;
inline constexpr std::uint64_t kFcm = 7;
inline constexpr std::uint64_t kFolds = 8;
inline constexpr std::uint64_t kClassifier = 9;
}  // namespace seed_stream

}  // namespace fsmlp
