#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace vidmetrics {

/// splitmix64 generator. Every stochastic routine takes an explicit seed and
/// draws from one of these, so streams are reproducible in any language:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// uniform()       = (next() >> 11) * 2^-53, in [0, 1)
/// below(n)        = next() % n, rejecting draws >= 2^64 - (2^64 mod n)
/// standard_normal = Box-Muller on u1 = ((next() >> 11) + 1) * 2^-53 and
///                   u2 = uniform(), returning sqrt(-2 ln u1) cos(2 pi u2)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double uniform();
  std::uint64_t below(std::uint64_t n);
  double standard_normal();

 private:
  std::uint64_t state_;
};

/// Sub-seed for an indexed unit of work (video, study cell): the first output
/// of splitmix64 seeded with (seed ^ index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// First `count` entries of a Fisher-Yates shuffle of 0..n-1, i.e. `count`
/// distinct indices drawn without replacement.
std::vector<std::size_t> sample_without_replacement(SplitMix64& rng,
                                                    std::size_t n,
                                                    std::size_t count);

}  // namespace vidmetrics
