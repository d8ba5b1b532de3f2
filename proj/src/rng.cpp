#include "vidmetrics/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "vidmetrics/error.hpp"

namespace vidmetrics {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "below(0)");
  // 2^64 mod n, computed without overflow.
  const std::uint64_t rem = (0 - n) % n;
  while (true) {
    const std::uint64_t x = next();
    if (rem == 0 || x < 0 - rem) return x % n;
  }
}

double SplitMix64::standard_normal() {
  const double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 rng(seed ^ index);
  return rng.next();
}

std::vector<std::size_t> sample_without_replacement(SplitMix64& rng,
                                                    std::size_t n,
                                                    std::size_t count) {
  if (count > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot draw " + std::to_string(count) + " of " +
                    std::to_string(n) + " items without replacement");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

}  // namespace vidmetrics
