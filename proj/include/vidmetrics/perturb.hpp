#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "vidmetrics/tensor.hpp"

namespace vidmetrics {

enum class NoiseKind {
  kBlackRect,
  kGaussBlur,
  kGaussMix,
  kSaltPepper,
  kSwapLocal,
  kSwapGlobal,
  kInterleave,
  kSwitch,
};

inline constexpr std::array<NoiseKind, 8> kAllNoiseKinds{
    NoiseKind::kBlackRect,  NoiseKind::kGaussBlur,  NoiseKind::kGaussMix,
    NoiseKind::kSaltPepper, NoiseKind::kSwapLocal,  NoiseKind::kSwapGlobal,
    NoiseKind::kInterleave, NoiseKind::kSwitch};

std::string_view to_string(NoiseKind kind);
std::optional<NoiseKind> parse_noise_kind(std::string_view name);
bool is_temporal(NoiseKind kind);

/// Highest valid intensity level: 6 for the swap kinds, 5 otherwise.
int max_intensity(NoiseKind kind);

struct NoiseSpec {
  NoiseKind kind;
  int intensity;
  std::uint64_t seed;
};

/// Tabulated parameter per (kind, level):
///   black_rect   side fraction      0.15 0.30 0.45 0.60 0.75
///   gauss_blur   sigma (pixels)     1    2    3    4    5
///   gauss_mix    noise weight       0.15 0.30 0.45 0.60 0.75
///   salt_pepper  probability        0.1  0.2  0.3  0.4  0.5
///   swap_local   swaps              4    8    12   16   20   24
///   swap_global  swaps              4    8    12   16   20   24
///   interleave   sequences          2    3    4    5    6
///   switch       frames to switch   1    2    3    4    5
/// Throws kInvalidArgument outside 1..max_intensity(kind).
double intensity_param(NoiseKind kind, int intensity);

VideoSet black_rectangle(const VideoSet& v, int intensity, std::uint64_t seed);
VideoSet gaussian_blur(const VideoSet& v, int intensity);
VideoSet salt_pepper(const VideoSet& v, int intensity, std::uint64_t seed);
VideoSet gaussian_mix(const VideoSet& v, int intensity, std::uint64_t seed);
VideoSet swap_local(const VideoSet& v, int intensity, std::uint64_t seed);
VideoSet swap_global(const VideoSet& v, int intensity, std::uint64_t seed);
VideoSet interleave(const VideoSet& v, int intensity, std::uint64_t seed);
VideoSet switch_videos(const VideoSet& v, int intensity, std::uint64_t seed);

/// Parameterized cores, used by the level-based entry points above.
VideoSet black_rectangle_fraction(const VideoSet& v, double fraction, std::uint64_t seed);
VideoSet gaussian_blur_sigma(const VideoSet& v, double sigma);
VideoSet gaussian_mix_alpha(const VideoSet& v, double alpha, std::uint64_t seed);
VideoSet salt_pepper_probability(const VideoSet& v, double probability, std::uint64_t seed);
VideoSet swap_local_count(const VideoSet& v, std::size_t swaps, std::uint64_t seed);
VideoSet swap_global_count(const VideoSet& v, std::size_t swaps, std::uint64_t seed);
VideoSet interleave_count(const VideoSet& v, std::size_t sequences, std::uint64_t seed);
VideoSet switch_after(const VideoSet& v, std::size_t frames, std::uint64_t seed);

/// Normalized 1-D Gaussian taps of radius ceil(3 sigma).
std::vector<double> gaussian_kernel_1d(double sigma);

/// Reflect-101 index mapping (d c b | a b c d | c b a) for any offset.
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n);

VideoSet apply_noise(const VideoSet& v, const NoiseSpec& spec);

}  // namespace vidmetrics
