#include "vidmetrics/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vidmetrics/error.hpp"
#include "vidmetrics/parallel.hpp"
#include "vidmetrics/rng.hpp"

namespace vidmetrics {
namespace {

struct KindInfo {
  NoiseKind kind;
  std::string_view name;
  bool temporal;
  std::array<double, 6> params;
  int levels;
};

constexpr std::array<KindInfo, 8> kKinds{{
    {NoiseKind::kBlackRect, "black_rect", false, {0.15, 0.30, 0.45, 0.60, 0.75, 0}, 5},
    {NoiseKind::kGaussBlur, "gauss_blur", false, {1, 2, 3, 4, 5, 0}, 5},
    {NoiseKind::kGaussMix, "gauss_mix", false, {0.15, 0.30, 0.45, 0.60, 0.75, 0}, 5},
    {NoiseKind::kSaltPepper, "salt_pepper", false, {0.1, 0.2, 0.3, 0.4, 0.5, 0}, 5},
    {NoiseKind::kSwapLocal, "swap_local", true, {4, 8, 12, 16, 20, 24}, 6},
    {NoiseKind::kSwapGlobal, "swap_global", true, {4, 8, 12, 16, 20, 24}, 6},
    {NoiseKind::kInterleave, "interleave", true, {2, 3, 4, 5, 6, 0}, 5},
    {NoiseKind::kSwitch, "switch", true, {1, 2, 3, 4, 5, 0}, 5},
}};

const KindInfo& info(NoiseKind kind) {
  return kKinds[static_cast<std::size_t>(kind)];
}

std::size_t count_param(NoiseKind kind, int intensity) {
  return static_cast<std::size_t>(intensity_param(kind, intensity));
}

// Copies frame `src_t` of video `src_i` into frame `dst_t` of video `dst_i`.
void copy_frame(const VideoSet& src, std::size_t src_i, std::size_t src_t, VideoSet& dst,
                std::size_t dst_i, std::size_t dst_t) {
  const auto from = src.frame(src_i, src_t);
  std::copy(from.begin(), from.end(), dst.frame(dst_i, dst_t).begin());
}

void swap_frames(VideoSet& v, std::size_t i, std::size_t a, std::size_t b) {
  auto fa = v.frame(i, a);
  auto fb = v.frame(i, b);
  std::swap_ranges(fa.begin(), fa.end(), fb.begin());
}

}  // namespace

std::string_view to_string(NoiseKind kind) { return info(kind).name; }

std::optional<NoiseKind> parse_noise_kind(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

bool is_temporal(NoiseKind kind) { return info(kind).temporal; }

int max_intensity(NoiseKind kind) { return info(kind).levels; }

double intensity_param(NoiseKind kind, int intensity) {
  const auto& k = info(kind);
  if (intensity < 1 || intensity > k.levels) {
    throw Error(ErrorCode::kInvalidArgument,
                "intensity " + std::to_string(intensity) + " out of range 1.." +
                    std::to_string(k.levels) + " for " + std::string(k.name));
  }
  return k.params[static_cast<std::size_t>(intensity - 1)];
}

VideoSet black_rectangle(const VideoSet& v, int intensity, std::uint64_t seed) {
  return black_rectangle_fraction(v, intensity_param(NoiseKind::kBlackRect, intensity), seed);
}

VideoSet black_rectangle_fraction(const VideoSet& v, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rectangle fraction must lie in [0,1]");
  }
  const auto rect_h = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(v.h())));
  const auto rect_w = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(v.w())));
  VideoSet out = v;
  parallel_for(v.n(), [&](std::size_t i) {
    SplitMix64 rng(derive_seed(seed, i));
    // One location per video, shared by all of its frames.
    const std::size_t top = static_cast<std::size_t>(rng.below(v.h() - rect_h + 1));
    const std::size_t left = static_cast<std::size_t>(rng.below(v.w() - rect_w + 1));
    for (std::size_t t = 0; t < v.t(); ++t) {
      auto frame = out.frame(i, t);
      for (std::size_t y = top; y < top + rect_h; ++y) {
        auto row = frame.begin() + static_cast<std::ptrdiff_t>((y * v.w() + left) * v.c());
        std::fill(row, row + static_cast<std::ptrdiff_t>(rect_w * v.c()), std::uint8_t{0});
      }
    }
  });
  return out;
}

std::vector<double> gaussian_kernel_1d(double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be positive");
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
    const double w = std::exp(-static_cast<double>(k * k) / (2.0 * sigma * sigma));
    taps[static_cast<std::size_t>(k + radius)] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<std::ptrdiff_t>(n)) m = period - m;
  return static_cast<std::size_t>(m);
}

VideoSet gaussian_blur(const VideoSet& v, int intensity) {
  return gaussian_blur_sigma(v, intensity_param(NoiseKind::kGaussBlur, intensity));
}

VideoSet gaussian_blur_sigma(const VideoSet& v, double sigma) {
  const auto taps = gaussian_kernel_1d(sigma);
  const auto radius = static_cast<std::ptrdiff_t>(taps.size() / 2);
  const std::size_t h = v.h(), w = v.w(), c = v.c();
  // Source index for every tap position of every output index, per axis.
  const auto reflect_table = [&](std::size_t n) {
    std::vector<std::size_t> table(n * taps.size());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < taps.size(); ++k) {
        table[i * taps.size() + k] =
            reflect_index(static_cast<std::ptrdiff_t>(i + k) - radius, n);
      }
    }
    return table;
  };
  const auto cols = reflect_table(w);
  const auto rows = reflect_table(h);
  const std::size_t row_len = w * c;
  VideoSet out = v;
  // The 2-D kernel is the outer product of the normalized 1-D taps, so it is
  // applied as a horizontal then a vertical pass without intermediate rounding.
  parallel_for(v.n() * v.t(), [&](std::size_t ft) {
    const std::size_t i = ft / v.t(), t = ft % v.t();
    const auto src = v.frame(i, t);
    std::vector<double> tmp(h * row_len);
    for (std::size_t y = 0; y < h; ++y) {
      const std::uint8_t* in_row = &src[y * row_len];
      double* tmp_row = &tmp[y * row_len];
      for (std::size_t x = 0; x < w; ++x) {
        const std::size_t* idx = &cols[x * taps.size()];
        for (std::size_t ch = 0; ch < c; ++ch) {
          double acc = 0.0;
          for (std::size_t k = 0; k < taps.size(); ++k) acc += taps[k] * in_row[idx[k] * c + ch];
          tmp_row[x * c + ch] = acc;
        }
      }
    }
    auto dst = out.frame(i, t);
    std::vector<double> acc(row_len);
    for (std::size_t y = 0; y < h; ++y) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const std::size_t* idx = &rows[y * taps.size()];
      for (std::size_t k = 0; k < taps.size(); ++k) {
        const double wk = taps[k];
        const double* tmp_row = &tmp[idx[k] * row_len];
        for (std::size_t j = 0; j < row_len; ++j) acc[j] += wk * tmp_row[j];
      }
      for (std::size_t j = 0; j < row_len; ++j) dst[y * row_len + j] = quantize(acc[j] / 255.0);
    }
  });
  return out;
}

VideoSet gaussian_mix(const VideoSet& v, int intensity, std::uint64_t seed) {
  return gaussian_mix_alpha(v, intensity_param(NoiseKind::kGaussMix, intensity), seed);
}

VideoSet gaussian_mix_alpha(const VideoSet& v, double alpha, std::uint64_t seed) {
  VideoSet out = v;
  parallel_for(v.n(), [&](std::size_t i) {
    SplitMix64 rng(derive_seed(seed, i));
    for (auto& b : out.video(i)) {
      const double x = static_cast<double>(b) / 255.0;
      const double z = rng.standard_normal();
      b = quantize((1.0 - alpha) * x + alpha * z);
    }
  });
  return out;
}

VideoSet salt_pepper(const VideoSet& v, int intensity, std::uint64_t seed) {
  return salt_pepper_probability(v, intensity_param(NoiseKind::kSaltPepper, intensity), seed);
}

VideoSet salt_pepper_probability(const VideoSet& v, double probability, std::uint64_t seed) {
  VideoSet out = v;
  const std::size_t c = v.c();
  parallel_for(v.n(), [&](std::size_t i) {
    SplitMix64 rng(derive_seed(seed, i));
    auto video = out.video(i);
    for (std::size_t p = 0; p < video.size(); p += c) {
      if (rng.uniform() < probability) {
        const std::uint8_t value = (rng.next() >> 63) ? 255 : 0;
        std::fill_n(video.begin() + static_cast<std::ptrdiff_t>(p), c, value);
      }
    }
  });
  return out;
}

VideoSet swap_local(const VideoSet& v, int intensity, std::uint64_t seed) {
  return swap_local_count(v, count_param(NoiseKind::kSwapLocal, intensity), seed);
}

VideoSet swap_local_count(const VideoSet& v, std::size_t swaps, std::uint64_t seed) {
  if (swaps + 1 > v.t()) {
    throw Error(ErrorCode::kInsufficientSamples,
                std::to_string(swaps) + " local swaps need at least " +
                    std::to_string(swaps + 1) + " frames, have " + std::to_string(v.t()));
  }
  VideoSet out = v;
  parallel_for(v.n(), [&](std::size_t i) {
    SplitMix64 rng(derive_seed(seed, i));
    auto positions = sample_without_replacement(rng, v.t() - 1, swaps);
    std::sort(positions.begin(), positions.end());
    for (std::size_t p : positions) swap_frames(out, i, p, p + 1);
  });
  return out;
}

VideoSet swap_global(const VideoSet& v, int intensity, std::uint64_t seed) {
  return swap_global_count(v, count_param(NoiseKind::kSwapGlobal, intensity), seed);
}

VideoSet swap_global_count(const VideoSet& v, std::size_t swaps, std::uint64_t seed) {
  if (2 * swaps > v.t()) {
    throw Error(ErrorCode::kInsufficientSamples,
                std::to_string(swaps) + " global swaps need at least " +
                    std::to_string(2 * swaps) + " frames, have " + std::to_string(v.t()));
  }
  VideoSet out = v;
  parallel_for(v.n(), [&](std::size_t i) {
    SplitMix64 rng(derive_seed(seed, i));
    const auto picked = sample_without_replacement(rng, v.t(), 2 * swaps);
    for (std::size_t k = 0; k < swaps; ++k) swap_frames(out, i, picked[2 * k], picked[2 * k + 1]);
  });
  return out;
}

VideoSet interleave(const VideoSet& v, int intensity, std::uint64_t seed) {
  return interleave_count(v, count_param(NoiseKind::kInterleave, intensity), seed);
}

VideoSet interleave_count(const VideoSet& v, std::size_t sequences, std::uint64_t seed) {
  if (sequences < 1 || v.n() < sequences) {
    throw Error(ErrorCode::kInsufficientSamples,
                "interleaving " + std::to_string(sequences) + " sequences needs N >= " +
                    std::to_string(sequences) + ", have " + std::to_string(v.n()));
  }
  const std::size_t k = sequences;
  const std::size_t tuples = v.n() / k;
  SplitMix64 rng(seed);
  const auto order = sample_without_replacement(rng, v.n(), tuples * k);
  VideoShape shape = v.shape();
  shape.n = tuples * k;
  VideoSet out(shape);
  // Tuple g, rotation r: output frame t comes from member (t + r) mod k.
  parallel_for(tuples, [&](std::size_t g) {
    for (std::size_t r = 0; r < k; ++r) {
      const std::size_t dst = g * k + r;
      for (std::size_t t = 0; t < v.t(); ++t) {
        copy_frame(v, order[g * k + (t + r) % k], t, out, dst, t);
      }
    }
  });
  return out;
}

VideoSet switch_videos(const VideoSet& v, int intensity, std::uint64_t seed) {
  return switch_after(v, count_param(NoiseKind::kSwitch, intensity), seed);
}

VideoSet switch_after(const VideoSet& v, std::size_t frames, std::uint64_t seed) {
  if (v.n() < 2) {
    throw Error(ErrorCode::kInsufficientSamples, "switching needs at least 2 videos");
  }
  if (frames > v.t()) {
    throw Error(ErrorCode::kInsufficientSamples,
                "switch point " + std::to_string(frames) + " exceeds T=" + std::to_string(v.t()));
  }
  const std::size_t pairs = v.n() / 2;
  SplitMix64 rng(seed);
  const auto order = sample_without_replacement(rng, v.n(), 2 * pairs);
  VideoShape shape = v.shape();
  shape.n = 2 * pairs;
  VideoSet out(shape);
  // Pair (a, b) emits a->b and b->a.
  parallel_for(pairs, [&](std::size_t p) {
    const std::size_t a = order[2 * p], b = order[2 * p + 1];
    for (std::size_t t = 0; t < v.t(); ++t) {
      copy_frame(v, t < frames ? a : b, t, out, 2 * p, t);
      copy_frame(v, t < frames ? b : a, t, out, 2 * p + 1, t);
    }
  });
  return out;
}

VideoSet apply_noise(const VideoSet& v, const NoiseSpec& spec) {
  switch (spec.kind) {
    case NoiseKind::kBlackRect: return black_rectangle(v, spec.intensity, spec.seed);
    case NoiseKind::kGaussBlur: return gaussian_blur(v, spec.intensity);
    case NoiseKind::kGaussMix: return gaussian_mix(v, spec.intensity, spec.seed);
    case NoiseKind::kSaltPepper: return salt_pepper(v, spec.intensity, spec.seed);
    case NoiseKind::kSwapLocal: return swap_local(v, spec.intensity, spec.seed);
    case NoiseKind::kSwapGlobal: return swap_global(v, spec.intensity, spec.seed);
    case NoiseKind::kInterleave: return interleave(v, spec.intensity, spec.seed);
    case NoiseKind::kSwitch: return switch_videos(v, spec.intensity, spec.seed);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown noise kind");
}

}  // namespace vidmetrics
