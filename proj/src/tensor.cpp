#include "vidmetrics/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vidmetrics/error.hpp"

namespace vidmetrics {
namespace {

void validate_shape(const VideoShape& s) {
  if (s.n == 0 || s.t == 0 || s.h == 0 || s.w == 0) {
    throw Error(ErrorCode::kInvalidArgument, "video shape dimensions must be >= 1");
  }
  if (s.c != 1 && s.c != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "video channel count must be 1 or 3, got " + std::to_string(s.c));
  }
}

}  // namespace

VideoSet::VideoSet(VideoShape shape) : shape_(shape) {
  validate_shape(shape_);
  data_.assign(shape_.total(), 0);
}

VideoSet::VideoSet(VideoShape shape, std::vector<std::uint8_t> data)
    : shape_(shape), data_(std::move(data)) {
  validate_shape(shape_);
  if (data_.size() != shape_.total()) {
    throw Error(ErrorCode::kLengthMismatch,
                "video payload holds " + std::to_string(data_.size()) +
                    " bytes, shape requires " + std::to_string(shape_.total()));
  }
}

std::span<const std::uint8_t> VideoSet::video(std::size_t i) const {
  return std::span<const std::uint8_t>(data_).subspan(i * shape_.video_size(),
                                                      shape_.video_size());
}

std::span<std::uint8_t> VideoSet::video(std::size_t i) {
  return std::span<std::uint8_t>(data_).subspan(i * shape_.video_size(),
                                                shape_.video_size());
}

std::span<const std::uint8_t> VideoSet::frame(std::size_t i, std::size_t t) const {
  return video(i).subspan(t * shape_.frame_size(), shape_.frame_size());
}

std::span<std::uint8_t> VideoSet::frame(std::size_t i, std::size_t t) {
  return video(i).subspan(t * shape_.frame_size(), shape_.frame_size());
}

EmbeddingSet::EmbeddingSet(std::size_t n, std::size_t d, std::vector<float> data)
    : n_(n), d_(d), data_(std::move(data)) {
  if (data_.size() != n_ * d_) {
    throw Error(ErrorCode::kLengthMismatch,
                "embedding payload holds " + std::to_string(data_.size()) +
                    " values, shape requires " + std::to_string(n_ * d_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw Error(ErrorCode::kNonFinite,
                  "embedding entry " + std::to_string(i) + " is not finite");
    }
  }
}

EmbeddingSet EmbeddingSet::select(std::span<const std::size_t> rows) const {
  std::vector<float> out;
  out.reserve(rows.size() * d_);
  for (std::size_t r : rows) {
    if (r >= n_) throw Error(ErrorCode::kInvalidArgument, "row index out of range");
    const auto src = row(r);
    out.insert(out.end(), src.begin(), src.end());
  }
  return EmbeddingSet(rows.size(), d_, std::move(out));
}

NormalizedFrame normalize_frame(const VideoSet& v, std::size_t video, std::size_t t) {
  NormalizedFrame f{v.h(), v.w(), v.c(), {}};
  const auto bytes = v.frame(video, t);
  f.data.resize(bytes.size());
  std::transform(bytes.begin(), bytes.end(), f.data.begin(),
                 [](std::uint8_t b) { return static_cast<double>(b) / 255.0; });
  return f;
}

std::uint8_t quantize(double value) {
  const double clamped = std::clamp(value, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(clamped * 255.0));
}

}  // namespace vidmetrics
