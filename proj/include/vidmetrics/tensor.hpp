#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vidmetrics {

struct VideoShape {
  std::size_t n = 0;
  std::size_t t = 0;
  std::size_t h = 0;
  std::size_t w = 0;
  std::size_t c = 0;

  std::size_t frame_size() const { return h * w * c; }
  std::size_t video_size() const { return t * frame_size(); }
  std::size_t total() const { return n * video_size(); }

  friend bool operator==(const VideoShape&, const VideoShape&) = default;
};

/// N videos of T frames, stored as unsigned bytes in row-major (N,T,H,W,C).
class VideoSet {
 public:
  VideoSet() = default;
  /// Zero-filled set. Throws kInvalidArgument unless N,T,H,W >= 1 and C is 1 or 3.
  explicit VideoSet(VideoShape shape);
  /// Takes ownership of `data`; throws kLengthMismatch unless it holds
  /// exactly shape.total() bytes.
  VideoSet(VideoShape shape, std::vector<std::uint8_t> data);

  const VideoShape& shape() const { return shape_; }
  std::size_t n() const { return shape_.n; }
  std::size_t t() const { return shape_.t; }
  std::size_t h() const { return shape_.h; }
  std::size_t w() const { return shape_.w; }
  std::size_t c() const { return shape_.c; }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }

  std::span<const std::uint8_t> video(std::size_t i) const;
  std::span<std::uint8_t> video(std::size_t i);
  std::span<const std::uint8_t> frame(std::size_t i, std::size_t t) const;
  std::span<std::uint8_t> frame(std::size_t i, std::size_t t);

  std::uint8_t at(std::size_t i, std::size_t t, std::size_t y, std::size_t x,
                  std::size_t ch) const {
    return data_[(((i * shape_.t + t) * shape_.h + y) * shape_.w + x) * shape_.c + ch];
  }

  friend bool operator==(const VideoSet&, const VideoSet&) = default;

 private:
  VideoShape shape_;
  std::vector<std::uint8_t> data_;
};

/// N embedding vectors of dimension D, row-major 32-bit floats. Entries are
/// validated finite on construction (kNonFinite otherwise).
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  EmbeddingSet(std::size_t n, std::size_t d, std::vector<float> data);

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }
  std::span<const float> data() const { return data_; }
  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(data_).subspan(i * d_, d_);
  }

  /// Rows selected by index, in the given order.
  EmbeddingSet select(std::span<const std::size_t> rows) const;

  friend bool operator==(const EmbeddingSet&, const EmbeddingSet&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<float> data_;
};

/// One frame in normalized [0,1] space, row-major (H,W,C).
struct NormalizedFrame {
  std::size_t h = 0;
  std::size_t w = 0;
  std::size_t c = 0;
  std::vector<double> data;

  double at(std::size_t y, std::size_t x, std::size_t ch) const {
    return data[(y * w + x) * c + ch];
  }
};

NormalizedFrame normalize_frame(const VideoSet& v, std::size_t video, std::size_t t);

/// Rounds a normalized value back to a byte, clamping to [0,1] first.
std::uint8_t quantize(double value);

}  // namespace vidmetrics
