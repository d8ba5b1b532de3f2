#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <variant>
#include <vector>

#include "vidmetrics/tensor.hpp"

namespace vidmetrics {

enum class EmbedderKind { kReference, kImported };

struct EmbedderSpec {
  EmbedderKind kind = EmbedderKind::kReference;
  std::size_t dim = 64;
  std::uint64_t seed = 0;
};

enum class FrameEmbedAggregation { kMean, kPairwiseDiffMean };

inline constexpr std::size_t kPoolGrid = 16;
inline constexpr std::size_t kPooledSize = kPoolGrid * kPoolGrid;
inline constexpr std::size_t kReferenceFeatureSize = 4 * kPooledSize;

/// Grayscale (channel mean in [0,1]) of one frame, average-pooled onto a
/// 16x16 grid. Pixel (y, x) falls in cell (y*16/H, x*16/W). Needs H, W >= 16.
std::vector<double> pooled_frame(const VideoSet& v, std::size_t video, std::size_t t);

/// The 1024-wide feature [mean_t S, std_t S, mean_t D, std_t D], where S_t is
/// the pooled frame and D_t = S_{t+1} - S_t. Standard deviations use the
/// population divisor.
std::vector<double> reference_features(const VideoSet& v, std::size_t video);

/// Deterministic reference video embedding: tanh(W f) with f from
/// reference_features and W (dim x 1024) drawn row-major from N(0,1)/32 using
/// splitmix64(seed). Requires T >= 2.
EmbeddingSet reference_embed(const VideoSet& v, std::size_t dim, std::uint64_t seed);

/// Maps one frame (video, t) of a set to an embedding vector.
using FrameEmbedder = std::function<std::vector<double>(const VideoSet&, std::size_t, std::size_t)>;

/// Per-frame baseline embedder: tanh(W p) with p the 256-wide pooled frame
/// and W (dim x 256) drawn from N(0,1)/16.
FrameEmbedder reference_frame_embedder(std::size_t dim, std::uint64_t seed);

/// Averages per-frame embeddings over time, or their consecutive differences.
EmbeddingSet avg_frame_embed(const VideoSet& v, const FrameEmbedder& frame_embedder,
                             FrameEmbedAggregation aggregation);

using EmbedSource = std::variant<const VideoSet*, std::filesystem::path>;

/// Reference spec with videos -> reference_embed; imported spec with a path ->
/// load_embedding_file. Other combinations throw kInvalidArgument.
EmbeddingSet embed_or_import(const EmbedderSpec& spec, const EmbedSource& source);

}  // namespace vidmetrics
