#include "vidmetrics/embedder.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "vidmetrics/error.hpp"
#include "vidmetrics/parallel.hpp"
#include "vidmetrics/rng.hpp"
#include "vidmetrics/tensor_io.hpp"

namespace vidmetrics {
namespace {

Eigen::MatrixXd projection(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
  Eigen::MatrixXd w(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.standard_normal() * scale;
  }
  return w;
}

void check_poolable(const VideoSet& v) {
  if (v.h() < kPoolGrid || v.w() < kPoolGrid) {
    throw Error(ErrorCode::kInvalidArgument, "reference embedder needs frames of at least 16x16");
  }
}

// Mean and population standard deviation over a list of equal-length vectors.
void moments(const std::vector<std::vector<double>>& xs, double* mean_out, double* std_out) {
  const std::size_t len = xs.front().size();
  const auto count = static_cast<double>(xs.size());
  for (std::size_t k = 0; k < len; ++k) {
    double sum = 0.0;
    for (const auto& x : xs) sum += x[k];
    const double mean = sum / count;
    double sq = 0.0;
    for (const auto& x : xs) sq += (x[k] - mean) * (x[k] - mean);
    mean_out[k] = mean;
    std_out[k] = std::sqrt(sq / count);
  }
}

}  // namespace

std::vector<double> pooled_frame(const VideoSet& v, std::size_t video, std::size_t t) {
  check_poolable(v);
  const auto frame = v.frame(video, t);
  std::vector<double> sums(kPooledSize, 0.0);
  std::vector<std::size_t> counts(kPooledSize, 0);
  for (std::size_t y = 0; y < v.h(); ++y) {
    const std::size_t gy = y * kPoolGrid / v.h();
    for (std::size_t x = 0; x < v.w(); ++x) {
      const std::size_t gx = x * kPoolGrid / v.w();
      double gray = 0.0;
      for (std::size_t ch = 0; ch < v.c(); ++ch) gray += frame[(y * v.w() + x) * v.c() + ch];
      sums[gy * kPoolGrid + gx] += gray / (255.0 * static_cast<double>(v.c()));
      ++counts[gy * kPoolGrid + gx];
    }
  }
  for (std::size_t k = 0; k < kPooledSize; ++k) sums[k] /= static_cast<double>(counts[k]);
  return sums;
}

std::vector<double> reference_features(const VideoSet& v, std::size_t video) {
  if (v.t() < 2) throw Error(ErrorCode::kInvalidArgument, "reference embedder needs T >= 2");
  std::vector<std::vector<double>> pooled(v.t());
  for (std::size_t t = 0; t < v.t(); ++t) pooled[t] = pooled_frame(v, video, t);
  std::vector<std::vector<double>> diffs(v.t() - 1, std::vector<double>(kPooledSize));
  for (std::size_t t = 0; t + 1 < v.t(); ++t) {
    for (std::size_t k = 0; k < kPooledSize; ++k) diffs[t][k] = pooled[t + 1][k] - pooled[t][k];
  }
  std::vector<double> f(kReferenceFeatureSize);
  moments(pooled, f.data(), f.data() + kPooledSize);
  moments(diffs, f.data() + 2 * kPooledSize, f.data() + 3 * kPooledSize);
  return f;
}

EmbeddingSet reference_embed(const VideoSet& v, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dim must be >= 1");
  if (v.t() < 2) throw Error(ErrorCode::kInvalidArgument, "reference embedder needs T >= 2");
  check_poolable(v);
  const Eigen::MatrixXd w = projection(dim, kReferenceFeatureSize, seed);
  std::vector<float> out(v.n() * dim);
  parallel_for(v.n(), [&](std::size_t i) {
    const auto f = reference_features(v, i);
    const Eigen::VectorXd z =
        w * Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
    for (std::size_t j = 0; j < dim; ++j) {
      out[i * dim + j] = static_cast<float>(std::tanh(z(static_cast<Eigen::Index>(j))));
    }
  });
  return EmbeddingSet(v.n(), dim, std::move(out));
}

FrameEmbedder reference_frame_embedder(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dim must be >= 1");
  auto w = std::make_shared<const Eigen::MatrixXd>(projection(dim, kPooledSize, seed));
  return [w](const VideoSet& v, std::size_t video, std::size_t t) {
    const auto p = pooled_frame(v, video, t);
    const Eigen::VectorXd z =
        *w * Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
    std::vector<double> e(static_cast<std::size_t>(z.size()));
    for (Eigen::Index j = 0; j < z.size(); ++j) e[static_cast<std::size_t>(j)] = std::tanh(z(j));
    return e;
  };
}

EmbeddingSet avg_frame_embed(const VideoSet& v, const FrameEmbedder& frame_embedder,
                             FrameEmbedAggregation aggregation) {
  const bool diff = aggregation == FrameEmbedAggregation::kPairwiseDiffMean;
  if (diff && v.t() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "pairwise-difference aggregation needs T >= 2");
  }
  std::vector<std::vector<double>> rows(v.n());
  parallel_for(v.n(), [&](std::size_t i) {
    std::vector<std::vector<double>> per_frame(v.t());
    for (std::size_t t = 0; t < v.t(); ++t) per_frame[t] = frame_embedder(v, i, t);
    std::vector<double> acc(per_frame.front().size(), 0.0);
    if (diff) {
      for (std::size_t t = 0; t + 1 < v.t(); ++t) {
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += per_frame[t + 1][k] - per_frame[t][k];
      }
      for (double& a : acc) a /= static_cast<double>(v.t() - 1);
    } else {
      for (const auto& e : per_frame) {
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += e[k];
      }
      for (double& a : acc) a /= static_cast<double>(v.t());
    }
    rows[i] = std::move(acc);
  });
  const std::size_t dim = rows.front().size();
  std::vector<float> out;
  out.reserve(v.n() * dim);
  for (const auto& r : rows) {
    if (r.size() != dim) throw Error(ErrorCode::kShapeMismatch, "frame embedder changed width");
    for (double x : r) out.push_back(static_cast<float>(x));
  }
  return EmbeddingSet(v.n(), dim, std::move(out));
}

EmbeddingSet embed_or_import(const EmbedderSpec& spec, const EmbedSource& source) {
  if (spec.kind == EmbedderKind::kReference) {
    const auto* videos = std::get_if<const VideoSet*>(&source);
    if (videos == nullptr || *videos == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "reference embedder needs a video set");
    }
    return reference_embed(**videos, spec.dim, spec.seed);
  }
  const auto* path = std::get_if<std::filesystem::path>(&source);
  if (path == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "imported embeddings need an REMB file path");
  }
  return load_embedding_file(*path);
}

}  // namespace vidmetrics
