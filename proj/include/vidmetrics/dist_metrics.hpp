#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "vidmetrics/tensor.hpp"

namespace vidmetrics {

/// Mean and covariance (divisor n - 1) of an embedding sample.
struct GaussianStats {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  std::size_t n = 0;
};

enum class DistMetric { kFvd, kKvd };

std::string_view to_string(DistMetric metric);

struct MetricValue {
  double value = 0.0;
  DistMetric metric = DistMetric::kFvd;
  std::size_t n_real = 0;
  std::size_t n_gen = 0;
};

/// Polynomial kernel k(a, b) = (a.b + offset)^degree.
struct KernelSpec {
  int degree = 3;
  double offset = 1.0;
};

GaussianStats fit_gaussian(const EmbeddingSet& e);

/// Principal square root of a symmetric PSD matrix via symmetric
/// eigendecomposition, with negative eigenvalues clamped to zero. Throws
/// kNotSymmetric when max|A - A^T| exceeds 1e-9 * max(1, max|A|).
Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& a);

/// |mu_r - mu_g|^2 + Tr(S_r) + Tr(S_g) - 2 Tr((S_r^1/2 S_g S_r^1/2)^1/2),
/// clamped at zero.
double frechet_distance(const GaussianStats& r, const GaussianStats& g);

MetricValue fvd(const EmbeddingSet& real, const EmbeddingSet& gen);

double polynomial_kernel(std::span<const double> a, std::span<const double> b,
                         const KernelSpec& kernel = {});

/// Unbiased squared-MMD estimate; off-diagonal within-set terms, full cross term.
double mmd_unbiased(const EmbeddingSet& x, const EmbeddingSet& y, const KernelSpec& kernel = {});

MetricValue kvd(const EmbeddingSet& real, const EmbeddingSet& gen);

MetricValue distance(DistMetric metric, const EmbeddingSet& real, const EmbeddingSet& gen);

/// Embedding rows widened to double, one row per sample.
Eigen::MatrixXd to_matrix(const EmbeddingSet& e);

}  // namespace vidmetrics
