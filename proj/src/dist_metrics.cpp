#include "vidmetrics/dist_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vidmetrics/error.hpp"

namespace vidmetrics {
namespace {

constexpr double kSymmetryTolerance = 1e-9;

void check_pair(const EmbeddingSet& a, const EmbeddingSet& b) {
  if (a.d() != b.d()) {
    throw Error(ErrorCode::kShapeMismatch, "embedding dimensions differ: " +
                                               std::to_string(a.d()) + " vs " +
                                               std::to_string(b.d()));
  }
  if (a.n() < 2 || b.n() < 2) {
    throw Error(ErrorCode::kInsufficientSamples, "distribution metrics need n >= 2 per set");
  }
}

// Eigenvalues of a symmetric PSD matrix, clamped at zero. Retries once with a
// small diagonal jitter if the solver fails to converge.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve_symmetric(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() == Eigen::Success) return es;
  const double jitter = 1e-10 * std::max(a.trace(), 0.0) / static_cast<double>(a.rows());
  Eigen::MatrixXd shifted = a;
  shifted.diagonal().array() += jitter;
  es.compute(shifted);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidArgument, "symmetric eigensolver did not converge");
  }
  return es;
}

double kernel_value(const double dot, const KernelSpec& k) {
  const double base = dot + k.offset;
  double v = 1.0;
  for (int i = 0; i < k.degree; ++i) v *= base;
  return v;
}

}  // namespace

std::string_view to_string(DistMetric metric) {
  return metric == DistMetric::kFvd ? "fvd" : "kvd";
}

Eigen::MatrixXd to_matrix(const EmbeddingSet& e) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(e.n()), static_cast<Eigen::Index>(e.d()));
  for (std::size_t i = 0; i < e.n(); ++i) {
    const auto row = e.row(i);
    for (std::size_t j = 0; j < e.d(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
    }
  }
  return m;
}

GaussianStats fit_gaussian(const EmbeddingSet& e) {
  if (e.n() < 2) {
    throw Error(ErrorCode::kInsufficientSamples, "fit_gaussian needs at least 2 samples");
  }
  const Eigen::MatrixXd x = to_matrix(e);
  GaussianStats stats;
  stats.n = e.n();
  stats.mu = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - stats.mu.transpose();
  const Eigen::MatrixXd s = centered.transpose() * centered / static_cast<double>(e.n() - 1);
  stats.sigma = 0.5 * (s + s.transpose());
  return stats;
}

Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::kShapeMismatch, "sqrtm_psd needs a square matrix");
  if (a.size() == 0) return a;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw Error(ErrorCode::kNotSymmetric, "sqrtm_psd input is not symmetric");
  }
  const auto es = solve_symmetric(0.5 * (a + a.transpose()));
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd& v = es.eigenvectors();
  Eigen::MatrixXd s = v * root.asDiagonal() * v.transpose();
  return 0.5 * (s + s.transpose());
}

double frechet_distance(const GaussianStats& r, const GaussianStats& g) {
  if (r.mu.size() != g.mu.size() || r.sigma.rows() != g.sigma.rows()) {
    throw Error(ErrorCode::kShapeMismatch, "Gaussian statistics differ in dimension");
  }
  const double mean_term = (r.mu - g.mu).squaredNorm();
  const Eigen::MatrixXd root_r = sqrtm_psd(r.sigma);
  Eigen::MatrixXd inner = root_r * g.sigma * root_r;
  inner = 0.5 * (inner + inner.transpose());
  const auto es = solve_symmetric(inner);
  const double cross = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  const double value = mean_term + r.sigma.trace() + g.sigma.trace() - 2.0 * cross;
  return std::max(0.0, value);
}

MetricValue fvd(const EmbeddingSet& real, const EmbeddingSet& gen) {
  check_pair(real, gen);
  return {frechet_distance(fit_gaussian(real), fit_gaussian(gen)), DistMetric::kFvd, real.n(),
          gen.n()};
}

double polynomial_kernel(std::span<const double> a, std::span<const double> b,
                         const KernelSpec& kernel) {
  if (a.size() != b.size()) throw Error(ErrorCode::kShapeMismatch, "kernel inputs differ in size");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return kernel_value(dot, kernel);
}

double mmd_unbiased(const EmbeddingSet& x, const EmbeddingSet& y, const KernelSpec& kernel) {
  check_pair(x, y);
  const Eigen::MatrixXd xm = to_matrix(x);
  const Eigen::MatrixXd ym = to_matrix(y);
  const Eigen::MatrixXd kxx = xm * xm.transpose();
  const Eigen::MatrixXd kyy = ym * ym.transpose();
  const Eigen::MatrixXd kxy = xm * ym.transpose();
  const auto m = static_cast<double>(x.n());
  const auto n = static_cast<double>(y.n());

  // Row-major loops give a fixed summation order.
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (Eigen::Index i = 0; i < kxx.rows(); ++i) {
    for (Eigen::Index j = 0; j < kxx.cols(); ++j) {
      if (i != j) sxx += kernel_value(kxx(i, j), kernel);
    }
  }
  for (Eigen::Index i = 0; i < kyy.rows(); ++i) {
    for (Eigen::Index j = 0; j < kyy.cols(); ++j) {
      if (i != j) syy += kernel_value(kyy(i, j), kernel);
    }
  }
  for (Eigen::Index i = 0; i < kxy.rows(); ++i) {
    for (Eigen::Index j = 0; j < kxy.cols(); ++j) sxy += kernel_value(kxy(i, j), kernel);
  }
  return sxx / (m * (m - 1)) - 2.0 * sxy / (m * n) + syy / (n * (n - 1));
}

MetricValue kvd(const EmbeddingSet& real, const EmbeddingSet& gen) {
  return {mmd_unbiased(real, gen), DistMetric::kKvd, real.n(), gen.n()};
}

MetricValue distance(DistMetric metric, const EmbeddingSet& real, const EmbeddingSet& gen) {
  return metric == DistMetric::kFvd ? fvd(real, gen) : kvd(real, gen);
}

}  // namespace vidmetrics
