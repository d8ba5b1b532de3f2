#include "vidmetrics/frame_metrics.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "vidmetrics/error.hpp"
#include "vidmetrics/format.hpp"
#include "vidmetrics/parallel.hpp"

namespace vidmetrics {
namespace {

constexpr std::size_t kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

void check_same_shape(const NormalizedFrame& a, const NormalizedFrame& b) {
  if (a.h != b.h || a.w != b.w || a.c != b.c) {
    throw Error(ErrorCode::kShapeMismatch, "frames differ in shape");
  }
}

double frame_score(FrameMetric metric, const NormalizedFrame& a, const NormalizedFrame& b) {
  return metric == FrameMetric::kPsnr ? psnr(a, b) : ssim(a, b);
}

}  // namespace

std::string_view to_string(FrameMetric metric) {
  return metric == FrameMetric::kPsnr ? "psnr" : "ssim";
}

std::optional<FrameMetric> parse_frame_metric(std::string_view name) {
  if (name == "psnr") return FrameMetric::kPsnr;
  if (name == "ssim") return FrameMetric::kSsim;
  return std::nullopt;
}

double psnr(const NormalizedFrame& a, const NormalizedFrame& b) {
  check_same_shape(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(a.data.size());
  if (mse == 0.0) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / mse));
}

std::vector<double> ssim_window() {
  std::vector<double> g(kWindow);
  double sum = 0.0;
  const double center = static_cast<double>(kWindow / 2);
  for (std::size_t k = 0; k < kWindow; ++k) {
    const double d = static_cast<double>(k) - center;
    g[k] = std::exp(-d * d / (2.0 * kWindowSigma * kWindowSigma));
    sum += g[k];
  }
  std::vector<double> window(kWindow * kWindow);
  for (std::size_t y = 0; y < kWindow; ++y) {
    for (std::size_t x = 0; x < kWindow; ++x) window[y * kWindow + x] = g[y] * g[x] / (sum * sum);
  }
  return window;
}

double ssim(const NormalizedFrame& a, const NormalizedFrame& b) {
  check_same_shape(a, b);
  if (a.h < kWindow || a.w < kWindow) {
    throw Error(ErrorCode::kShapeMismatch,
                "SSIM needs frames of at least 11x11, got " + std::to_string(a.h) + "x" +
                    std::to_string(a.w));
  }
  static const std::vector<double> window = ssim_window();
  const std::size_t rows = a.h - kWindow + 1;
  const std::size_t cols = a.w - kWindow + 1;
  double total = 0.0;
  for (std::size_t ch = 0; ch < a.c; ++ch) {
    for (std::size_t y0 = 0; y0 < rows; ++y0) {
      for (std::size_t x0 = 0; x0 < cols; ++x0) {
        double mu_a = 0, mu_b = 0, aa = 0, bb = 0, ab = 0;
        for (std::size_t dy = 0; dy < kWindow; ++dy) {
          for (std::size_t dx = 0; dx < kWindow; ++dx) {
            const double wgt = window[dy * kWindow + dx];
            const double va = a.at(y0 + dy, x0 + dx, ch);
            const double vb = b.at(y0 + dy, x0 + dx, ch);
            mu_a += wgt * va;
            mu_b += wgt * vb;
            aa += wgt * (va * va);
            bb += wgt * (vb * vb);
            ab += wgt * (va * vb);
          }
        }
        // Every term is formed symmetrically in (a, b), so ssim(x, x) == 1
        // and ssim(x, y) == ssim(y, x) hold exactly in floating point.
        const double var_a = aa - mu_a * mu_a;
        const double var_b = bb - mu_b * mu_b;
        const double cov = ab - mu_a * mu_b;
        const double num = (2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2);
        const double den = (mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2);
        total += num / den;
      }
    }
  }
  return total / static_cast<double>(a.c * rows * cols);
}

FrameMetricReport frame_average(FrameMetric metric, const VideoSet& real, const VideoSet& gen) {
  if (real.shape() != gen.shape()) {
    throw Error(ErrorCode::kShapeMismatch, "real and generated sets differ in shape");
  }
  FrameMetricReport report{metric, std::vector<double>(real.n()), 0.0};
  parallel_for(real.n(), [&](std::size_t i) {
    double sum = 0.0;
    for (std::size_t t = 0; t < real.t(); ++t) {
      sum += frame_score(metric, normalize_frame(real, i, t), normalize_frame(gen, i, t));
    }
    report.per_video[i] = sum / static_cast<double>(real.t());
  });
  double sum = 0.0;
  for (double s : report.per_video) sum += s;
  report.aggregate = sum / static_cast<double>(report.per_video.size());
  return report;
}

FrameMetricReport best_of_n(FrameMetric metric, const VideoSet& real,
                            std::span<const VideoSet> candidates) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "best_of_n needs at least one candidate set");
  }
  FrameMetricReport best = frame_average(metric, real, candidates[0]);
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    const auto next = frame_average(metric, real, candidates[k]);
    for (std::size_t i = 0; i < best.per_video.size(); ++i) {
      best.per_video[i] = std::max(best.per_video[i], next.per_video[i]);
    }
  }
  double sum = 0.0;
  for (double s : best.per_video) sum += s;
  best.aggregate = sum / static_cast<double>(best.per_video.size());
  return best;
}

void write_report_csv(const FrameMetricReport& report, std::ostream& out) {
  out << "video_index,score\n";
  for (std::size_t i = 0; i < report.per_video.size(); ++i) {
    out << i << ',' << format_fixed(report.per_video[i]) << '\n';
  }
  out << "aggregate," << format_fixed(report.aggregate) << '\n';
}

}  // namespace vidmetrics
