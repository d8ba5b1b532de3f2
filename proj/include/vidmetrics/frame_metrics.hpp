#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vidmetrics/tensor.hpp"

namespace vidmetrics {

enum class FrameMetric { kPsnr, kSsim };

std::string_view to_string(FrameMetric metric);
std::optional<FrameMetric> parse_frame_metric(std::string_view name);

inline constexpr double kPsnrCapDb = 100.0;

/// 10 log10(1 / MSE) on normalized frames, capped at kPsnrCapDb.
double psnr(const NormalizedFrame& a, const NormalizedFrame& b);

/// Windowed SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03 on
/// [0,1] data, valid window positions only. Computed per channel and averaged
/// over channels and positions. Requires H, W >= 11.
double ssim(const NormalizedFrame& a, const NormalizedFrame& b);

/// Normalized 11x11 window weights, row-major.
std::vector<double> ssim_window();

struct FrameMetricReport {
  FrameMetric metric;
  std::vector<double> per_video;
  double aggregate = 0.0;
};

/// Per video, the metric averaged over its T index-paired frames; aggregate is
/// the mean over videos.
FrameMetricReport frame_average(FrameMetric metric, const VideoSet& real, const VideoSet& gen);

/// Per video, the best (maximum) frame-averaged score over all candidate sets.
FrameMetricReport best_of_n(FrameMetric metric, const VideoSet& real,
                            std::span<const VideoSet> candidates);

/// CSV: header "video_index,score", one row per video, then "aggregate,<mean>".
void write_report_csv(const FrameMetricReport& report, std::ostream& out);

}  // namespace vidmetrics
