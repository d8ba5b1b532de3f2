#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vidmetrics/dist_metrics.hpp"
#include "vidmetrics/embedder.hpp"
#include "vidmetrics/perturb.hpp"
#include "vidmetrics/tensor.hpp"

namespace vidmetrics {

struct StudyRow {
  std::string condition;
  double value = 0.0;
  std::optional<double> stderr_value;  // present only when repeats >= 2
  std::size_t repeats = 1;
};

struct StudyTable {
  std::vector<StudyRow> rows;
};

/// CSV with header `condition,value,stderr,repeats`; stderr is empty when absent.
void write_study_csv(const StudyTable& table, std::ostream& out);
StudyTable read_study_csv(std::istream& in);

/// Two disjoint index sets of `size` each, drawn without replacement from [0, n).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> disjoint_subsets(
    std::size_t n, std::size_t size, std::uint64_t seed);

/// For each size, FVD between two disjoint random subsets, repeated; one row
/// per size with mean, standard error (sample sd / sqrt(repeats)) and count.
/// Repeat r of size index s uses sub-seed derive_seed(seed, s * repeats + r).
StudyTable bias_study(const EmbeddingSet& e, std::span<const std::size_t> sizes,
                      std::size_t repeats, std::uint64_t seed);

/// For each kind, rows "kind:0" (clean vs clean) and "kind:L" for every valid
/// level L: metric between the embedded clean set and the embedded perturbed
/// set. Every cell perturbs with the same `seed`, and the reference embedder
/// is seeded with `seed` too, so a row can be reproduced from the CLI.
StudyTable noise_study(const VideoSet& clean, std::span<const NoiseKind> kinds,
                       const EmbedderSpec& embed, DistMetric metric, std::uint64_t seed);

/// Spearman correlation of intensity vs value over a noise_study kind's rows.
double intensity_correlation(const StudyTable& table, NoiseKind kind);

double pearson(std::span<const double> a, std::span<const double> b);
/// Pearson correlation of average ranks.
double spearman(std::span<const double> a, std::span<const double> b);
/// Tie-adjusted Kendall tau-b.
double kendall(std::span<const double> a, std::span<const double> b);

/// 1-based ranks with ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> x);

enum class Verdict { kABetter, kBBetter, kTie };

struct PairwisePreference {
  std::string comparison_id;
  std::string rater_id;
  std::string item_a;
  std::string item_b;
  Verdict verdict = Verdict::kTie;
};

std::optional<Verdict> parse_verdict(std::string_view s);

enum class TieCredit {
  kNone,  // a tie verdict never agrees with the metric
  kHalf,  // a tie verdict scores 1/2
};

/// Fraction of preferences whose verdict matches the ordering the scores
/// induce. Throws kMissingScore if an item has no score.
double rater_agreement(std::span<const PairwisePreference> prefs,
                       const std::map<std::string, double>& scores, bool lower_is_better,
                       TieCredit tie_credit = TieCredit::kNone);

/// Fraction of comparisons whose first two verdicts (in input order) agree.
/// Verdicts are compared by the item they prefer, so raters may list the pair
/// in either order.
double inter_rater_agreement(std::span<const PairwisePreference> prefs);

/// CSV `comparison_id,rater_id,item_a,item_b,verdict`.
std::vector<PairwisePreference> read_preferences_csv(std::istream& in);
/// CSV `model,score`.
std::map<std::string, double> read_scores_csv(std::istream& in);

}  // namespace vidmetrics
