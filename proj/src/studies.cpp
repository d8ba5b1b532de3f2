#include "vidmetrics/studies.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "vidmetrics/error.hpp"
#include "vidmetrics/format.hpp"
#include "vidmetrics/parallel.hpp"
#include "vidmetrics/rng.hpp"

namespace vidmetrics {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kMalformed, std::string("bad ") + what + " value: \"" + s + "\"");
  }
  return v;
}

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kShapeMismatch, "sequences differ in length");
  if (a.size() < 2) throw Error(ErrorCode::kInsufficientSamples, "correlation needs >= 2 points");
  const auto constant = [](std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
  };
  if (constant(a) || constant(b)) {
    throw Error(ErrorCode::kConstantInput, "correlation undefined for a constant sequence");
  }
}

// Which item a verdict prefers; empty for a tie.
std::optional<std::string> preferred(const PairwisePreference& p) {
  switch (p.verdict) {
    case Verdict::kABetter: return p.item_a;
    case Verdict::kBBetter: return p.item_b;
    case Verdict::kTie: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

void write_study_csv(const StudyTable& table, std::ostream& out) {
  out << "condition,value,stderr,repeats\n";
  for (const auto& row : table.rows) {
    out << row.condition << ',' << format_fixed(row.value) << ',';
    if (row.stderr_value) out << format_fixed(*row.stderr_value);
    out << ',' << row.repeats << '\n';
  }
}

StudyTable read_study_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "condition,value,stderr,repeats") {
    throw Error(ErrorCode::kMalformed, "study CSV must start with condition,value,stderr,repeats");
  }
  StudyTable table;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4) throw Error(ErrorCode::kMalformed, "study CSV row needs 4 fields");
    StudyRow row;
    row.condition = f[0];
    row.value = parse_double(f[1], "value");
    if (!f[2].empty()) row.stderr_value = parse_double(f[2], "stderr");
    row.repeats = static_cast<std::size_t>(parse_double(f[3], "repeats"));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> disjoint_subsets(
    std::size_t n, std::size_t size, std::uint64_t seed) {
  if (2 * size > n) {
    throw Error(ErrorCode::kInsufficientSamples,
                "two disjoint subsets of " + std::to_string(size) + " need " +
                    std::to_string(2 * size) + " samples, have " + std::to_string(n));
  }
  SplitMix64 rng(seed);
  auto picked = sample_without_replacement(rng, n, 2 * size);
  std::vector<std::size_t> second(picked.begin() + static_cast<std::ptrdiff_t>(size), picked.end());
  picked.resize(size);
  return {std::move(picked), std::move(second)};
}

StudyTable bias_study(const EmbeddingSet& e, std::span<const std::size_t> sizes,
                      std::size_t repeats, std::uint64_t seed) {
  if (repeats < 2) throw Error(ErrorCode::kInvalidArgument, "bias_study needs repeats >= 2");
  for (std::size_t s : sizes) {
    if (s < 2 || 2 * s > e.n()) {
      throw Error(ErrorCode::kInsufficientSamples,
                  "subset size " + std::to_string(s) + " needs 2 <= size and 2*size <= " +
                      std::to_string(e.n()));
    }
  }
  std::vector<double> values(sizes.size() * repeats);
  parallel_for(values.size(), [&](std::size_t cell) {
    const std::size_t size = sizes[cell / repeats];
    const auto [a, b] = disjoint_subsets(e.n(), size, derive_seed(seed, cell));
    values[cell] = fvd(e.select(a), e.select(b)).value;
  });
  StudyTable table;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const auto first = values.begin() + static_cast<std::ptrdiff_t>(s * repeats);
    const double mean = std::accumulate(first, first + static_cast<std::ptrdiff_t>(repeats), 0.0) /
                        static_cast<double>(repeats);
    double sq = 0.0;
    for (auto it = first; it != first + static_cast<std::ptrdiff_t>(repeats); ++it) {
      sq += (*it - mean) * (*it - mean);
    }
    const double sd = std::sqrt(sq / static_cast<double>(repeats - 1));
    table.rows.push_back({std::to_string(sizes[s]), mean,
                          sd / std::sqrt(static_cast<double>(repeats)), repeats});
  }
  return table;
}

StudyTable noise_study(const VideoSet& clean, std::span<const NoiseKind> kinds,
                       const EmbedderSpec& embed, DistMetric metric, std::uint64_t seed) {
  if (embed.kind != EmbedderKind::kReference) {
    throw Error(ErrorCode::kInvalidArgument, "noise_study embeds videos and needs the reference embedder");
  }
  EmbedderSpec spec = embed;
  spec.seed = seed;
  const EmbeddingSet clean_emb = embed_or_import(spec, &clean);
  StudyTable table;
  for (NoiseKind kind : kinds) {
    const std::string name(to_string(kind));
    table.rows.push_back({name + ":0", distance(metric, clean_emb, clean_emb).value, std::nullopt, 1});
    for (int level = 1; level <= max_intensity(kind); ++level) {
      const VideoSet noisy = apply_noise(clean, {kind, level, seed});
      const EmbeddingSet noisy_emb = embed_or_import(spec, &noisy);
      table.rows.push_back({name + ":" + std::to_string(level),
                            distance(metric, clean_emb, noisy_emb).value, std::nullopt, 1});
    }
  }
  return table;
}

double intensity_correlation(const StudyTable& table, NoiseKind kind) {
  const std::string prefix = std::string(to_string(kind)) + ":";
  std::vector<double> levels, values;
  for (const auto& row : table.rows) {
    if (row.condition.rfind(prefix, 0) == 0) {
      levels.push_back(parse_double(row.condition.substr(prefix.size()), "intensity"));
      values.push_back(row.value);
    }
  }
  return spearman(levels, values);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  return pearson(ra, rb);
}

double kendall(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0 && db == 0) continue;
      if (da == 0) {
        ++ties_a;
      } else if (db == 0) {
        ++ties_b;
      } else if ((da > 0) == (db > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const auto n0 = static_cast<double>(concordant + discordant);
  const double denom = std::sqrt((n0 + static_cast<double>(ties_a)) * (n0 + static_cast<double>(ties_b)));
  return static_cast<double>(concordant - discordant) / denom;
}

std::optional<Verdict> parse_verdict(std::string_view s) {
  if (s == "a_better") return Verdict::kABetter;
  if (s == "b_better") return Verdict::kBBetter;
  if (s == "tie") return Verdict::kTie;
  return std::nullopt;
}

double rater_agreement(std::span<const PairwisePreference> prefs,
                       const std::map<std::string, double>& scores, bool lower_is_better,
                       TieCredit tie_credit) {
  if (prefs.empty()) throw Error(ErrorCode::kInsufficientSamples, "no preferences given");
  const auto score_of = [&](const std::string& item) {
    const auto it = scores.find(item);
    if (it == scores.end()) throw Error(ErrorCode::kMissingScore, "no score for model \"" + item + "\"");
    return it->second;
  };
  double agree = 0.0;
  for (const auto& p : prefs) {
    const double sa = score_of(p.item_a);
    const double sb = score_of(p.item_b);
    if (p.verdict == Verdict::kTie) {
      if (tie_credit == TieCredit::kHalf) agree += 0.5;
      continue;
    }
    if (sa == sb) continue;
    const bool metric_prefers_a = lower_is_better ? sa < sb : sa > sb;
    if (metric_prefers_a == (p.verdict == Verdict::kABetter)) agree += 1.0;
  }
  return agree / static_cast<double>(prefs.size());
}

double inter_rater_agreement(std::span<const PairwisePreference> prefs) {
  // Comparisons keep first-appearance order; verdicts keep input order.
  std::vector<std::string> ids;
  std::map<std::string, std::vector<const PairwisePreference*>> grouped;
  for (const auto& p : prefs) {
    auto& group = grouped[p.comparison_id];
    if (group.empty()) ids.push_back(p.comparison_id);
    group.push_back(&p);
  }
  if (ids.empty()) throw Error(ErrorCode::kInsufficientSamples, "no preferences given");
  std::size_t agree = 0;
  for (const auto& id : ids) {
    const auto& group = grouped[id];
    if (group.size() < 2) {
      throw Error(ErrorCode::kInsufficientSamples,
                  "comparison \"" + id + "\" has fewer than 2 verdicts");
    }
    if (preferred(*group[0]) == preferred(*group[1])) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(ids.size());
}

std::vector<PairwisePreference> read_preferences_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "comparison_id,rater_id,item_a,item_b,verdict") {
    throw Error(ErrorCode::kMalformed,
                "ratings CSV must start with comparison_id,rater_id,item_a,item_b,verdict");
  }
  std::vector<PairwisePreference> prefs;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) throw Error(ErrorCode::kMalformed, "ratings CSV row needs 5 fields");
    const auto verdict = parse_verdict(f[4]);
    if (!verdict) throw Error(ErrorCode::kMalformed, "unknown verdict \"" + f[4] + "\"");
    if (f[2] == f[3]) throw Error(ErrorCode::kMalformed, "item_a equals item_b: " + f[2]);
    prefs.push_back({f[0], f[1], f[2], f[3], *verdict});
  }
  return prefs;
}

std::map<std::string, double> read_scores_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "model,score") {
    throw Error(ErrorCode::kMalformed, "scores CSV must start with model,score");
  }
  std::map<std::string, double> scores;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 2) throw Error(ErrorCode::kMalformed, "scores CSV row needs 2 fields");
    scores[f[0]] = parse_double(f[1], "score");
  }
  return scores;
}

}  // namespace vidmetrics
