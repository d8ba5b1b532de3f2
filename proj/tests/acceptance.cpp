#include <Eigen/Cholesky>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "vidmetrics/dist_metrics.hpp"
#include "vidmetrics/frame_metrics.hpp"
#include "vidmetrics/perturb.hpp"
#include "vidmetrics/rng.hpp"
#include "vidmetrics/studies.hpp"
#include "vidmetrics/synthgen.hpp"

using namespace vidmetrics;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

Eigen::MatrixXd random_spd(std::size_t d, SplitMix64& rng, double ridge) {
  Eigen::MatrixXd b(d, d);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = rng.standard_normal();
  return b * b.transpose() / static_cast<double>(d) + ridge * Eigen::MatrixXd::Identity(d, d);
}

EmbeddingSet sample_gaussian(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma, std::size_t n,
                             SplitMix64& rng) {
  const Eigen::MatrixXd l = sigma.llt().matrixL();
  const auto d = static_cast<std::size_t>(mu.size());
  std::vector<float> data(n * d);
  Eigen::VectorXd z(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) z[k] = rng.standard_normal();
    const Eigen::VectorXd x = mu + l * z;
    for (std::size_t k = 0; k < d; ++k) data[i * d + k] = static_cast<float>(x[k]);
  }
  return EmbeddingSet(n, d, std::move(data));
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

GaussianStats stats(Eigen::VectorXd mu, Eigen::MatrixXd sigma) { return {std::move(mu), std::move(sigma), 0}; }

Outcome a1() {
  const auto start = std::chrono::steady_clock::now();
  SplitMix64 rng(101);
  constexpr std::size_t d = 8, n = 10000;
  Eigen::VectorXd mu_r(d), mu_g(d);
  for (std::size_t k = 0; k < d; ++k) {
    mu_r[k] = rng.standard_normal();
    mu_g[k] = rng.standard_normal();
  }
  const Eigen::MatrixXd sigma_r = random_spd(d, rng, 0.5);
  const Eigen::MatrixXd sigma_g = random_spd(d, rng, 0.5);
  const double analytic = frechet_distance(stats(mu_r, sigma_r), stats(mu_g, sigma_g));
  const double sampled =
      fvd(sample_gaussian(mu_r, sigma_r, n, rng), sample_gaussian(mu_g, sigma_g, n, rng)).value;
  const double rel = std::abs(sampled - analytic) / (1.0 + analytic);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {rel < 0.05 && secs < 10.0, "analytic=" + std::to_string(analytic) + " fvd=" +
                                         std::to_string(sampled) + " rel=" + sci(rel) +
                                         " seconds=" + std::to_string(secs)};
}

Outcome a2() {
  double worst_fvd = 0.0, worst_frechet = 0.0;
  for (std::uint64_t f = 0; f < 20; ++f) {
    SplitMix64 rng(derive_seed(202, f));
    const std::size_t d = 2 + rng.below(15);
    const std::size_t n = d + 5 + rng.below(60);
    const EmbeddingSet x(n, d, testing::gaussian_rows(n, d, derive_seed(203, f)));
    worst_fvd = std::max(worst_fvd, fvd(x, x).value);
    Eigen::VectorXd mu(d);
    for (std::size_t k = 0; k < d; ++k) mu[k] = rng.standard_normal();
    const auto p = stats(mu, random_spd(d, rng, 0.1));
    worst_frechet = std::max(worst_frechet, frechet_distance(p, p));
  }
  return {worst_fvd <= 1e-6 && worst_frechet <= 1e-8,
          "max fvd(X,X)=" + sci(worst_fvd) + " max frechet(p,p)=" + sci(worst_frechet)};
}

Outcome a3() {
  constexpr std::size_t d = 64, n = 2048;
  const EmbeddingSet e(n, d, testing::gaussian_rows(n, d, 303));
  const std::vector<std::size_t> sizes{16, 64, 256, 1024};
  const auto table = bias_study(e, sizes, 50, 304);
  bool ok = table.rows.size() == sizes.size();
  std::string detail = "means:";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const double v = table.rows[i].value;
    detail += " " + table.rows[i].condition + "=" + std::to_string(v);
    ok = ok && v > 0.0 && table.rows[i].repeats == 50 && table.rows[i].stderr_value.has_value();
    if (i > 0) ok = ok && v < table.rows[i - 1].value;
  }
  return {ok, detail};
}

Outcome a4() {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kSpriteToBorder;
  spec.t = 48;
  spec.h = 32;
  spec.w = 32;
  spec.seed = 1;
  const auto clean = generate(spec, 256);
  const auto table = noise_study(clean, kAllNoiseKinds, {EmbedderKind::kReference, 32, 0}, DistMetric::kFvd, 7);
  bool ok = true;
  std::string detail = "spearman:";
  for (const auto kind : kAllNoiseKinds) {
    const double rho = intensity_correlation(table, kind);
    const double bound = is_temporal(kind) ? 0.8 : 0.9;
    ok = ok && rho >= bound;
    detail += " " + std::string(to_string(kind)) + "=" + std::to_string(rho);
  }
  return {ok, detail};
}

double brute_mmd(const EmbeddingSet& x, const EmbeddingSet& y) {
  const auto k = [](std::span<const float> a, std::span<const float> b) {
    long double dot = 0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += static_cast<long double>(a[i]) * b[i];
    const long double base = dot + 1.0L;
    return base * base * base;
  };
  const auto m = static_cast<long double>(x.n()), n = static_cast<long double>(y.n());
  long double xx = 0, yy = 0, xy = 0;
  for (std::size_t i = 0; i < x.n(); ++i)
    for (std::size_t j = 0; j < x.n(); ++j)
      if (i != j) xx += k(x.row(i), x.row(j));
  for (std::size_t i = 0; i < y.n(); ++i)
    for (std::size_t j = 0; j < y.n(); ++j)
      if (i != j) yy += k(y.row(i), y.row(j));
  for (std::size_t i = 0; i < x.n(); ++i)
    for (std::size_t j = 0; j < y.n(); ++j) xy += k(x.row(i), y.row(j));
  return static_cast<double>(xx / (m * (m - 1)) + yy / (n * (n - 1)) - 2.0L * xy / (m * n));
}

Outcome a5() {
  double worst = 0.0;
  for (std::uint64_t f = 0; f < 100; ++f) {
    SplitMix64 rng(derive_seed(505, f));
    const std::size_t m = 2 + rng.below(5), n = 2 + rng.below(5), d = 1 + rng.below(8);
    const EmbeddingSet x(m, d, testing::gaussian_rows(m, d, derive_seed(506, f)));
    const EmbeddingSet y(n, d, testing::gaussian_rows(n, d, derive_seed(507, f)));
    worst = std::max(worst, std::abs(mmd_unbiased(x, y) - brute_mmd(x, y)));
  }
  const EmbeddingSet s(2, 1, {0.0f, 1.0f});
  const double scalar = mmd_unbiased(s, s);
  return {worst <= 1e-12 && scalar == -3.5,
          "max abs diff=" + sci(worst) + " scalar fixture=" + std::to_string(scalar)};
}

Outcome a6() {
  double worst_residual = 0.0, worst_swap = 0.0;
  for (std::uint64_t f = 0; f < 50; ++f) {
    SplitMix64 rng(derive_seed(606, f));
    const std::size_t d = 1 + rng.below(32);
    const Eigen::MatrixXd a = random_spd(d, rng, 1e-3);
    const Eigen::MatrixXd s = sqrtm_psd(a);
    worst_residual = std::max(worst_residual, (s * s - a).norm() / a.norm());
    Eigen::VectorXd mu_r(d), mu_g(d);
    for (std::size_t k = 0; k < d; ++k) {
      mu_r[k] = rng.standard_normal();
      mu_g[k] = rng.standard_normal();
    }
    const auto r = stats(mu_r, a);
    const auto g = stats(mu_g, random_spd(d, rng, 1e-3));
    const double fwd = frechet_distance(r, g), rev = frechet_distance(g, r);
    worst_swap = std::max(worst_swap, std::abs(fwd - rev) / std::max(1.0, std::abs(fwd)));
  }
  return {worst_residual < 1e-8 && worst_swap < 1e-8,
          "max residual=" + sci(worst_residual) + " max swap rel=" + sci(worst_swap)};
}

// SSIM over valid 11x11 windows from centered moments with a freshly built window.
double ssim_oracle(const NormalizedFrame& a, const NormalizedFrame& b) {
  constexpr int k = 11;
  std::vector<double> w(k * k);
  double sum = 0.0;
  for (int y = 0; y < k; ++y)
    for (int x = 0; x < k; ++x) {
      const double dy = y - 5, dx = x - 5;
      w[y * k + x] = std::exp(-(dy * dy + dx * dx) / (2.0 * 1.5 * 1.5));
      sum += w[y * k + x];
    }
  for (auto& v : w) v /= sum;
  const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t ch = 0; ch < a.c; ++ch)
    for (std::size_t y0 = 0; y0 + k <= a.h; ++y0)
      for (std::size_t x0 = 0; x0 + k <= a.w; ++x0) {
        double ma = 0, mb = 0;
        for (int y = 0; y < k; ++y)
          for (int x = 0; x < k; ++x) {
            ma += w[y * k + x] * a.at(y0 + y, x0 + x, ch);
            mb += w[y * k + x] * b.at(y0 + y, x0 + x, ch);
          }
        double va = 0, vb = 0, cov = 0;
        for (int y = 0; y < k; ++y)
          for (int x = 0; x < k; ++x) {
            const double da = a.at(y0 + y, x0 + x, ch) - ma, db = b.at(y0 + y, x0 + x, ch) - mb;
            va += w[y * k + x] * da * da;
            vb += w[y * k + x] * db * db;
            cov += w[y * k + x] * da * db;
          }
        total += (2 * ma * mb + c1) * (2 * cov + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
        ++count;
      }
  return total / static_cast<double>(count);
}

NormalizedFrame constant_frame(std::size_t h, std::size_t w, std::size_t c, std::uint8_t value) {
  VideoSet v(VideoShape{1, 1, h, w, c});
  for (auto& b : v.frame(0, 0)) b = value;
  return normalize_frame(v, 0, 0);
}

Outcome a7() {
  bool identities = true;
  for (std::uint64_t f = 0; f < 10; ++f) {
    const auto v = testing::random_video({2, 3, 16 + f, 20 + f, f % 2 ? 3u : 1u}, derive_seed(707, f));
    for (std::size_t i = 0; i < v.shape().n; ++i)
      for (std::size_t t = 0; t < v.shape().t; ++t) {
        const auto x = normalize_frame(v, i, t);
        identities = identities && ssim(x, x) == 1.0 && psnr(x, x) == 100.0;
      }
  }
  const double zero_one = psnr(constant_frame(16, 16, 3, 0), constant_frame(16, 16, 3, 255));
  double worst = 0.0;
  SplitMix64 rng(708);
  for (int f = 0; f < 20; ++f) {
    const auto a = constant_frame(12 + rng.below(10), 12 + rng.below(10), 1, 0);
    const auto va = static_cast<std::uint8_t>(rng.below(256)), vb = static_cast<std::uint8_t>(rng.below(256));
    const auto x = constant_frame(a.h, a.w, 1, va), y = constant_frame(a.h, a.w, 1, vb);
    worst = std::max(worst, std::abs(ssim(x, y) - ssim_oracle(x, y)));
  }
  return {identities && zero_one == 0.0 && worst <= 1e-9,
          std::string("identities=") + (identities ? "ok" : "broken") +
              " psnr(zeros,ones)=" + std::to_string(zero_one) + " constant ssim max diff=" + sci(worst)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome a8() {
  const auto dir = testing::temp_dir("acceptance_a8");
  const std::string cli = VIDMETRICS_CLI_PATH;
  const auto pipeline = [&](const std::string& tag, const std::string& threads) {
    const std::string env = "VIDMETRICS_THREADS=" + threads + " ";
    const auto p = [&](const std::string& name) { return (dir / (tag + name)).string(); };
    const std::string cmd =
        env + cli + " gen --scenario collector --n 24 --t 32 --h 32 --w 32 --seed 11 --out " + p("c.rvid") +
        " && " + env + cli + " perturb --in " + p("c.rvid") + " --out " + p("n.rvid") +
        " --kind gauss_blur --intensity 4 --seed 11" + " && " + env + cli + " embed --in " + p("c.rvid") +
        " --out " + p("c.remb") + " --dim 16 --seed 11" + " && " + env + cli + " embed --in " + p("n.rvid") +
        " --out " + p("n.remb") + " --dim 16 --seed 11" + " && " + env + cli + " fvd --real " + p("c.remb") +
        " --gen " + p("n.remb") + " > " + p("stdout.txt");
    return std::system(cmd.c_str()) == 0;
  };
  const bool ran = pipeline("r1_", "1") && pipeline("r2_", "1") && pipeline("r3_", "4");
  bool same = ran;
  for (const char* f : {"c.rvid", "n.rvid", "c.remb", "n.remb", "stdout.txt"}) {
    const auto first = slurp(dir / (std::string("r1_") + f));
    same = same && !first.empty() && first == slurp(dir / (std::string("r2_") + f)) &&
           first == slurp(dir / (std::string("r3_") + f));
  }
  auto out = slurp(dir / "r1_stdout.txt");
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return {same, "runs=" + std::string(ran ? "ok" : "failed") + " stdout=" + out};
}

Outcome a9() {
  const std::vector<double> a{1, 2, 3}, b{3, 1, 2};
  const std::vector<double> c{1, 2, 3, 4}, d{1, 3, 2, 4};
  const double rho = spearman(a, b), tau = kendall(c, d);
  // Lower is better: m1 (1.0) beats m2 (2.0) beats m3 (3.0).
  const std::map<std::string, double> scores{{"m1", 1.0}, {"m2", 2.0}, {"m3", 3.0}};
  const auto pref = [](std::string cid, std::string rid, std::string x, std::string y, Verdict v) {
    return PairwisePreference{std::move(cid), std::move(rid), std::move(x), std::move(y), v};
  };
  const std::vector<PairwisePreference> prefs{
      pref("c1", "r1", "m1", "m2", Verdict::kABetter),  // agrees
      pref("c1", "r2", "m2", "m1", Verdict::kBBetter),  // agrees
      pref("c2", "r1", "m2", "m3", Verdict::kBBetter),  // disagrees
      pref("c2", "r2", "m2", "m3", Verdict::kTie),      // tie
      pref("c3", "r1", "m1", "m3", Verdict::kABetter),  // agrees
      pref("c3", "r2", "m1", "m3", Verdict::kBBetter),  // disagrees
  };
  const double strict = rater_agreement(prefs, scores, true);
  const double half = rater_agreement(prefs, scores, true, TieCredit::kHalf);
  const double flipped = rater_agreement(prefs, scores, false);
  // Raters prefer the same item on c1 only.
  const double inter = inter_rater_agreement(prefs);
  const bool ok = rho == -0.5 && std::abs(tau - 2.0 / 3.0) < 1e-15 && strict == 0.5 && half == 3.5 / 6.0 &&
                  flipped == 2.0 / 6.0 && inter == 1.0 / 3.0;
  return {ok, "spearman=" + std::to_string(rho) + " kendall=" + std::to_string(tau) + " agreement=" +
                  std::to_string(strict) + "/" + std::to_string(half) + "/" + std::to_string(flipped) +
                  " inter_rater=" + std::to_string(inter)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"A1 analytic frechet oracle", a1}, {"A2 identity", a2},
      {"A3 sample-size bias", a3},        {"A4 noise monotonicity", a4},
      {"A5 mmd oracle", a5},              {"A6 sqrtm residual and symmetry", a6},
      {"A7 frame metrics", a7},           {"A8 determinism", a8},
      {"A9 correlation and agreement", a9},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
